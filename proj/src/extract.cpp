#include "minsec/extract.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace minsec {

namespace {

constexpr double kPi = std::numbers::pi;

// Overlap length of [a, b] with [-t, t] on the circle (a, b within (-2pi, 2pi)).
double arc_overlap(double a, double b, double t) {
  double total = 0;
  for (int shift = -1; shift <= 1; ++shift) {
    const double lo = std::max(a + 2 * kPi * shift, -t);
    const double hi = std::min(b + 2 * kPi * shift, t);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

int ExtractedField::num_undefined() const {
  return static_cast<int>(std::count(defined.begin(), defined.end(), 0));
}

ExtractedField extract_field(const Eigen::VectorXcd& f1, int degree) {
  ExtractedField out;
  const Eigen::Index n = f1.size();
  out.degree = degree;
  out.z = Eigen::VectorXcd::Zero(n);
  out.angle = Eigen::VectorXd::Zero(n);
  out.confidence = f1.cwiseAbs();
  out.defined.assign(n, 0);
  for (Eigen::Index v = 0; v < n; ++v) {
    if (out.confidence[v] <= 1e-12) continue;
    out.z[v] = cdouble(0, -1) * std::conj(f1[v]) / out.confidence[v];
    out.angle[v] = std::arg(out.z[v]);
    out.defined[v] = 1;
  }
  return out;
}

ExtractedField extract_field(const Problem& p, const BundleState& s) {
  return extract_field(s.f.at(1), p.config().degree);
}

ExtractedField field_from_angles(const Eigen::VectorXd& angle, int degree) {
  ExtractedField out;
  out.degree = degree;
  out.angle = angle;
  out.z.resize(angle.size());
  for (Eigen::Index v = 0; v < angle.size(); ++v) out.z[v] = std::polar(1.0, angle[v]);
  out.confidence = Eigen::VectorXd::Ones(angle.size());
  out.defined.assign(angle.size(), 1);
  return out;
}

double SingularitySet::index_sum() const {
  double s = 0;
  for (const auto& c : clusters) s += c.index;
  return s;
}

SingularitySet extract_singularities(const TriMesh& mesh, const Eigen::VectorXd& gamma,
                                     const Eigen::VectorXd& edge_mass, int degree, double threshold) {
  SingularitySet set;
  set.degree = degree;
  const int ne = static_cast<int>(gamma.size());
  set.total_mass = edge_mass.dot(gamma);
  const double peak = ne > 0 ? gamma.cwiseAbs().maxCoeff() : 0.0;
  if (!(peak > 0)) {
    set.unclustered_mass = set.total_mass;
    return set;
  }
  std::vector<int> parent(mesh.num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> selected;
  for (int e = 0; e < ne; ++e) {
    if (std::abs(gamma[e]) <= threshold * peak) continue;
    selected.push_back(e);
    const Edge& ed = mesh.edge(mesh.interior_edges()[e]);
    parent[find(parent, ed.v0)] = find(parent, ed.v1);
  }
  std::vector<int> cluster_of(mesh.num_vertices(), -1);
  double clustered = 0;
  std::vector<double> weight;
  for (int e : selected) {
    const Edge& ed = mesh.edge(mesh.interior_edges()[e]);
    const int root = find(parent, ed.v0);
    if (cluster_of[root] < 0) {
      cluster_of[root] = static_cast<int>(set.clusters.size());
      set.clusters.emplace_back();
      weight.push_back(0);
    }
    const int ci = cluster_of[root];
    Singularity& c = set.clusters[ci];
    const double m = edge_mass[e] * gamma[e];
    const double w = std::abs(m);
    c.edges.push_back(e);
    c.mass += m;
    c.position += w * 0.5 * (mesh.position(ed.v0) + mesh.position(ed.v1));
    weight[ci] += w;
    clustered += m;
  }
  for (std::size_t i = 0; i < set.clusters.size(); ++i) {
    Singularity& c = set.clusters[i];
    if (weight[i] > 0) c.position /= weight[i];
    c.index = c.mass / degree;
    c.rounded = std::round(c.index * degree) / degree;
    c.residual = c.index - c.rounded;
  }
  set.unclustered_mass = set.total_mass - clustered;
  return set;
}

std::vector<double> default_cdf_grid() {
  std::vector<double> g(33);
  for (int m = 0; m <= 32; ++m) g[m] = kPi * m / 32;
  return g;
}

namespace {

// Calls fn(vertex, weight, signed offset from the field angle) for every sample.
template <class Fn>
void for_each_fiber_sample(const Problem& p, const BundleState& s, const ExtractedField& field, Fn&& fn) {
  const TriMesh& mesh = p.mesh();
  const int N = p.fiber().N;
  const double inv_r2 = 1.0 / (p.config().radius * p.config().radius);
  const int d = p.config().degree;
  for (int c = 0; c < mesh.num_corners(); ++c) {
    const int v = mesh.corner_vertex(c);
    if (!field.defined[v]) continue;
    const double shift = d * std::arg(p.atlas().corner_transport[c]);
    const double corner_area = mesh.face_area(c / 3) / 3;
    for (int m = 0; m < N; ++m) {
      const double hx = s.sigma.hx(c, m), hy = s.sigma.hy(c, m), sv = s.sigma.v(c, m);
      const double w = corner_area * std::sqrt(hx * hx + hy * hy + inv_r2 * sv * sv);
      if (w <= 0) continue;
      fn(v, w, std::remainder(p.fiber().theta(m) - shift - field.angle[v], 2 * kPi));
    }
  }
}

}  // namespace

std::vector<double> concentration_cdf(const Problem& p, const BundleState& s, const ExtractedField& field,
                                      const std::vector<double>& thetas) {
  const TriMesh& mesh = p.mesh();
  const int nv = mesh.num_vertices();
  const double h = kPi / p.fiber().N;
  const std::size_t nt = thetas.size();
  Eigen::MatrixXd inside = Eigen::MatrixXd::Zero(nv, nt);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(nv);
  for_each_fiber_sample(p, s, field, [&](int v, double w, double off) {
    total[v] += w;
    for (std::size_t t = 0; t < nt; ++t) inside(v, t) += w * arc_overlap(off - h, off + h, thetas[t]) / (2 * h);
  });
  std::vector<double> cdf(nt, 0.0);
  double area = 0;
  for (int v = 0; v < nv; ++v) {
    if (!(total[v] > 0)) continue;
    area += mesh.vertex_area(v);
    for (std::size_t t = 0; t < nt; ++t) cdf[t] += mesh.vertex_area(v) * inside(v, t) / total[v];
  }
  if (!(area > 0)) throw std::runtime_error("concentration CDF: current has zero mass");
  for (auto& c : cdf) c = std::min(1.0, c / area);
  return cdf;
}

Eigen::VectorXd fiber_w2(const Problem& p, const BundleState& s, const ExtractedField& field) {
  const int nv = p.mesh().num_vertices();
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(nv), total = Eigen::VectorXd::Zero(nv);
  for_each_fiber_sample(p, s, field, [&](int v, double w, double off) {
    total[v] += w;
    moment[v] += w * off * off;
  });
  Eigen::VectorXd out(nv);
  for (int v = 0; v < nv; ++v)
    out[v] = total[v] > 0 ? std::sqrt(moment[v] / total[v]) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

Eigen::VectorXd face_angle_gradient(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem,
                                    const ExtractedField& field) {
  const int d = field.degree;
  Eigen::VectorXd out(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.face(f);
    if (!field.defined[t[0]] || !field.defined[t[1]] || !field.defined[t[2]]) {
      out[f] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double a[3];
    for (int i = 0; i < 3; ++i) a[i] = field.angle[t[i]] + d * std::arg(atlas.corner_transport[3 * f + i]);
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int i = 0; i < 3; ++i) {
      const double unwrapped = a[0] + std::remainder(a[i] - a[0], 2 * kPi);
      g += unwrapped * fem.corner_grad[3 * f + i];
    }
    out[f] = g.norm();
  }
  return out;
}

GraphArea graph_area(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem,
                     const ExtractedField& field, double radius, const std::vector<Eigen::Vector3d>& centers,
                     double exclusion_radius, bool add_helicoid) {
  const Eigen::VectorXd grad = face_angle_gradient(mesh, atlas, fem, field);
  GraphArea out;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& t = mesh.face(f);
    const Eigen::Vector3d centroid = (mesh.position(t[0]) + mesh.position(t[1]) + mesh.position(t[2])) / 3;
    bool excluded = false;
    for (const auto& c : centers) excluded = excluded || (centroid - c).norm() < exclusion_radius;
    if (excluded) {
      ++out.excluded_faces;
      continue;
    }
    if (std::isnan(grad[f]))
      throw std::runtime_error("graph area: field undefined on face " + std::to_string(f));
    out.area += mesh.face_area(f) * std::sqrt(1 + radius * radius * grad[f] * grad[f]);
    out.base_area += mesh.face_area(f);
  }
  if (add_helicoid)
    out.helicoid = static_cast<double>(centers.size()) * helicoid_area(exclusion_radius / radius, radius);
  return out;
}

double helicoid_area(double k, double radius) {
  return kPi * radius * radius * (k * std::sqrt(1 + k * k) + std::asinh(k));
}

SpMatC covariant_dirichlet(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem, int degree) {
  std::vector<Eigen::Triplet<cdouble>> t;
  t.reserve(9 * mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& tri = mesh.face(f);
    cdouble p[3];
    for (int i = 0; i < 3; ++i) p[i] = unit_power(atlas.corner_transport[3 * f + i], degree);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        t.emplace_back(tri[i], tri[j],
                       std::conj(p[i]) * p[j] * fem.area[f] * fem.corner_grad[3 * f + i].dot(fem.corner_grad[3 * f + j]));
  }
  SpMatC s(mesh.num_vertices(), mesh.num_vertices());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

BaselineField baseline_smoothest_field(const TriMesh& mesh, const TransportAtlas& atlas, int degree, int max_iters,
                                       double tol) {
  const LinearFem fem = assemble_linear_fem(mesh, atlas);
  const SpMatC S = covariant_dirichlet(mesh, atlas, fem, degree);
  const SpMat P0 = assemble_P(mesh, atlas, 0, degree).real();
  const SpMatC M = SpMatC((P0.transpose() * fem.M * P0).cast<cdouble>());
  const int nv = mesh.num_vertices();
  // Shift just below zero so the operator is definite even for flat, holonomy-free meshes.
  const double shift = 1e-8 * S.diagonal().real().sum() / M.diagonal().real().sum();
  Eigen::SimplicialLDLT<SpMatC> solver(S + cdouble(shift) * M);
  if (solver.info() != Eigen::Success) throw std::runtime_error("baseline: factorization failed");
  Eigen::VectorXcd x(nv);
  for (int v = 0; v < nv; ++v) x[v] = std::polar(1.0, 0.1 * v);
  auto mnorm = [&](const Eigen::VectorXcd& y) { return std::sqrt(std::real(y.dot(M * y))); };
  x /= mnorm(x);
  BaselineField out;
  for (int it = 1; it <= max_iters; ++it) {
    x = solver.solve(M * x);
    x /= mnorm(x);
    out.eigenvalue = std::real(x.dot(S * x));
    out.residual = (S * x - out.eigenvalue * (M * x)).norm() / x.norm();
    out.iterations = it;
    if (out.residual <= tol) break;
  }
  if (out.residual > tol)
    throw std::runtime_error("baseline: inverse iteration did not converge in " + std::to_string(max_iters) +
                             " steps (residual " + std::to_string(out.residual) + ")");
  // Field z is the conjugate convention of f_{-1}: pass conj(i x) so extract_field returns x / |x|.
  out.field = extract_field(Eigen::VectorXcd((cdouble(0, 1) * x).conjugate()), degree);
  return out;
}

ExtractedField baseline_aligned_field(const TriMesh& mesh, const TransportAtlas& atlas, const BoundaryData& bd) {
  const LinearFem fem = assemble_linear_fem(mesh, atlas);
  const SpMatC S = covariant_dirichlet(mesh, atlas, fem, bd.degree);
  const int nv = mesh.num_vertices();
  std::vector<int> slot(nv, -1), interior;
  for (int v = 0; v < nv; ++v)
    if (!mesh.is_boundary_vertex(v)) {
      slot[v] = static_cast<int>(interior.size());
      interior.push_back(v);
    }
  Eigen::VectorXcd x(nv);
  for (int v = 0; v < nv; ++v) x[v] = mesh.is_boundary_vertex(v) ? std::polar(1.0, bd.gamma[v]) : 0.0;
  const int ni = static_cast<int>(interior.size());
  if (ni > 0) {
    std::vector<Eigen::Triplet<cdouble>> t;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(ni);
    for (int j = 0; j < S.outerSize(); ++j)
      for (SpMatC::InnerIterator it(S, j); it; ++it) {
        const int r = slot[it.row()];
        if (r < 0) continue;
        if (slot[j] >= 0)
          t.emplace_back(r, slot[j], it.value());
        else
          rhs[r] -= it.value() * x[j];
      }
    SpMatC sii(ni, ni);
    sii.setFromTriplets(t.begin(), t.end());
    Eigen::SimplicialLDLT<SpMatC> solver(sii);
    if (solver.info() != Eigen::Success) throw std::runtime_error("aligned baseline: factorization failed");
    const Eigen::VectorXcd xi = solver.solve(rhs);
    for (int i = 0; i < ni; ++i) x[interior[i]] = xi[i];
  }
  return extract_field(Eigen::VectorXcd((cdouble(0, 1) * x).conjugate()), bd.degree);
}

}  // namespace minsec
