#include "minsec/operators.hpp"

#include <stdexcept>

namespace minsec {

namespace {

using Trip = Eigen::Triplet<double>;
using TripC = Eigen::Triplet<cdouble>;

SpMat from_triplets(int rows, int cols, const std::vector<Trip>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

std::array<Eigen::Vector2d, 3> face_coordinates(const TriMesh& mesh, const TransportAtlas& atlas, int face) {
  const auto& t = mesh.face(face);
  const Frame& fr = atlas.face_frames[face];
  std::array<Eigen::Vector2d, 3> q;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d d = mesh.position(t[i]) - mesh.position(t[0]);
    q[i] = {fr.e1.dot(d), fr.e2.dot(d)};
  }
  return q;
}

LinearFem assemble_linear_fem(const TriMesh& mesh, const TransportAtlas& atlas) {
  const int nf = mesh.num_faces();
  const int nc = mesh.num_corners();
  LinearFem fem;
  fem.corner_grad.resize(nc);
  fem.area.resize(nf);
  std::vector<Trip> g, a, m, u, j;
  g.reserve(6 * nf);
  m.reserve(9 * nf);
  u.reserve(6 * nc);
  for (int f = 0; f < nf; ++f) {
    const double area = mesh.face_area(f);
    fem.area[f] = area;
    const auto q = face_coordinates(mesh, atlas, f);
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d e = q[(i + 2) % 3] - q[(i + 1) % 3];
      const Eigen::Vector2d grad = Eigen::Vector2d(-e.y(), e.x()) / (2 * area);
      fem.corner_grad[3 * f + i] = grad;
      g.emplace_back(2 * f, 3 * f + i, grad.x());
      g.emplace_back(2 * f + 1, 3 * f + i, grad.y());
      for (int k = 0; k < 3; ++k) m.emplace_back(3 * f + i, 3 * f + k, area * (i == k ? 1.0 / 6 : 1.0 / 12));
      u.emplace_back(2 * f, 2 * (3 * f + i), 1.0 / 3);
      u.emplace_back(2 * f + 1, 2 * (3 * f + i) + 1, 1.0 / 3);
    }
    a.emplace_back(2 * f, 2 * f, area);
    a.emplace_back(2 * f + 1, 2 * f + 1, area);
    j.emplace_back(2 * f, 2 * f + 1, -1.0);
    j.emplace_back(2 * f + 1, 2 * f, 1.0);
  }
  fem.G = from_triplets(2 * nf, nc, g);
  fem.A = from_triplets(2 * nf, 2 * nf, a);
  fem.M = from_triplets(nc, nc, m);
  fem.U = from_triplets(2 * nf, 2 * nc, u);
  fem.J = from_triplets(2 * nf, 2 * nf, j);
  return fem;
}

SpMatC assemble_P(const TriMesh& mesh, const TransportAtlas& atlas, int k, int degree) {
  std::vector<TripC> t;
  t.reserve(mesh.num_corners());
  const long long e = -static_cast<long long>(k) * degree;
  for (int c = 0; c < mesh.num_corners(); ++c)
    t.emplace_back(c, mesh.corner_vertex(c), unit_power(atlas.corner_transport[c], e));
  SpMatC p(mesh.num_corners(), mesh.num_vertices());
  p.setFromTriplets(t.begin(), t.end());
  return p;
}

SpMatC assemble_L(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem, int k, int degree,
                  double radius) {
  if (!(radius > 0)) throw std::invalid_argument("fiber radius must be positive");
  const double vert = static_cast<double>(k) * k / (radius * radius);
  const long long e = -static_cast<long long>(k) * degree;
  std::vector<TripC> t;
  t.reserve(9 * mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const auto& tri = mesh.face(f);
    const double area = fem.area[f];
    cdouble p[3];
    for (int i = 0; i < 3; ++i) p[i] = unit_power(atlas.corner_transport[3 * f + i], e);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double stiff = area * fem.corner_grad[3 * f + i].dot(fem.corner_grad[3 * f + j]);
        const double mass = area * (i == j ? 1.0 / 6 : 1.0 / 12);
        t.emplace_back(tri[i], tri[j], std::conj(p[i]) * p[j] * (stiff + vert * mass));
      }
    }
  }
  SpMatC l(mesh.num_vertices(), mesh.num_vertices());
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

SpMatC assemble_L_products(const LinearFem& fem, const SpMatC& Pk, int k, double radius) {
  if (!(radius > 0)) throw std::invalid_argument("fiber radius must be positive");
  const SpMatC G = fem.G.cast<cdouble>();
  const SpMatC A = fem.A.cast<cdouble>();
  const SpMatC M = fem.M.cast<cdouble>();
  const SpMatC GP = G * Pk;
  const SpMatC Ph = Pk.adjoint();
  SpMatC l = SpMatC(GP.adjoint()) * A * GP;
  l += cdouble(static_cast<double>(k) * k / (radius * radius)) * (Ph * M * Pk);
  return l;
}

CrouzeixRaviart assemble_cr(const TriMesh& mesh, const TransportAtlas& atlas, const LinearFem& fem) {
  const int ni = mesh.num_interior_edges();
  if (ni == 0) throw MeshError("mesh has no interior edges");
  const int nf = mesh.num_faces();
  (void)atlas;
  CrouzeixRaviart cr;
  cr.edge_grad.resize(3 * nf);
  cr.mass = Eigen::VectorXd::Zero(ni);
  std::vector<Trip> g;
  g.reserve(6 * nf);
  for (int f = 0; f < nf; ++f) {
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d grad = -2.0 * fem.corner_grad[3 * f + i];
      cr.edge_grad[3 * f + i] = grad;
      const int ie = mesh.interior_index(mesh.face_edge(f, i));
      if (ie < 0) continue;
      g.emplace_back(2 * f, ie, grad.x());
      g.emplace_back(2 * f + 1, ie, grad.y());
      cr.mass[ie] += fem.area[f] / 3.0;
    }
  }
  cr.G = from_triplets(2 * nf, ni, g);
  cr.L = SpMat(cr.G.transpose() * fem.A * cr.G);
  return cr;
}

SpMat assemble_boundary_restriction(const TriMesh& mesh, const TransportAtlas& atlas,
                                    std::vector<BoundaryEdge>* edges) {
  std::vector<BoundaryEdge> list;
  for (const auto& loop : mesh.boundary_loops()) list.insert(list.end(), loop.edges.begin(), loop.edges.end());
  std::vector<Trip> t;
  for (int b = 0; b < static_cast<int>(list.size()); ++b) {
    const auto& be = list[b];
    const Frame& fr = atlas.face_frames[be.face];
    const Eigen::Vector3d d = mesh.position(be.to) - mesh.position(be.from);
    t.emplace_back(b, 2 * be.face, fr.e1.dot(d));
    t.emplace_back(b, 2 * be.face + 1, fr.e2.dot(d));
  }
  if (edges) *edges = list;
  return from_triplets(static_cast<int>(list.size()), 2 * mesh.num_faces(), t);
}

OperatorSet assemble_operators(const TriMesh& mesh, const TransportAtlas& atlas, int degree, double radius,
                               int max_frequency) {
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  if (!(radius > 0)) throw std::invalid_argument("fiber radius must be positive");
  if (max_frequency < 1) throw std::invalid_argument("frequency cutoff must be at least 1");
  OperatorSet ops;
  ops.degree = degree;
  ops.radius = radius;
  ops.max_frequency = max_frequency;
  ops.fem = assemble_linear_fem(mesh, atlas);
  ops.cr = assemble_cr(mesh, atlas, ops.fem);
  ops.B = assemble_boundary_restriction(mesh, atlas, &ops.boundary_edges);
  ops.P.resize(max_frequency + 1);
  ops.L.resize(max_frequency + 1);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k <= max_frequency; ++k) {
    ops.P[k] = assemble_P(mesh, atlas, k, degree);
    if (k > 0) ops.L[k] = assemble_L(mesh, atlas, ops.fem, k, degree, radius);
  }
  ops.L0 = assemble_L(mesh, atlas, ops.fem, 0, degree, radius).real();
  return ops;
}

}  // namespace minsec
