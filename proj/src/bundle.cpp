#include "minsec/bundle.hpp"

#include "minsec/kernels.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace minsec {

namespace {
constexpr double kPi = std::numbers::pi;
}

double FiberDiscretization::theta(int m) const { return 2 * kPi * m / N; }
double FiberDiscretization::length() const { return 2 * kPi * radius; }

FiberDiscretization make_fiber(int N, double radius) {
  if (N < 8 || N % 2 != 0) throw std::invalid_argument("N must be even and >= 8");
  if (!(radius > 0)) throw std::invalid_argument("fiber radius must be positive");
  return {N, N / 2 - 1, radius};
}

FiberCoefficients fourier_forward(const FiberSamples& samples, int K) {
  if (K < 0 || 2 * K >= samples.cols())
    throw std::invalid_argument("frequency cutoff " + std::to_string(K) + " needs more than " +
                                std::to_string(samples.cols()) + " samples");
  FiberCoefficients out;
  kernels::omp::fourier_forward(samples, kernels::FourierTable(static_cast<int>(samples.cols()), K), out);
  return out;
}

FiberSamples fourier_inverse(const FiberCoefficients& coeffs, int N) {
  const int K = static_cast<int>(coeffs.cols()) - 1;
  if (K < 0 || 2 * K >= N)
    throw std::invalid_argument("length mismatch: " + std::to_string(K + 1) + " frequencies on " +
                                std::to_string(N) + " samples");
  FiberSamples out;
  kernels::omp::fourier_inverse(coeffs, kernels::FourierTable(N, K), out);
  return out;
}

Eigen::VectorXcd fourier_forward(const Eigen::VectorXcd& x, int K) {
  const int N = static_cast<int>(x.size());
  if (K < 0 || 2 * K >= N)
    throw std::invalid_argument("frequency cutoff " + std::to_string(K) + " needs more than " +
                                std::to_string(N) + " samples");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * K + 1);
  for (int k = -K; k <= K; ++k)
    for (int m = 0; m < N; ++m) c[k + K] += x[m] * std::polar(1.0, -2 * kPi * k * m / N);
  return c / static_cast<double>(N);
}

Eigen::VectorXcd fourier_inverse(const Eigen::VectorXcd& c, int N) {
  if (c.size() % 2 != 1) throw std::invalid_argument("coefficient vector must have odd length 2K+1");
  const int K = static_cast<int>(c.size()) / 2;
  if (2 * K >= N) throw std::invalid_argument("length mismatch");
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(N);
  for (int m = 0; m < N; ++m)
    for (int k = -K; k <= K; ++k) x[m] += c[k + K] * std::polar(1.0, 2 * kPi * k * m / N);
  return x;
}

double fejer_delta(double gamma0, int K, double theta) {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  double s = 1.0;
  for (int k = 1; k <= K; ++k) s += 2.0 * (1.0 - static_cast<double>(k) / K) * std::cos(k * (theta - gamma0));
  return s;
}

Covector make_tau_bar(const FiberDiscretization&) { return {Eigen::Vector2d::Zero(), 1.0 / (2 * kPi)}; }

Eigen::VectorXd make_kappa_bar(const TriMesh& mesh, const TransportAtlas& atlas, int degree) {
  Eigen::VectorXd kb(mesh.num_interior_edges());
  for (int i = 0; i < mesh.num_interior_edges(); ++i)
    kb[i] = degree * atlas.edge_curvature[mesh.interior_edges()[i]] / (2 * kPi);
  return kb;
}

BoundarySpec read_boundary_angles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read boundary angle file " + path);
  std::map<int, double> angles;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    int v;
    double a;
    if (!(ls >> v)) continue;
    if (!(ls >> a)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'vertex angle'");
    angles[v] = a;
  }
  return BoundarySpec::Explicit(std::move(angles));
}

cdouble boundary_coefficient(double gamma0, int k, int K) {
  if (k == 0) return 0.0;
  const double w = (1.0 - static_cast<double>(std::abs(k)) / K) / (2 * kPi);
  return w * std::polar(1.0, -k * gamma0) / cdouble(0.0, k);
}

BoundaryData make_boundary_data(const TriMesh& mesh, const TransportAtlas& atlas, const BoundarySpec& spec,
                                int degree, int K) {
  BoundaryData bd;
  bd.degree = degree;
  bd.K = K;
  bd.gamma.assign(mesh.num_vertices(), 0.0);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.is_boundary_vertex(v)) bd.vertices.push_back(v);

  if (spec.tangent) {
    for (const auto& loop : mesh.boundary_loops()) {
      const int n = static_cast<int>(loop.vertices.size());
      for (int i = 0; i < n; ++i) {
        const int v = loop.vertices[i];
        const Frame& fr = atlas.vertex_frames[v];
        auto dir = [&](const Eigen::Vector3d& d) { return cdouble(fr.e1.dot(d), fr.e2.dot(d)) / std::hypot(fr.e1.dot(d), fr.e2.dot(d)); };
        const cdouble in = dir(mesh.position(v) - mesh.position(loop.vertices[(i + n - 1) % n]));
        const cdouble out = dir(mesh.position(loop.vertices[(i + 1) % n]) - mesh.position(v));
        const cdouble sum = unit_power(in, degree) + unit_power(out, degree);
        // Degenerate only at cusps; fall back to the bisector.
        bd.gamma[v] = std::abs(sum) > 1e-9 ? std::arg(sum) : degree * std::arg(in + out);
      }
    }
  } else {
    for (int v : bd.vertices) {
      auto it = spec.angles.find(v);
      if (it == spec.angles.end())
        throw std::invalid_argument("boundary angle missing for boundary vertex " + std::to_string(v));
      bd.gamma[v] = std::remainder(degree * it->second, 2 * kPi);
    }
  }

  bd.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(bd.vertices.size()), K + 1);
  for (std::size_t i = 0; i < bd.vertices.size(); ++i)
    for (int k = 1; k <= K; ++k) bd.values(i, k) = boundary_coefficient(bd.gamma[bd.vertices[i]], k, K);
  return bd;
}

}  // namespace minsec
