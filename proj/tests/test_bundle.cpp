#include "minsec/bundle.hpp"
#include "minsec/fixtures.hpp"
#include "minsec/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace minsec;

namespace {

double angle_distance(double a, double b) { return std::abs(std::remainder(a - b, 2 * M_PI)); }

// Truncation to |k| <= K by explicit summation over a full DFT.
Eigen::VectorXd band_limit(const Eigen::VectorXd& x, int K) {
  const int N = static_cast<int>(x.size());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(N);
  for (int k = -K; k <= K; ++k) {
    cdouble c = 0;
    for (int m = 0; m < N; ++m) c += x[m] * std::exp(cdouble(0, -2 * M_PI * k * m / N));
    c /= N;
    for (int m = 0; m < N; ++m) y[m] += (c * std::exp(cdouble(0, 2 * M_PI * k * m / N))).real();
  }
  return y;
}

}  // namespace

TEST_CASE("fiber discretization") {
  const FiberDiscretization fd = make_fiber(64, 0.5);
  CHECK(fd.K == 31);
  CHECK(fd.length() == doctest::Approx(M_PI));
  CHECK(fd.theta(16) == doctest::Approx(M_PI / 2));
  CHECK_THROWS_AS(make_fiber(15, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_fiber(6, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_fiber(16, 0.0), std::invalid_argument);
}

TEST_CASE("Fourier coefficients of simple sequences") {
  const int N = 16, K = 7;
  FiberSamples x(2, N);
  for (int m = 0; m < N; ++m) {
    x(0, m) = 3.0;
    x(1, m) = std::cos(2 * M_PI * m / N);
  }
  const FiberCoefficients c = fourier_forward(x, K);
  REQUIRE(c.cols() == K + 1);
  CHECK(std::abs(c(0, 0) - 3.0) <= 1e-14);
  CHECK(std::abs(c(1, 1) - 0.5) <= 1e-14);
  for (int k = 1; k <= K; ++k) CHECK(std::abs(c(0, k)) <= 1e-14);
  CHECK(std::abs(c(1, 0)) <= 1e-14);
  for (int k = 2; k <= K; ++k) CHECK(std::abs(c(1, k)) <= 1e-14);

  Eigen::VectorXcd z(N);
  for (int m = 0; m < N; ++m) z[m] = std::cos(2 * M_PI * m / N);
  const Eigen::VectorXcd full = fourier_forward(z, K);
  CHECK(std::abs(full[K + 1] - 0.5) <= 1e-14);
  CHECK(std::abs(full[K - 1] - 0.5) <= 1e-14);
  CHECK(std::abs(full[K]) <= 1e-14);
}

TEST_CASE("round trip is the band-limited projection") {
  const int N = 64, K = 31;
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  FiberSamples x(3, N);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  const FiberSamples y = fourier_inverse(fourier_forward(x, K), N);
  for (int r = 0; r < 3; ++r) {
    const Eigen::VectorXd oracle = band_limit(x.row(r).transpose().matrix(), K);
    CHECK((y.row(r).transpose().matrix() - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const FiberSamples yy = fourier_inverse(fourier_forward(y, K), N);
  CHECK((yy - y).abs().maxCoeff() <= 1e-12);

  Eigen::VectorXcd z(N);
  for (int m = 0; m < N; ++m) z[m] = cdouble(g(rng), g(rng));
  const Eigen::VectorXcd p = fourier_inverse(fourier_forward(z, K), N);
  CHECK((fourier_inverse(fourier_forward(p, K), N) - p).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("real sequences have conjugate-symmetric coefficients") {
  const int N = 32, K = 15;
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXcd z(N);
  for (int m = 0; m < N; ++m) z[m] = u(rng);
  const Eigen::VectorXcd c = fourier_forward(z, K);
  for (int k = 1; k <= K; ++k) CHECK(std::abs(c[K - k] - std::conj(c[K + k])) <= 1e-14);
}

TEST_CASE("Fourier length checks") {
  CHECK_THROWS_AS(fourier_forward(FiberSamples(FiberSamples::Zero(1, 8)), 4), std::invalid_argument);
  CHECK_THROWS_AS(fourier_inverse(FiberCoefficients(FiberCoefficients::Zero(1, 5)), 8), std::invalid_argument);
  CHECK_THROWS_AS(fourier_inverse(Eigen::VectorXcd(Eigen::VectorXcd::Zero(4)), 16), std::invalid_argument);
  CHECK_THROWS_AS(fourier_forward(Eigen::VectorXcd(Eigen::VectorXcd::Zero(8)), 4), std::invalid_argument);
}

TEST_CASE("Fejer delta") {
  for (int K : {1, 3, 8, 31}) {
    CHECK(fejer_delta(0.7, K, 0.7) == doctest::Approx(K).epsilon(1e-13));
    const int N = 2 * (K + 1);
    double mean = 0;
    for (int m = 0; m < N; ++m) mean += fejer_delta(1.1, K, 2 * M_PI * m / N);
    CHECK(mean / N == doctest::Approx(1.0).epsilon(1e-12));
  }
  double lowest = 1e300;
  for (int K = 1; K <= 8; ++K)
    for (double g0 : {0.0, 0.4, 2.0, -3.0})
      for (int j = 0; j < 4000; ++j) lowest = std::min(lowest, fejer_delta(g0, K, 2 * M_PI * j / 4000));
  CHECK(lowest >= -1e-12);
  CHECK_THROWS_AS(fejer_delta(0, 0, 0), std::invalid_argument);
}

TEST_CASE("the vertical form") {
  const Covector tau = make_tau_bar(make_fiber(16, 2.0));
  CHECK(tau.v == doctest::Approx(0.159154943).epsilon(1e-9));
  CHECK(tau.h.norm() == 0.0);
  CHECK(tau.v * 2 * M_PI == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kappa-bar is zero when flat and linear in the degree") {
  const TriMesh flat = fixtures::disk(4, 1.0, 0.3);
  CHECK(make_kappa_bar(flat, build_transport(flat), 4).cwiseAbs().maxCoeff() <= 1e-10);
  const TriMesh cap = fixtures::spherical_cap(6, 1.0);
  const TransportAtlas t = build_transport(cap);
  const Eigen::VectorXd k2 = make_kappa_bar(cap, t, 2), k4 = make_kappa_bar(cap, t, 4);
  CHECK((k4 - 2 * k2).cwiseAbs().maxCoeff() == 0.0);
}

namespace {
double cap_curvature_ratio(int rings, double half_angle, int d) {
  const TriMesh cap = fixtures::spherical_cap(rings, half_angle);
  const TransportAtlas t = build_transport(cap);
  const CrouzeixRaviart cr = assemble_cr(cap, t, assemble_linear_fem(cap, t));
  const double solid_angle = 2 * M_PI * (1 - std::cos(half_angle));
  return cr.mass.dot(make_kappa_bar(cap, t, d)) / (d * solid_angle / (2 * M_PI));
}
}  // namespace

TEST_CASE("kappa-bar integrates to the cap solid angle at 1k faces") {
  REQUIRE(fixtures::spherical_cap(13, 1.0).num_faces() >= 1000);
  for (int d : {1, 4}) CHECK(cap_curvature_ratio(13, 1.0, d) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("kappa-bar cap integral converges under refinement") {
  double prev = 1.0;
  for (int rings : {8, 13, 20, 30}) {
    const double err = std::abs(cap_curvature_ratio(rings, 1.0, 2) - 1.0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.035);
}

TEST_CASE("boundary coefficients") {
  const cdouble f1 = boundary_coefficient(0.0, 1, 31);
  CHECK(std::abs(f1 - cdouble(0, -30.0 / 31.0) / (2 * M_PI)) <= 1e-15);
  const cdouble fm1 = boundary_coefficient(0.0, -1, 31);
  CHECK(std::abs(fm1 - cdouble(0, 30.0 / 31.0) / (2 * M_PI)) <= 1e-15);
  CHECK(std::abs(fm1 - std::conj(f1)) <= 1e-16);
  CHECK(boundary_coefficient(1.0, 0, 31) == cdouble(0, 0));
  for (double g0 : {0.3, -2.2})
    for (int k = 1; k <= 7; ++k)
      CHECK(std::abs(boundary_coefficient(g0, -k, 7) - std::conj(boundary_coefficient(g0, k, 7))) <= 1e-15);
}

TEST_CASE("the boundary fiber derivative reproduces the Fejer delta") {
  const int N = 64, K = 31;
  for (double g0 : {0.0, 1.3, -2.9}) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * K + 1);
    c[K] = 1.0 / (2 * M_PI);
    for (int k = -K; k <= K; ++k)
      if (k != 0) c[k + K] = cdouble(0, k) * boundary_coefficient(g0, k, K);
    const Eigen::VectorXcd v = fourier_inverse(c, N);
    for (int m = 0; m < N; ++m) {
      CHECK(std::abs(v[m].imag()) <= 1e-12);
      CHECK(v[m].real() * 2 * M_PI == doctest::Approx(fejer_delta(g0, K, 2 * M_PI * m / N)).epsilon(1e-12));
    }
  }
}

TEST_CASE("tangent boundary data on a regular fan") {
  const TriMesh m = fixtures::disk_fan(12);
  const TransportAtlas t = build_transport(m);
  for (int d : {1, 2, 4}) {
    const BoundaryData bd = make_boundary_data(m, t, BoundarySpec::Tangent(), d, 7);
    CHECK(bd.vertices.size() == 12);
    CHECK(bd.values.rows() == 12);
    CHECK(bd.values.cols() == 8);
    for (std::size_t i = 0; i < bd.vertices.size(); ++i) {
      const int v = bd.vertices[i];
      const Eigen::Vector3d p = m.position(v);
      const Eigen::Vector3d tangent(-p.y(), p.x(), 0);
      const Frame& fr = t.vertex_frames[v];
      const double expect = d * std::atan2(tangent.dot(fr.e2), tangent.dot(fr.e1));
      CHECK(angle_distance(bd.gamma[v], expect) <= 1e-12);
      for (int k = 1; k <= 7; ++k) CHECK(std::abs(bd.values(i, k) - boundary_coefficient(bd.gamma[v], k, 7)) == 0.0);
      CHECK(bd.values(i, 0) == cdouble(0, 0));
    }
  }
}

TEST_CASE("explicit boundary angles") {
  const TriMesh m = fixtures::disk_fan(8);
  const TransportAtlas t = build_transport(m);
  std::map<int, double> angles;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (m.is_boundary_vertex(v)) angles[v] = 0.25 * v;
  const BoundaryData bd = make_boundary_data(m, t, BoundarySpec::Explicit(angles), 4, 7);
  for (const auto& [v, a] : angles) CHECK(angle_distance(bd.gamma[v], 4 * a) <= 1e-12);

  angles.erase(angles.begin());
  CHECK_THROWS_WITH_AS(make_boundary_data(m, t, BoundarySpec::Explicit(angles), 4, 7),
                       doctest::Contains("boundary angle missing"), std::invalid_argument);

  const std::string path = (std::filesystem::temp_directory_path() / "minsec_test_angles.txt").string();
  {
    std::ofstream out(path);
    out << "# vertex angle\n1 0.5\n2 -1.25\n";
  }
  const BoundarySpec spec = read_boundary_angles(path);
  std::remove(path.c_str());
  CHECK_FALSE(spec.tangent);
  REQUIRE(spec.angles.size() == 2);
  CHECK(spec.angles.at(1) == 0.5);
  CHECK(spec.angles.at(2) == -1.25);
}
