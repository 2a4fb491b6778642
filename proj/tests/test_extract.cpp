#include "minsec/extract.hpp"
#include "minsec/fixtures.hpp"
#include "minsec/solver.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include <cmath>
#include <random>

using namespace minsec;

namespace {

TransportAtlas global_atlas(const TriMesh& m) {
  return build_transport(m, std::vector<Frame>(m.num_vertices()), std::vector<Frame>(m.num_faces()));
}

TransportAtlas rotated_atlas(const TriMesh& m, double alpha) {
  std::vector<Frame> vf(m.num_vertices());
  for (auto& f : vf) f = rotated(f, alpha);
  return build_transport(m, vf, std::vector<Frame>(m.num_faces()));
}

TransportAtlas random_atlas(const TriMesh& m, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  std::vector<Frame> vf = default_vertex_frames(m), ff = default_face_frames(m);
  for (auto& f : vf) f = rotated(f, u(rng));
  for (auto& f : ff) f = rotated(f, u(rng));
  return build_transport(m, vf, ff);
}

SolverConfig config(int degree, int N) {
  SolverConfig c;
  c.degree = degree;
  c.N = N;
  return c;
}

void clear(BundleState& s) {
  s.sigma.hx.setZero();
  s.sigma.hy.setZero();
  s.sigma.v.setZero();
}

}  // namespace

TEST_CASE("field extraction from f_{-1}") {
  const int K = 7;
  Eigen::VectorXcd f1(4);
  const double sigmas[4] = {0.0, 1.0, -2.5, M_PI / 2};
  for (int i = 0; i < 4; ++i) f1[i] = std::conj(cdouble(0, 1) * (1.0 - 1.0 / K) * std::polar(1.0, sigmas[i]));
  const ExtractedField f = extract_field(f1, 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(f.z[i] - std::polar(1.0, sigmas[i])) <= 1e-15);
    CHECK(f.confidence[i] == doctest::Approx(1.0 - 1.0 / K));
  }
  CHECK(f.num_undefined() == 0);

  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  zero[1] = 1;
  const ExtractedField g = extract_field(zero, 1);
  CHECK(g.num_undefined() == 1);
  CHECK(g.z[0] == cdouble(0));
  CHECK(g.z[1] == cdouble(0, -1));
}

TEST_CASE("boundary coefficients extract to the boundary angle") {
  const int K = 31;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  Eigen::VectorXcd f1(50);
  Eigen::VectorXd sigma(50);
  for (int v = 0; v < 50; ++v) {
    sigma[v] = u(rng);
    f1[v] = boundary_coefficient(sigma[v], 1, K);
  }
  const ExtractedField f = extract_field(f1, 2);
  for (int v = 0; v < 50; ++v) CHECK(std::abs(std::remainder(f.angle[v] - sigma[v], 2 * M_PI)) <= 1e-6);
}

TEST_CASE("zero Gamma has no singularities") {
  const TriMesh m = fixtures::disk(3);
  const TransportAtlas a = global_atlas(m);
  const CrouzeixRaviart cr = assemble_cr(m, a, assemble_linear_fem(m, a));
  const SingularitySet s = extract_singularities(m, Eigen::VectorXd::Zero(m.num_interior_edges()), cr.mass, 4);
  CHECK(s.clusters.empty());
  CHECK(s.total_mass == 0.0);
  CHECK(s.index_sum() == 0.0);
}

TEST_CASE("a concentrated cluster has index mass over degree") {
  const TriMesh m = fixtures::disk(3);
  const TransportAtlas a = global_atlas(m);
  const CrouzeixRaviart cr = assemble_cr(m, a, assemble_linear_fem(m, a));
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(m.num_interior_edges());
  // Every interior edge at the center vertex 0, scaled to unit total mass.
  std::vector<int> star;
  for (int k = 0; k < m.num_interior_edges(); ++k) {
    const Edge& e = m.edge(m.interior_edges()[k]);
    if (e.v0 == 0 || e.v1 == 0) star.push_back(k);
  }
  REQUIRE(star.size() == 6);
  double mass = 0;
  for (int k : star) mass += cr.mass[k];
  for (int k : star) gamma[k] = 1.0 / mass;
  // A faint far-away edge below the threshold.
  int far = -1;
  for (int k = 0; k < m.num_interior_edges(); ++k) {
    const Edge& e = m.edge(m.interior_edges()[k]);
    if (m.position(e.v0).norm() > 0.5 && m.position(e.v1).norm() > 0.5) far = k;
  }
  REQUIRE(far >= 0);
  gamma[far] = 1e-6;

  const SingularitySet s = extract_singularities(m, gamma, cr.mass, 4);
  REQUIRE(s.clusters.size() == 1);
  const Singularity& c = s.clusters[0];
  CHECK(c.mass == doctest::Approx(1.0));
  CHECK(c.index == doctest::Approx(0.25));
  CHECK(c.rounded == doctest::Approx(0.25));
  CHECK(std::abs(c.residual) <= 1e-12);
  CHECK(c.edges.size() == 6);
  CHECK(c.position.norm() <= 1e-12);
  CHECK(s.total_mass == doctest::Approx(1.0 + 1e-6 * cr.mass[far]));
  CHECK(s.unclustered_mass == doctest::Approx(1e-6 * cr.mass[far]));
  CHECK(s.index_sum() == doctest::Approx(0.25));

  // Two separated clusters of opposite sign.
  gamma.setZero();
  gamma[star[0]] = 1;
  gamma[far] = -1;
  const SingularitySet two = extract_singularities(m, gamma, cr.mass, 2);
  REQUIRE(two.clusters.size() == 2);
  CHECK(two.index_sum() == doctest::Approx((cr.mass[star[0]] - cr.mass[far]) / 2));
  CHECK(two.unclustered_mass == doctest::Approx(0.0));
}

TEST_CASE("concentration CDF and W2 of synthetic fiber measures") {
  const TriMesh m = fixtures::disk(2);
  const int N = 16;
  Problem p(m, global_atlas(m), config(1, N), BoundarySpec::Tangent());
  BundleState s = init_state(p);
  const ExtractedField field = field_from_angles(Eigen::VectorXd::Zero(m.num_vertices()), 1);
  const double h = M_PI / N;
  const std::vector<double> grid = default_cdf_grid();
  REQUIRE(grid.size() == 33);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(M_PI));

  SUBCASE("Dirac at the field angle") {
    clear(s);
    s.sigma.v.col(0).setConstant(1);
    const std::vector<double> cdf = concentration_cdf(p, s, field, {0.0, h / 2, h, 2 * h, M_PI});
    CHECK(cdf[0] == doctest::Approx(0.0));
    CHECK(cdf[1] == doctest::Approx(0.5));
    CHECK(cdf[2] == doctest::Approx(1.0));
    CHECK(cdf[3] == doctest::Approx(1.0));
    CHECK(cdf[4] == doctest::Approx(1.0));
    CHECK(fiber_w2(p, s, field).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("uniform fiber mass") {
    // init_state is the vertical form: uniform in the fiber.
    const std::vector<double> cdf = concentration_cdf(p, s, field, grid);
    for (std::size_t t = 0; t < grid.size(); ++t) CHECK(cdf[t] == doctest::Approx(grid[t] / M_PI).epsilon(1e-12));
    double second = 0;
    for (int j = 0; j < N; ++j) {
      const double off = j <= N / 2 ? 2 * M_PI * j / N : 2 * M_PI * j / N - 2 * M_PI;
      second += off * off / N;
    }
    const Eigen::VectorXd w2 = fiber_w2(p, s, field);
    for (int v = 0; v < m.num_vertices(); ++v) CHECK(w2[v] == doctest::Approx(std::sqrt(second)));
    CHECK(w2[0] == doctest::Approx(M_PI / std::sqrt(3.0)).epsilon(0.1));
  }
  SUBCASE("two opposite quarter turns") {
    clear(s);
    s.sigma.hx.col(N / 4).setConstant(1);
    s.sigma.hy.col(3 * N / 4).setConstant(1);
    const Eigen::VectorXd w2 = fiber_w2(p, s, field);
    for (int v = 0; v < m.num_vertices(); ++v) CHECK(w2[v] == doctest::Approx(M_PI / 2));
    const std::vector<double> cdf = concentration_cdf(p, s, field, {M_PI / 4, M_PI / 2 + h});
    CHECK(cdf[0] == doctest::Approx(0.0));
    CHECK(cdf[1] == doctest::Approx(1.0));
  }
  SUBCASE("zero mass is rejected") {
    clear(s);
    CHECK_THROWS_AS(concentration_cdf(p, s, field, grid), std::runtime_error);
    CHECK(std::isnan(fiber_w2(p, s, field)[0]));
  }
}

TEST_CASE("concentration CDF follows the transported field angle") {
  const TriMesh m = fixtures::saddle(3);
  const int N = 32, d = 3;
  Problem p(m, random_atlas(m, 5), config(d, N), BoundarySpec::Tangent());
  BundleState s = init_state(p);
  clear(s);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-M_PI, M_PI);
  Eigen::VectorXd angle(m.num_vertices());
  for (auto& a : angle) a = u(rng);
  const ExtractedField field = field_from_angles(angle, d);
  const double step = 2 * M_PI / N;
  for (int c = 0; c < m.num_corners(); ++c) {
    const double target = angle[m.corner_vertex(c)] + d * std::arg(p.atlas().corner_transport[c]);
    const int j = static_cast<int>(std::lround(target / step));
    s.sigma.v(c, ((j % N) + N) % N) = 1;
  }
  const std::vector<double> cdf = concentration_cdf(p, s, field, default_cdf_grid());
  CHECK(cdf[0] == 0.0);
  // Every sample lies within half a cell, so its cell lies within 2 pi / N.
  CHECK(cdf[2] == doctest::Approx(1.0));
  CHECK(cdf.back() == doctest::Approx(1.0));
  for (std::size_t t = 1; t < cdf.size(); ++t) CHECK(cdf[t] >= cdf[t - 1]);
  CHECK(fiber_w2(p, s, field).maxCoeff() <= M_PI / N + 1e-12);
}

TEST_CASE("graph area") {
  const TriMesh m = fixtures::unit_area_disk(200);
  const TransportAtlas a = global_atlas(m);
  const LinearFem fem = assemble_linear_fem(m, a);
  const ExtractedField constant = field_from_angles(Eigen::VectorXd::Constant(m.num_vertices(), 0.3), 2);
  const GraphArea flat = graph_area(m, a, fem, constant, 1.0);
  CHECK(flat.area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.base_area == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(flat.excluded_faces == 0);

  // Linear angle: |D sigma| = 2 everywhere.
  Eigen::VectorXd lin(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) lin[v] = 2 * m.position(v).x();
  const ExtractedField tilted = field_from_angles(lin, 1);
  const Eigen::VectorXd g = face_angle_gradient(m, a, fem, tilted);
  CHECK(g.minCoeff() == doctest::Approx(2.0));
  CHECK(g.maxCoeff() == doctest::Approx(2.0));
  CHECK(graph_area(m, a, fem, tilted, 0.5).area == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

  // Vortex around the origin with its core cut out.
  Eigen::VectorXd vortex(m.num_vertices());
  for (int v = 0; v < m.num_vertices(); ++v) vortex[v] = std::atan2(m.position(v).y(), m.position(v).x());
  const ExtractedField vf = field_from_angles(vortex, 1);
  const GraphArea cut = graph_area(m, a, fem, vf, 0.1, {Eigen::Vector3d::Zero()}, 0.15, true);
  CHECK(cut.excluded_faces > 0);
  CHECK(cut.area >= cut.base_area);
  CHECK(cut.base_area < 1.0);
  CHECK(cut.helicoid == doctest::Approx(helicoid_area(1.5, 0.1)));
  CHECK(cut.total() == doctest::Approx(cut.area + cut.helicoid));

  ExtractedField hole = constant;
  hole.defined[0] = 0;
  CHECK_THROWS_AS(graph_area(m, a, fem, hole, 1.0), std::runtime_error);
}

TEST_CASE("helicoid area against quadrature") {
  for (double k : {0.5, 1.0, 3.0})
    for (double r : {1.0, 0.2}) {
      // Area of (rho cos t, rho sin t, r t) over rho < k r: 2 pi int sqrt(rho^2 + r^2).
      const double q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double rho) { return 2 * M_PI * std::sqrt(rho * rho + r * r); }, 0.0, k * r);
      CHECK(helicoid_area(k, r) == doctest::Approx(q).epsilon(1e-12));
    }
  CHECK(helicoid_area(1, 1) == doctest::Approx(7.2118).epsilon(1e-4));
}

TEST_CASE("smoothest-field baseline") {
  SUBCASE("planar global frames give a constant field") {
    const TriMesh m = fixtures::disk(4, 1.0, 0.2);
    const BaselineField b = baseline_smoothest_field(m, global_atlas(m), 4);
    CHECK(b.residual <= 1e-8);
    CHECK(std::abs(b.eigenvalue) <= 1e-8);
    CHECK(b.field.num_undefined() == 0);
    for (int v = 1; v < m.num_vertices(); ++v)
      CHECK(std::abs(std::remainder(b.field.angle[v] - b.field.angle[0], 2 * M_PI)) <= 1e-6);
  }
  SUBCASE("curved surfaces have positive energy") {
    const TriMesh m = fixtures::spherical_cap(5, 1.0);
    const TransportAtlas a = build_transport(m);
    const BaselineField b = baseline_smoothest_field(m, a, 4);
    CHECK(b.residual <= 1e-8);
    CHECK(b.eigenvalue > 1e-3);
    const SpMatC S = covariant_dirichlet(m, a, assemble_linear_fem(m, a), 4);
    CHECK((SpMatC(S.adjoint()) - S).norm() <= 1e-12 * S.norm());
  }
  SUBCASE("aligned baseline honors constant boundary angles") {
    const TriMesh m = fixtures::disk(3);
    const TransportAtlas a = global_atlas(m);
    std::map<int, double> angles;
    for (int v = 0; v < m.num_vertices(); ++v)
      if (m.is_boundary_vertex(v)) angles[v] = 0.2;
    const BoundaryData bd = make_boundary_data(m, a, BoundarySpec::Explicit(angles), 2, 7);
    const ExtractedField f = baseline_aligned_field(m, a, bd);
    for (int v = 0; v < m.num_vertices(); ++v) CHECK(f.angle[v] == doctest::Approx(0.4));
  }
}

TEST_CASE("extraction is equivariant under frame rotation") {
  const TriMesh m = fixtures::disk(3, 1.0, 0.2);
  const int d = 2;
  const double alpha = 0.7;
  SolverConfig c = config(d, 16);
  c.adaptive = false;
  c.epsilon = 1e-300;
  c.max_iters = 150;
  Problem p0(m, global_atlas(m), c, BoundarySpec::Tangent());
  Problem p1(m, rotated_atlas(m, alpha), c, BoundarySpec::Tangent());
  BundleState s0 = init_state(p0), s1 = init_state(p1);
  run_admm(p0, s0);
  run_admm(p1, s1);
  const ExtractedField f0 = extract_field(p0, s0), f1 = extract_field(p1, s1);
  CHECK((s0.gamma - s1.gamma).cwiseAbs().maxCoeff() <= 1e-8);
  // A direction at angle t in the global frame sits at t - alpha in the rotated one.
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (f0.confidence[v] < 1e-3) continue;
    CHECK(std::abs(f1.z[v] - f0.z[v] * std::polar(1.0, -d * alpha)) <= 1e-6);
    CHECK(f1.confidence[v] == doctest::Approx(f0.confidence[v]).epsilon(1e-6));
  }
}
