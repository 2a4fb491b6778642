#include "minsec/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

namespace minsec {

namespace {

constexpr double kPi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Rows/columns of a sparse matrix restricted to index lists (slot maps id -> position or -1).
template <class Scalar>
Eigen::SparseMatrix<Scalar> restrict(const Eigen::SparseMatrix<Scalar>& m, const std::vector<int>& row_slot,
                                     int nrows, const std::vector<int>& col_slot, int ncols) {
  std::vector<Eigen::Triplet<Scalar>> t;
  for (int j = 0; j < m.outerSize(); ++j) {
    if (col_slot[j] < 0) continue;
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(m, j); it; ++it)
      if (row_slot[it.row()] >= 0) t.emplace_back(row_slot[it.row()], col_slot[j], it.value());
  }
  Eigen::SparseMatrix<Scalar> r(nrows, ncols);
  r.setFromTriplets(t.begin(), t.end());
  return r;
}

}  // namespace

void SolverConfig::validate(int num_interior_edges) const {
  if (degree < 1) throw std::invalid_argument("degree must be at least 1");
  if (!(radius > 0)) throw std::invalid_argument("radius must be positive");
  if (N < 8 || N % 2 != 0) throw std::invalid_argument("N must be even and >= 8");
  if (!(lambda >= 0)) throw std::invalid_argument("lambda must be nonnegative");
  if (lambda_field.size() > 0) {
    if (lambda_field.size() != num_interior_edges)
      throw std::invalid_argument("lambda field has " + std::to_string(lambda_field.size()) +
                                  " entries, expected " + std::to_string(num_interior_edges));
    if (!(lambda_field.array() >= 0).all()) throw std::invalid_argument("lambda must be nonnegative");
  }
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be positive");
  if (!(mu > 0) || !(nu > 0)) throw std::invalid_argument("penalties mu and nu must be positive");
  if (!(adapt_ratio > 1) || !(adapt_scale > 1)) throw std::invalid_argument("adaptive factors must exceed 1");
  for (int e : mask)
    if (e < 0 || e >= num_interior_edges) throw std::invalid_argument("mask edge out of range");
}

Problem::Problem(const TriMesh& mesh, SolverConfig config, const BoundarySpec& boundary)
    : Problem(mesh, build_transport(mesh), std::move(config), boundary) {}

Problem::Problem(const TriMesh& mesh, TransportAtlas atlas, SolverConfig config, const BoundarySpec& boundary)
    : mesh_(&mesh), atlas_(std::move(atlas)), config_(std::move(config)) {
  init(config_, boundary);
}

void Problem::init(const SolverConfig& config, const BoundarySpec& boundary) {
  const TriMesh& mesh = *mesh_;
  config.validate(mesh.num_interior_edges());
  fd_ = make_fiber(config.N, config.radius);
  const int K = fd_.K;
  const int d = config.degree;
  ops_ = assemble_operators(mesh, atlas_, d, config.radius, K);
  bd_ = make_boundary_data(mesh, atlas_, boundary, d, K);
  kappa_bar_ = make_kappa_bar(mesh, atlas_, d);
  const int ne = mesh.num_interior_edges();
  lambda_ = config.lambda_field.size() > 0 ? config.lambda_field : Eigen::VectorXd::Constant(ne, config.lambda);
  mask_ = Eigen::Matrix<char, Eigen::Dynamic, 1>::Zero(ne);
  for (int e : config.mask) mask_[e] = 1;
  table_ = kernels::FourierTable(fd_.N, K);

  const int nc = mesh.num_corners();
  phase_.resize(nc, K + 1);
  sample_weight_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    for (int k = 0; k <= K; ++k) phase_(c, k) = unit_power(atlas_.corner_transport[c], -static_cast<long long>(k) * d);
    sample_weight_[c] = mesh.face_area(c / 3) / 3.0 * config.radius * 2 * kPi / fd_.N;
  }

  const int nb = static_cast<int>(ops_.boundary_edges.size());
  g0_.resize(nb);
  for (int b = 0; b < nb; ++b) {
    const auto& be = ops_.boundary_edges[b];
    const cdouble from = unit_power(atlas_.rho(mesh, be.from, be.face), d) * std::polar(1.0, bd_.gamma[be.from]);
    const cdouble to = unit_power(atlas_.rho(mesh, be.to, be.face), d) * std::polar(1.0, bd_.gamma[be.to]);
    g0_[b] = -std::arg(to / from) / (2 * kPi);
  }

  // Interior/boundary split for k != 0.
  const int nv = mesh.num_vertices();
  slot_.assign(nv, -1);
  boundary_row_.assign(nv, -1);
  std::vector<int> bslot(nv, -1);
  for (std::size_t i = 0; i < bd_.vertices.size(); ++i) {
    boundary_row_[bd_.vertices[i]] = static_cast<int>(i);
    bslot[bd_.vertices[i]] = static_cast<int>(i);
  }
  for (int v = 0; v < nv; ++v)
    if (!mesh.is_boundary_vertex(v)) {
      slot_[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  const int ni = static_cast<int>(interior_.size());
  const int nbv = static_cast<int>(bd_.vertices.size());
  lii_.resize(K + 1);
  lib_.resize(K + 1);
  chol_.resize(K + 1);
  std::vector<std::exception_ptr> errors(K + 1);
#pragma omp parallel for schedule(dynamic)
  for (int k = 1; k <= K; ++k) {
    try {
      lii_[k] = restrict(ops_.L[k], slot_, ni, slot_, ni);
      lib_[k] = restrict(ops_.L[k], slot_, ni, bslot, nbv);
      chol_[k] = std::make_unique<Eigen::SimplicialLDLT<SpMatC>>();
      if (ni > 0) {
        chol_[k]->compute(lii_[k]);
        if (chol_[k]->info() != Eigen::Success)
          throw std::runtime_error("factorization failed at frequency " + std::to_string(k));
      }
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Frequency 0: gauge-fix f0 at vertex 0.
  const SpMat P0 = ops_.P[0].real();
  cf_ = SpMat(ops_.B * ops_.fem.G * P0);
  cphi_ = SpMat(ops_.B * ops_.fem.J * ops_.cr.G);
  std::vector<int> gauge(nv);
  for (int v = 0; v < nv; ++v) gauge[v] = v - 1;
  std::vector<int> rows_all(nb);
  for (int b = 0; b < nb; ++b) rows_all[b] = b;
  l0r_ = restrict(ops_.L0, gauge, nv - 1, gauge, nv - 1);
  l0_chol_.compute(l0r_);
  if (l0_chol_.info() != Eigen::Success) throw std::runtime_error("factorization failed at frequency 0");
  const SpMat cfr = restrict(cf_, rows_all, nb, gauge, nv - 1);
  xf_ = l0_chol_.solve(Eigen::MatrixXd(cfr.transpose()));
  sf_ = cfr * xf_;
  const Eigen::VectorXd inv_mass = ops_.cr.mass.cwiseInverse();
  lml_ = SpMat(ops_.cr.L * inv_mass.asDiagonal() * ops_.cr.L);
  lhat_chol_.compute(ops_.cr.L);
  if (lhat_chol_.info() != Eigen::Success) throw std::runtime_error("factorization of the CR Laplacian failed");
  myphi_ = ops_.cr.mass.asDiagonal() * Eigen::MatrixXd(lhat_chol_.solve(Eigen::MatrixXd(cphi_.transpose())));
}

// H = mu l L-hat + nu L-hat M-hat^-1 L-hat = L-hat M-hat^-1 Q with Q = nu (L-hat + t M-hat),
// t = mu l / nu, so H^-1 = Q^-1 M-hat L-hat^-1 and only Q depends on the penalties.
Problem::RatioFactor& Problem::ratio_factor(double t) {
  for (auto& e : ratio_cache_)
    if (e->t == t) {
      e->last_use = ++cache_clock_;
      return *e;
    }
  if (ratio_cache_.size() >= kRatioCacheSize) {
    auto oldest = std::min_element(ratio_cache_.begin(), ratio_cache_.end(),
                                   [](const auto& a, const auto& b) { return a->last_use < b->last_use; });
    ratio_cache_.erase(oldest);
  }
  auto e = std::make_unique<RatioFactor>();
  e->t = t;
  e->last_use = ++cache_clock_;
  const SpMat Q = SpMat(ops_.cr.L + t * SpMat(ops_.cr.mass.asDiagonal()));
  e->chol.compute(Q);
  if (e->chol.info() != Eigen::Success) throw std::runtime_error("factorization of the coexact block failed");
  e->w = cphi_ * Eigen::MatrixXd(e->chol.solve(myphi_));
  ratio_cache_.push_back(std::move(e));
  ++coexact_count_;
  return *ratio_cache_.back();
}

Eigen::VectorXd Problem::apply_h_inverse(const RatioFactor& f, const Eigen::VectorXd& b, double nu) const {
  const Eigen::VectorXd y = ops_.cr.mass.cwiseProduct(lhat_chol_.solve(b));
  return f.chol.solve(y) / nu;
}

void Problem::factor_zero(double mu, double nu) {
  const double mul = mu * fd_.length();
  current_ = &ratio_factor(mul / nu);
  const Eigen::MatrixXd S = sf_ / mul + current_->w / nu;
  schur_.compute(S);
  if (schur_.info() != Eigen::Success || !(schur_.rcond() > 1e-14))
    throw std::runtime_error("singular Schur complement: incompatible boundary data");
  factored_mu_ = mu;
  factored_nu_ = nu;
  ++schur_count_;
}

Eigen::VectorXcd Problem::solve_frequency(int k, const Eigen::VectorXcd& rhs, double* residual) const {
  if (k < 1 || k > fd_.K) throw std::invalid_argument("frequency out of range: " + std::to_string(k));
  const int nv = mesh_->num_vertices();
  const int ni = static_cast<int>(interior_.size());
  Eigen::VectorXcd fb(bd_.vertices.size());
  for (std::size_t i = 0; i < bd_.vertices.size(); ++i) fb[i] = bd_.values(i, k);
  Eigen::VectorXcd r(ni);
  for (int i = 0; i < ni; ++i) r[i] = rhs[interior_[i]];
  r -= lib_[k] * fb;
  Eigen::VectorXcd fi = ni > 0 ? Eigen::VectorXcd(chol_[k]->solve(r)) : Eigen::VectorXcd();
  if (residual) {
    const double scale = r.norm();
    const double err = ni > 0 ? (lii_[k] * fi - r).norm() : 0.0;
    *residual = scale > 0 ? err / scale : err;
  }
  Eigen::VectorXcd f(nv);
  for (std::size_t i = 0; i < bd_.vertices.size(); ++i) f[bd_.vertices[i]] = fb[i];
  for (int i = 0; i < ni; ++i) f[interior_[i]] = fi[i];
  return f;
}

Problem::ZeroSolution Problem::solve_zero(const Eigen::VectorXd& b1, const Eigen::VectorXd& b2, double mu,
                                          double nu) {
  if (mu != factored_mu_ || nu != factored_nu_) factor_zero(mu, nu);
  const double mul = mu * fd_.length();
  const int nv = mesh_->num_vertices();
  const Eigen::VectorXd y1 = l0_chol_.solve(b1.tail(nv - 1));
  const Eigen::VectorXd y2 = apply_h_inverse(*current_, b2, nu);
  const Eigen::VectorXd rhs = cf_.rightCols(nv - 1) * y1 / mul + cphi_ * y2 - g0_;
  ZeroSolution s;
  s.beta = schur_.solve(rhs);
  s.f0 = Eigen::VectorXd::Zero(nv);
  s.f0.tail(nv - 1) = (y1 - xf_ * s.beta) / mul;
  s.phi = apply_h_inverse(*current_, b2 - cphi_.transpose() * s.beta, nu);
  return s;
}

double Problem::kkt_residual(const ZeroSolution& s, const Eigen::VectorXd& b1, const Eigen::VectorXd& b2,
                             double mu, double nu) const {
  const double mul = mu * fd_.length();
  const Eigen::VectorXd r1 = mul * (ops_.L0 * s.f0) + cf_.transpose() * s.beta - b1;
  const Eigen::VectorXd r2 =
      mul * (ops_.cr.L * s.phi) + nu * (lml_ * s.phi) + cphi_.transpose() * s.beta - b2;
  const Eigen::VectorXd r3 = cf_ * s.f0 + cphi_ * s.phi - g0_;
  const double err = std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
  const double scale = std::sqrt(b1.squaredNorm() + b2.squaredNorm() + g0_.squaredNorm());
  return scale > 0 ? err / scale : err;
}

void Problem::forward(const Eigen::ArrayXXd& x, Eigen::ArrayXXcd& out) const {
  if (config_.serial_kernels)
    kernels::serial::fourier_forward(x, table_, out);
  else
    kernels::omp::fourier_forward(x, table_, out);
}

void Problem::inverse(const Eigen::ArrayXXcd& c, Eigen::ArrayXXd& out) const {
  if (config_.serial_kernels)
    kernels::serial::fourier_inverse(c, table_, out);
  else
    kernels::omp::fourier_inverse(c, table_, out);
}

BundleState init_state(const Problem& p) {
  const TriMesh& mesh = p.mesh();
  const int nc = mesh.num_corners();
  const int N = p.fiber().N;
  BundleState s;
  s.sigma = kernels::CovectorSamples(nc, N);
  s.sigma.v.setConstant(make_tau_bar(p.fiber()).v);
  s.w = kernels::CovectorSamples(nc, N);
  s.gamma = p.kappa_bar();
  s.z = Eigen::VectorXd::Zero(mesh.num_interior_edges());
  s.phi = Eigen::VectorXd::Zero(mesh.num_interior_edges());
  s.f.assign(p.fiber().K + 1, Eigen::VectorXcd::Zero(mesh.num_vertices()));
  s.mu = p.config().mu;
  s.nu = p.config().nu;
  return s;
}

AlphaCoefficients alpha_coefficients(const Problem& p, const BundleState& s) {
  if (s.sigma.rows() != p.mesh().num_corners() || s.sigma.cols() != p.fiber().N)
    throw std::invalid_argument("state shape does not match the problem");
  AlphaCoefficients a;
  const double tau_v = make_tau_bar(p.fiber()).v;
  p.forward(s.sigma.hx + s.w.hx, a.hx);
  p.forward(s.sigma.hy + s.w.hy, a.hy);
  p.forward(s.sigma.v + s.w.v - tau_v, a.v);
  return a;
}

Eigen::VectorXcd frequency_rhs(const Problem& p, const AlphaCoefficients& a, int k) {
  const TriMesh& mesh = p.mesh();
  const auto& fem = p.ops().fem;
  const double vert = k / (p.config().radius * p.config().radius);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(mesh.num_vertices());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const double area = fem.area[f];
    cdouble hx = 0, hy = 0, vsum = 0;
    for (int i = 0; i < 3; ++i) {
      hx += a.hx(3 * f + i, k);
      hy += a.hy(3 * f + i, k);
      vsum += a.v(3 * f + i, k);
    }
    hx *= area / 3;
    hy *= area / 3;
    for (int i = 0; i < 3; ++i) {
      const int c = 3 * f + i;
      const Eigen::Vector2d& g = fem.corner_grad[c];
      const cdouble mv = area / 12 * (a.v(c, k) + vsum);
      const cdouble y = g.x() * hx + g.y() * hy - cdouble(0, vert) * mv;
      rhs[mesh.corner_vertex(c)] += std::conj(p.phase()(c, k)) * y;
    }
  }
  return rhs;
}

double global_step_k(const Problem& p, const AlphaCoefficients& a, BundleState& s) {
  const int K = p.fiber().K;
  std::vector<double> res(K + 1, 0.0);
#pragma omp parallel for schedule(dynamic)
  for (int k = 1; k <= K; ++k) s.f[k] = p.solve_frequency(k, frequency_rhs(p, a, k), &res[k]);
  return *std::max_element(res.begin(), res.end());
}

double global_step_0(Problem& p, const AlphaCoefficients& a, BundleState& s) {
  const TriMesh& mesh = p.mesh();
  const auto& ops = p.ops();
  const auto& fem = ops.fem;
  const double mul = s.mu * p.fiber().length();
  const int nf = mesh.num_faces();
  // A U h_0 as a stacked face vector.
  Eigen::VectorXd auh(2 * nf);
  for (int f = 0; f < nf; ++f) {
    double hx = 0, hy = 0;
    for (int i = 0; i < 3; ++i) {
      hx += a.hx(3 * f + i, 0).real();
      hy += a.hy(3 * f + i, 0).real();
    }
    auh[2 * f] = fem.area[f] * hx / 3;
    auh[2 * f + 1] = fem.area[f] * hy / 3;
  }
  Eigen::VectorXd b1 = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int c = 0; c < mesh.num_corners(); ++c) {
    const int f = c / 3;
    b1[mesh.corner_vertex(c)] += mul * fem.corner_grad[c].dot(auh.segment<2>(2 * f));
  }
  const Eigen::VectorXd g = s.gamma - p.kappa_bar() + s.z;
  const Eigen::VectorXd b2 =
      mul * (ops.cr.G.transpose() * (fem.J.transpose() * auh)) + s.nu * (ops.cr.L * g);
  auto sol = p.solve_zero(b1, b2, s.mu, s.nu);
  s.f[0] = sol.f0.cast<cdouble>();
  s.phi = sol.phi;
  return p.config().check_kkt ? p.kkt_residual(sol, b1, b2, s.mu, s.nu) : 0.0;
}

kernels::CovectorSamples reconstruct_target(const Problem& p, const BundleState& s) {
  const TriMesh& mesh = p.mesh();
  const auto& fem = p.ops().fem;
  const auto& cr = p.ops().cr;
  const int K = p.fiber().K;
  const int nc = mesh.num_corners();
  Eigen::ArrayXXcd hx(nc, K + 1), hy(nc, K + 1), v(nc, K + 1);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    for (int k = 0; k <= K; ++k) {
      cdouble gx = 0, gy = 0;
      cdouble u[3];
      for (int i = 0; i < 3; ++i) {
        const int c = 3 * f + i;
        u[i] = p.phase()(c, k) * s.f[k][mesh.corner_vertex(c)];
        gx += fem.corner_grad[c].x() * u[i];
        gy += fem.corner_grad[c].y() * u[i];
      }
      if (k == 0) {
        // J G-hat phi: quarter turn of the CR gradient.
        double px = 0, py = 0;
        for (int i = 0; i < 3; ++i) {
          const int ie = mesh.interior_index(mesh.face_edge(f, i));
          if (ie < 0) continue;
          px += cr.edge_grad[3 * f + i].x() * s.phi[ie];
          py += cr.edge_grad[3 * f + i].y() * s.phi[ie];
        }
        gx += -py;
        gy += px;
      }
      for (int i = 0; i < 3; ++i) {
        const int c = 3 * f + i;
        hx(c, k) = gx;
        hy(c, k) = gy;
        v(c, k) = k == 0 ? cdouble(make_tau_bar(p.fiber()).v) : cdouble(0, k) * u[i];
      }
    }
  }
  kernels::CovectorSamples out;
  p.inverse(hx, out.hx);
  p.inverse(hy, out.hy);
  p.inverse(v, out.v);
  return out;
}

kernels::CovectorSamples reconstruct_sigma_hat(const Problem& p, const BundleState& s) {
  kernels::CovectorSamples t = reconstruct_target(p, s);
  t.hx -= s.w.hx;
  t.hy -= s.w.hy;
  t.v -= s.w.v;
  return t;
}

Eigen::VectorXd gamma_target(const Problem& p, const BundleState& s) {
  return p.kappa_bar() + ((p.ops().cr.L * s.phi).array() / p.ops().cr.mass.array()).matrix();
}

kernels::CovectorSamples local_step_sigma(const kernels::CovectorSamples& sigma_hat, double mu, double radius,
                                          bool serial) {
  kernels::CovectorSamples out;
  if (serial)
    kernels::serial::shrink_sigma(sigma_hat, mu, radius, out);
  else
    kernels::omp::shrink_sigma(sigma_hat, mu, radius, out);
  return out;
}

Eigen::VectorXd local_step_gamma(const Eigen::VectorXd& gamma_hat, double nu, const Eigen::VectorXd& lambda,
                                 const Eigen::Matrix<char, Eigen::Dynamic, 1>& mask) {
  Eigen::VectorXd out;
  kernels::omp::shrink_gamma(gamma_hat, lambda / nu, mask, out);
  return out;
}

Penalties adapt_penalties(const Residuals& r, const SolverConfig& c, BundleState& s) {
  if (!c.adaptive) return {s.mu, s.nu};
  // A pair already below tolerance is left alone: its ratio is round-off.
  if (std::max(r.primal_mu, r.dual_mu) >= c.epsilon) {
    if (r.primal_mu > c.adapt_ratio * r.dual_mu) {
      s.mu *= c.adapt_scale;
      s.w.hx /= c.adapt_scale;
      s.w.hy /= c.adapt_scale;
      s.w.v /= c.adapt_scale;
    } else if (r.dual_mu > c.adapt_ratio * r.primal_mu) {
      s.mu /= c.adapt_scale;
      s.w.hx *= c.adapt_scale;
      s.w.hy *= c.adapt_scale;
      s.w.v *= c.adapt_scale;
    }
  }
  if (std::max(r.primal_nu, r.dual_nu) >= c.epsilon) {
    if (r.primal_nu > c.adapt_ratio * r.dual_nu) {
      s.nu *= c.adapt_scale;
      s.z /= c.adapt_scale;
    } else if (r.dual_nu > c.adapt_ratio * r.primal_nu) {
      s.nu /= c.adapt_scale;
      s.z *= c.adapt_scale;
    }
  }
  return {s.mu, s.nu};
}

Objective objective(const Problem& p, const BundleState& s) {
  Objective o;
  o.sigma = kernels::omp::sigma_mass(s.sigma, p.sample_weight(), p.config().radius);
  const auto& m = p.ops().cr.mass;
  for (Eigen::Index e = 0; e < s.gamma.size(); ++e) o.gamma += p.lambda()[e] * m[e] * std::abs(s.gamma[e]);
  return o;
}

double integrate_edges(const Problem& p, const Eigen::VectorXd& x) { return p.ops().cr.mass.dot(x); }

IterationInfo admm_iteration(Problem& p, BundleState& s, PhaseTimes* times) {
  IterationInfo info;
  const bool serial = p.config().serial_kernels;
  const double r = p.config().radius;
  auto t0 = Clock::now();
  const AlphaCoefficients a = alpha_coefficients(p, s);
  info.freq_residual = global_step_k(p, a, s);
  auto t1 = Clock::now();
  info.kkt_residual = global_step_0(p, a, s);
  auto t2 = Clock::now();

  const kernels::CovectorSamples target = reconstruct_target(p, s);
  kernels::CovectorSamples sigma_hat = target;
  sigma_hat.hx -= s.w.hx;
  sigma_hat.hy -= s.w.hy;
  sigma_hat.v -= s.w.v;
  const Eigen::VectorXd gtarget = gamma_target(p, s);
  auto t3 = Clock::now();

  const kernels::CovectorSamples prev = std::move(s.sigma);
  const Eigen::VectorXd prev_gamma = s.gamma;
  s.sigma = local_step_sigma(sigma_hat, s.mu, r, serial);
  s.gamma = local_step_gamma(gtarget - s.z, s.nu, p.lambda(), p.mask());
  auto t4 = Clock::now();

  const kernels::Residual2 r2 =
      serial ? kernels::serial::sigma_dual_update(s.sigma, target, prev, p.sample_weight(), r, s.w)
             : kernels::omp::sigma_dual_update(s.sigma, target, prev, p.sample_weight(), r, s.w);
  const Eigen::VectorXd gp = s.gamma - gtarget;
  s.z += gp;
  const Eigen::VectorXd gd = prev_gamma - s.gamma;
  const auto& m = p.ops().cr.mass;
  info.residuals.primal_mu = std::sqrt(r2.primal);
  info.residuals.dual_mu = std::sqrt(r2.dual);
  info.residuals.primal_nu = std::sqrt(gp.dot(m.asDiagonal() * gp));
  info.residuals.dual_nu = std::sqrt(gd.dot(m.asDiagonal() * gd));
  if (!info.residuals.below(p.config().epsilon)) adapt_penalties(info.residuals, p.config(), s);
  auto t5 = Clock::now();
  ++s.iteration;
  if (times) {
    times->global_k += std::chrono::duration<double>(t1 - t0).count();
    times->global_0 += std::chrono::duration<double>(t2 - t1).count();
    times->reconstruct += std::chrono::duration<double>(t3 - t2).count();
    times->local += std::chrono::duration<double>(t4 - t3).count();
    times->dual += std::chrono::duration<double>(t5 - t4).count();
  }
  return info;
}

AdmmReport run_admm(Problem& p, BundleState& s) {
  AdmmReport rep;
  const auto t0 = Clock::now();
  const double g0_total = p.g0().sum();
  for (int it = 0; it < p.config().max_iters; ++it) {
    const IterationInfo info = admm_iteration(p, s, &rep.times);
    rep.history.push_back(info.residuals);
    rep.kkt_history.push_back(info.kkt_residual);
    rep.max_kkt_residual = std::max(rep.max_kkt_residual, info.kkt_residual);
    rep.max_freq_residual = std::max(rep.max_freq_residual, info.freq_residual);
    const double circulation = integrate_edges(p, gamma_target(p, s) - p.kappa_bar()) + g0_total;
    rep.max_conservation_error = std::max(rep.max_conservation_error, std::abs(circulation));
    rep.iterations = it + 1;
    if (info.residuals.below(p.config().epsilon)) {
      rep.converged = true;
      break;
    }
  }
  rep.wall_time = seconds_since(t0);
  rep.objective = objective(p, s);
  return rep;
}

AdmmResult run_admm(const TriMesh& mesh, const SolverConfig& config, const BoundarySpec& boundary) {
  AdmmResult res;
  const auto t0 = Clock::now();
  res.problem = std::make_unique<Problem>(mesh, config, boundary);
  res.state = init_state(*res.problem);
  const double setup = seconds_since(t0);
  res.report = run_admm(*res.problem, res.state);
  res.report.times.setup = setup;
  return res;
}

}  // namespace minsec
