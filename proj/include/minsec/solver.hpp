#pragma once

#include "minsec/bundle.hpp"
#include "minsec/kernels.hpp"
#include "minsec/operators.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

#include <memory>
#include <optional>
#include <vector>

namespace minsec {

struct SolverConfig {
  int degree = 1;
  double radius = 1.0;
  int N = 64;
  double lambda = 1.0;
  /// Per-interior-edge lambda; overrides `lambda` when non-empty.
  Eigen::VectorXd lambda_field;
  double epsilon = 5e-4;
  int max_iters = 2000;
  double mu = 1.0;
  double nu = 1.0;
  bool adaptive = true;
  double adapt_ratio = 10.0;
  double adapt_scale = 2.0;
  /// Interior edges (compact numbering) where Gamma is pinned to 0.
  std::vector<int> mask;
  /// Use the serial reference kernels instead of the OpenMP ones.
  bool serial_kernels = false;
  /// Run the KKT residual check after every frequency-0 solve.
  bool check_kkt = true;

  /// Throws std::invalid_argument naming the offending field.
  void validate(int num_interior_edges) const;
};

/// ADMM iterate. Samples are corners x increments; frequency arrays hold k = 0..K.
struct BundleState {
  kernels::CovectorSamples sigma;
  kernels::CovectorSamples w;
  Eigen::VectorXd gamma;
  Eigen::VectorXd z;
  std::vector<Eigen::VectorXcd> f;  // f[k] per vertex; f[0] is real
  Eigen::VectorXd phi;
  double mu = 1.0;
  double nu = 1.0;
  int iteration = 0;
};

struct Residuals {
  double primal_mu = 0, dual_mu = 0, primal_nu = 0, dual_nu = 0;
  bool below(double eps) const { return primal_mu < eps && dual_mu < eps && primal_nu < eps && dual_nu < eps; }
};

/// Everything fixed for a run: geometry, operators, boundary data and the
/// prefactored linear systems. Keeps a pointer to the mesh, which must outlive it.
class Problem {
 public:
  Problem(const TriMesh& mesh, SolverConfig config, const BoundarySpec& boundary);
  Problem(const TriMesh& mesh, TransportAtlas atlas, SolverConfig config, const BoundarySpec& boundary);

  const TriMesh& mesh() const { return *mesh_; }
  const TransportAtlas& atlas() const { return atlas_; }
  const OperatorSet& ops() const { return ops_; }
  const FiberDiscretization& fiber() const { return fd_; }
  const BoundaryData& boundary() const { return bd_; }
  const SolverConfig& config() const { return config_; }
  const Eigen::VectorXd& kappa_bar() const { return kappa_bar_; }
  const Eigen::VectorXd& lambda() const { return lambda_; }
  const Eigen::Matrix<char, Eigen::Dynamic, 1>& mask() const { return mask_; }
  const kernels::FourierTable& table() const { return table_; }
  /// rho_c^{-k d} per corner (rows) and frequency k = 0..K (columns).
  const Eigen::ArrayXXcd& phase() const { return phase_; }
  /// (A_T / 3) r (2 pi / N) per corner: the bundle volume of one sample.
  const Eigen::VectorXd& sample_weight() const { return sample_weight_; }
  /// Frequency-0 boundary data per boundary edge (order of ops().boundary_edges).
  const Eigen::VectorXd& g0() const { return g0_; }
  const std::vector<int>& interior_vertices() const { return interior_; }

  // Frequency k >= 1: solve the interior block with pinned boundary values.
  // Returns the full vertex vector and sets *residual to the relative residual.
  Eigen::VectorXcd solve_frequency(int k, const Eigen::VectorXcd& rhs, double* residual = nullptr) const;

  struct ZeroSolution {
    Eigen::VectorXd f0, phi, beta;
    double kkt_residual = 0;
  };
  /// Frequency-0 KKT solve for right-hand sides (b1, b2, g0) at penalties mu, nu.
  ZeroSolution solve_zero(const Eigen::VectorXd& b1, const Eigen::VectorXd& b2, double mu, double nu);
  /// Full 3-block KKT residual relative to the right-hand side.
  double kkt_residual(const ZeroSolution& s, const Eigen::VectorXd& b1, const Eigen::VectorXd& b2, double mu,
                      double nu) const;
  int num_constraints() const { return static_cast<int>(g0_.size()); }
  int schur_refactorizations() const { return schur_count_; }
  /// Sparse factorizations of the coexact block (one per distinct mu l / nu seen recently).
  int coexact_factorizations() const { return coexact_count_; }

  void forward(const Eigen::ArrayXXd& x, Eigen::ArrayXXcd& out) const;
  void inverse(const Eigen::ArrayXXcd& c, Eigen::ArrayXXd& out) const;

 private:
  void init(const SolverConfig& config, const BoundarySpec& boundary);
  void factor_zero(double mu, double nu);

  const TriMesh* mesh_;
  TransportAtlas atlas_;
  SolverConfig config_;
  OperatorSet ops_;
  FiberDiscretization fd_;
  BoundaryData bd_;
  Eigen::VectorXd kappa_bar_, lambda_, sample_weight_, g0_;
  Eigen::Matrix<char, Eigen::Dynamic, 1> mask_;
  kernels::FourierTable table_;
  Eigen::ArrayXXcd phase_;

  std::vector<int> interior_;     // interior vertex ids
  std::vector<int> boundary_row_; // boundary vertex id -> row of bd_.values
  std::vector<int> slot_;         // vertex -> index in interior_ or -1
  std::vector<SpMatC> lii_, lib_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<SpMatC>>> chol_;

  // Frequency 0.
  SpMat cf_, cphi_;       // constraint blocks B G P0 and B J G-hat
  SpMat l0r_;             // L0 without the gauge vertex 0
  Eigen::SimplicialLDLT<SpMat> l0_chol_;
  Eigen::MatrixXd xf_;    // L0r^{-1} Cf_r^T
  Eigen::MatrixXd sf_;    // Cf_r L0r^{-1} Cf_r^T
  SpMat lml_;             // L-hat M-hat^{-1} L-hat
  Eigen::SimplicialLDLT<SpMat> lhat_chol_;
  Eigen::MatrixXd myphi_;  // M-hat L-hat^{-1} Cphi^T
  struct RatioFactor {
    double t = 0;
    long last_use = 0;
    Eigen::SimplicialLDLT<SpMat> chol;  // L-hat + t M-hat
    Eigen::MatrixXd w;                  // Cphi (L-hat + t M-hat)^{-1} M-hat L-hat^{-1} Cphi^T
  };
  static constexpr std::size_t kRatioCacheSize = 16;
  std::vector<std::unique_ptr<RatioFactor>> ratio_cache_;
  long cache_clock_ = 0;
  RatioFactor* current_ = nullptr;
  RatioFactor& ratio_factor(double t);
  Eigen::VectorXd apply_h_inverse(const RatioFactor& f, const Eigen::VectorXd& b, double nu) const;
  Eigen::LDLT<Eigen::MatrixXd> schur_;
  double factored_mu_ = -1, factored_nu_ = -1;
  int schur_count_ = 0;
  int coexact_count_ = 0;
};

/// Sigma = tau-bar samples, Gamma = kappa-bar, f = phi = w = z = 0.
BundleState init_state(const Problem& p);

/// Frequency components of alpha = Sigma - tau-bar + w.
struct AlphaCoefficients {
  Eigen::ArrayXXcd hx, hy, v;  // corners x (K + 1)
};
AlphaCoefficients alpha_coefficients(const Problem& p, const BundleState& s);

/// P_k^H G^T A U h_k - i k r^-2 P_k^H M v_k.
Eigen::VectorXcd frequency_rhs(const Problem& p, const AlphaCoefficients& a, int k);
/// Solves every k != 0 (in parallel over k); returns the largest relative residual.
double global_step_k(const Problem& p, const AlphaCoefficients& a, BundleState& s);
/// Solves the frequency-0 KKT system; returns the relative KKT residual.
double global_step_0(Problem& p, const AlphaCoefficients& a, BundleState& s);

/// tau-bar + df + pi^* star d phi sampled at corners and increments (no dual).
kernels::CovectorSamples reconstruct_target(const Problem& p, const BundleState& s);
/// reconstruct_target - w.
kernels::CovectorSamples reconstruct_sigma_hat(const Problem& p, const BundleState& s);
/// kappa-bar + M-hat^{-1} L-hat phi.
Eigen::VectorXd gamma_target(const Problem& p, const BundleState& s);

kernels::CovectorSamples local_step_sigma(const kernels::CovectorSamples& sigma_hat, double mu, double radius,
                                          bool serial = false);
Eigen::VectorXd local_step_gamma(const Eigen::VectorXd& gamma_hat, double nu, const Eigen::VectorXd& lambda,
                                 const Eigen::Matrix<char, Eigen::Dynamic, 1>& mask);

struct Penalties {
  double mu, nu;
};
/// Residual-balancing update; rescales the scaled duals in `s` accordingly. A
/// penalty whose residual pair is already below epsilon is left unchanged.
Penalties adapt_penalties(const Residuals& r, const SolverConfig& c, BundleState& s);

/// M(Sigma) and lambda M(Gamma).
struct Objective {
  double sigma = 0, gamma = 0;
  double total() const { return sigma + gamma; }
};
Objective objective(const Problem& p, const BundleState& s);

/// One ADMM iteration (global, local, dual, residuals, adaptation).
struct IterationInfo {
  Residuals residuals;
  double kkt_residual = 0;
  double freq_residual = 0;
};

struct PhaseTimes {
  double setup = 0, global_k = 0, global_0 = 0, reconstruct = 0, local = 0, dual = 0;
};

struct AdmmReport {
  bool converged = false;
  int iterations = 0;
  std::vector<Residuals> history;
  std::vector<double> kkt_history;
  double max_kkt_residual = 0;
  double max_freq_residual = 0;
  double max_conservation_error = 0;
  PhaseTimes times;
  double wall_time = 0;
  Objective objective;
};

IterationInfo admm_iteration(Problem& p, BundleState& s, PhaseTimes* times = nullptr);

/// Runs until all four residuals drop below epsilon or max_iters is reached.
AdmmReport run_admm(Problem& p, BundleState& s);

struct AdmmResult {
  std::unique_ptr<Problem> problem;
  BundleState state;
  AdmmReport report;
};
AdmmResult run_admm(const TriMesh& mesh, const SolverConfig& config, const BoundarySpec& boundary);

/// sum_e M-hat_e x_e.
double integrate_edges(const Problem& p, const Eigen::VectorXd& x);

}  // namespace minsec
