#pragma once

#include <Eigen/Core>

// Per-iteration array kernels of the ADMM loop. Each kernel exists twice: a
// plain serial loop (the reference, used by tests) and an OpenMP version.
// Sample arrays are entities x N, coefficient arrays entities x (K + 1), both
// column-major so a fixed increment or frequency is contiguous.

namespace minsec::kernels {

/// Twiddle factors e^{-i k theta_m} / N for k = 0..K, m = 0..N-1.
struct FourierTable {
  int N = 0;
  int K = 0;
  Eigen::ArrayXXcd forward;  // (K + 1) x N
  Eigen::ArrayXXcd inverse;  // (K + 1) x N, e^{+i k theta_m} (times 2 for k >= 1)
  // Real forms for matrix products: forward as N x (K + 1), inverse_im = -Im(inverse).
  Eigen::MatrixXd forward_re, forward_im, inverse_re, inverse_im;

  FourierTable() = default;
  FourierTable(int N, int K);
};

/// Horizontal (x, y) and vertical components of a covector field sampled at
/// every corner and increment.
struct CovectorSamples {
  Eigen::ArrayXXd hx, hy, v;

  CovectorSamples() = default;
  CovectorSamples(Eigen::Index rows, Eigen::Index cols);
  Eigen::Index rows() const { return v.rows(); }
  Eigen::Index cols() const { return v.cols(); }
};

struct Residual2 {
  double primal = 0.0;  // squared, unscaled
  double dual = 0.0;
};

namespace serial {
void fourier_forward(const Eigen::ArrayXXd& x, const FourierTable& t, Eigen::ArrayXXcd& out);
void fourier_inverse(const Eigen::ArrayXXcd& c, const FourierTable& t, Eigen::ArrayXXd& out);
/// Positivity clamp, then shrinkage with threshold 1/mu in the metric |h|^2 + r^-2 v^2.
void shrink_sigma(const CovectorSamples& target, double mu, double radius, CovectorSamples& out);
/// Scalar shrinkage with per-entry threshold; entries with mask != 0 become 0.
void shrink_gamma(const Eigen::VectorXd& target, const Eigen::VectorXd& threshold,
                  const Eigen::Matrix<char, Eigen::Dynamic, 1>& mask, Eigen::VectorXd& out);
/// dual += sigma - reached. Returns the squared weighted norms of sigma - reached
/// and prev - sigma.
Residual2 sigma_dual_update(const CovectorSamples& sigma, const CovectorSamples& reached,
                            const CovectorSamples& prev, const Eigen::VectorXd& row_weight, double radius,
                            CovectorSamples& dual);
/// sum_c row_weight_c sum_m |sigma_{c,m}|_g
double sigma_mass(const CovectorSamples& sigma, const Eigen::VectorXd& row_weight, double radius);
}  // namespace serial

// Same contracts; reductions are summed in a fixed order, so results do not
// depend on the thread count.
namespace omp {
void fourier_forward(const Eigen::ArrayXXd& x, const FourierTable& t, Eigen::ArrayXXcd& out);
void fourier_inverse(const Eigen::ArrayXXcd& c, const FourierTable& t, Eigen::ArrayXXd& out);
/// Positivity clamp, then shrinkage with threshold 1/mu in the metric |h|^2 + r^-2 v^2.
void shrink_sigma(const CovectorSamples& target, double mu, double radius, CovectorSamples& out);
/// Scalar shrinkage with per-entry threshold; entries with mask != 0 become 0.
void shrink_gamma(const Eigen::VectorXd& target, const Eigen::VectorXd& threshold,
                  const Eigen::Matrix<char, Eigen::Dynamic, 1>& mask, Eigen::VectorXd& out);
/// dual += sigma - reached. Returns the squared weighted norms of sigma - reached
/// and prev - sigma.
Residual2 sigma_dual_update(const CovectorSamples& sigma, const CovectorSamples& reached,
                            const CovectorSamples& prev, const Eigen::VectorXd& row_weight, double radius,
                            CovectorSamples& dual);
/// sum_c row_weight_c sum_m |sigma_{c,m}|_g
double sigma_mass(const CovectorSamples& sigma, const Eigen::VectorXd& row_weight, double radius);
}  // namespace omp

/// OpenMP thread count used by the parallel kernels and solver (<= 0 leaves
/// the runtime default).
void set_threads(int n);
int max_threads();

}  // namespace minsec::kernels
