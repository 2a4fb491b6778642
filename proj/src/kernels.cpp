#include "minsec/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace minsec::kernels {

FourierTable::FourierTable(int n, int k)
    : N(n), K(k), forward(k + 1, n), inverse(k + 1, n), forward_re(n, k + 1), forward_im(n, k + 1),
      inverse_re(k + 1, n), inverse_im(k + 1, n) {
  for (int f = 0; f <= K; ++f) {
    for (int m = 0; m < N; ++m) {
      // Exact at multiples of pi/2.
      const long long j = (static_cast<long long>(f) * m) % N;
      std::complex<double> e;
      if ((4 * j) % N == 0) {
        static constexpr double re[4] = {1, 0, -1, 0}, im[4] = {0, 1, 0, -1};
        const long long q = 4 * j / N;
        e = {re[q], im[q]};
      } else {
        const double a = 2 * std::numbers::pi * j / N;
        e = {std::cos(a), std::sin(a)};
      }
      forward(f, m) = std::conj(e) / static_cast<double>(N);
      inverse(f, m) = f == 0 ? e : 2.0 * e;
      forward_re(m, f) = forward(f, m).real();
      forward_im(m, f) = forward(f, m).imag();
      inverse_re(f, m) = inverse(f, m).real();
      inverse_im(f, m) = -inverse(f, m).imag();
    }
  }
}

CovectorSamples::CovectorSamples(Eigen::Index rows, Eigen::Index cols)
    : hx(Eigen::ArrayXXd::Zero(rows, cols)),
      hy(Eigen::ArrayXXd::Zero(rows, cols)),
      v(Eigen::ArrayXXd::Zero(rows, cols)) {}

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

namespace {

constexpr Eigen::Index kBlock = 512;

// Row range [r0, r1) of the forward transform.
void forward_rows(const Eigen::ArrayXXd& x, const FourierTable& t, Eigen::ArrayXXcd& out, Eigen::Index r0,
                  Eigen::Index r1) {
  const Eigen::Index n = r1 - r0;
  out.middleRows(r0, n).setZero();
  for (int m = 0; m < t.N; ++m) {
    const double* xm = &x(r0, m);
    for (int k = 0; k <= t.K; ++k) {
      const std::complex<double> w = t.forward(k, m);
      std::complex<double>* o = &out(r0, k);
      for (Eigen::Index c = 0; c < n; ++c) o[c] += w * xm[c];
    }
  }
}

void inverse_rows(const Eigen::ArrayXXcd& co, const FourierTable& t, Eigen::ArrayXXd& out, Eigen::Index r0,
                  Eigen::Index r1) {
  const Eigen::Index n = r1 - r0;
  for (int m = 0; m < t.N; ++m) {
    double* o = &out(r0, m);
    std::fill(o, o + n, 0.0);
    for (int k = 0; k <= t.K; ++k) {
      const double wr = t.inverse(k, m).real();
      const double wi = t.inverse(k, m).imag();
      const std::complex<double>* ck = &co(r0, k);
      for (Eigen::Index c = 0; c < n; ++c) o[c] += wr * ck[c].real() - wi * ck[c].imag();
    }
  }
}

inline void shrink_one(double hx, double hy, double v, double mu, double inv_r2, double& ox, double& oy,
                       double& ov) {
  v = std::max(v, 0.0);
  const double norm = std::sqrt(hx * hx + hy * hy + inv_r2 * v * v);
  const double s = norm > 0 ? std::max(0.0, 1.0 - 1.0 / (mu * norm)) : 0.0;
  ox = s * hx;
  oy = s * hy;
  ov = s * v;
}

inline double gamma_shrink(double x, double thr) {
  const double a = std::abs(x);
  return a > thr ? (1.0 - thr / a) * x : 0.0;
}

// Squared residual contributions of one corner row.
inline Residual2 dual_row(const CovectorSamples& s, const CovectorSamples& reached, const CovectorSamples& prev,
                          double inv_r2, CovectorSamples& dual, Eigen::Index c) {
  Residual2 r;
  for (Eigen::Index m = 0; m < s.cols(); ++m) {
    const double px = s.hx(c, m) - reached.hx(c, m);
    const double py = s.hy(c, m) - reached.hy(c, m);
    const double pv = s.v(c, m) - reached.v(c, m);
    dual.hx(c, m) += px;
    dual.hy(c, m) += py;
    dual.v(c, m) += pv;
    r.primal += px * px + py * py + inv_r2 * pv * pv;
    const double dx = prev.hx(c, m) - s.hx(c, m);
    const double dy = prev.hy(c, m) - s.hy(c, m);
    const double dv = prev.v(c, m) - s.v(c, m);
    r.dual += dx * dx + dy * dy + inv_r2 * dv * dv;
  }
  return r;
}

inline double mass_row(const CovectorSamples& s, double inv_r2, Eigen::Index c) {
  double acc = 0.0;
  for (Eigen::Index m = 0; m < s.cols(); ++m)
    acc += std::sqrt(s.hx(c, m) * s.hx(c, m) + s.hy(c, m) * s.hy(c, m) + inv_r2 * s.v(c, m) * s.v(c, m));
  return acc;
}

}  // namespace

namespace serial {

void fourier_forward(const Eigen::ArrayXXd& x, const FourierTable& t, Eigen::ArrayXXcd& out) {
  out.resize(x.rows(), t.K + 1);
  forward_rows(x, t, out, 0, x.rows());
}

void fourier_inverse(const Eigen::ArrayXXcd& c, const FourierTable& t, Eigen::ArrayXXd& out) {
  out.resize(c.rows(), t.N);
  inverse_rows(c, t, out, 0, c.rows());
}

void shrink_sigma(const CovectorSamples& target, double mu, double radius, CovectorSamples& out) {
  const double inv_r2 = 1.0 / (radius * radius);
  out = CovectorSamples(target.rows(), target.cols());
  for (Eigen::Index m = 0; m < target.cols(); ++m)
    for (Eigen::Index c = 0; c < target.rows(); ++c)
      shrink_one(target.hx(c, m), target.hy(c, m), target.v(c, m), mu, inv_r2, out.hx(c, m), out.hy(c, m),
                 out.v(c, m));
}

void shrink_gamma(const Eigen::VectorXd& target, const Eigen::VectorXd& threshold,
                  const Eigen::Matrix<char, Eigen::Dynamic, 1>& mask, Eigen::VectorXd& out) {
  out.resize(target.size());
  for (Eigen::Index e = 0; e < target.size(); ++e)
    out[e] = mask[e] ? 0.0 : gamma_shrink(target[e], threshold[e]);
}

Residual2 sigma_dual_update(const CovectorSamples& sigma, const CovectorSamples& reached,
                            const CovectorSamples& prev, const Eigen::VectorXd& row_weight, double radius,
                            CovectorSamples& dual) {
  const double inv_r2 = 1.0 / (radius * radius);
  Residual2 total;
  for (Eigen::Index c = 0; c < sigma.rows(); ++c) {
    const Residual2 r = dual_row(sigma, reached, prev, inv_r2, dual, c);
    total.primal += row_weight[c] * r.primal;
    total.dual += row_weight[c] * r.dual;
  }
  return total;
}

double sigma_mass(const CovectorSamples& sigma, const Eigen::VectorXd& row_weight, double radius) {
  const double inv_r2 = 1.0 / (radius * radius);
  double total = 0.0;
  for (Eigen::Index c = 0; c < sigma.rows(); ++c) total += row_weight[c] * mass_row(sigma, inv_r2, c);
  return total;
}

}  // namespace serial

namespace omp {

// Row blocks as real matrix products against the cos/sin tables.
void fourier_forward(const Eigen::ArrayXXd& x, const FourierTable& t, Eigen::ArrayXXcd& out) {
  out.resize(x.rows(), t.K + 1);
  const Eigen::Index rows = x.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r0 = 0; r0 < rows; r0 += kBlock) {
    const Eigen::Index n = std::min(kBlock, rows - r0);
    const auto xb = x.middleRows(r0, n).matrix();
    out.middleRows(r0, n).real() = (xb * t.forward_re).array();
    out.middleRows(r0, n).imag() = (xb * t.forward_im).array();
  }
}

void fourier_inverse(const Eigen::ArrayXXcd& c, const FourierTable& t, Eigen::ArrayXXd& out) {
  out.resize(c.rows(), t.N);
  const Eigen::Index rows = c.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index r0 = 0; r0 < rows; r0 += kBlock) {
    const Eigen::Index n = std::min(kBlock, rows - r0);
    const Eigen::MatrixXd re = c.middleRows(r0, n).real().matrix();
    const Eigen::MatrixXd im = c.middleRows(r0, n).imag().matrix();
    out.middleRows(r0, n) = (re * t.inverse_re + im * t.inverse_im).array();
  }
}

void shrink_sigma(const CovectorSamples& target, double mu, double radius, CovectorSamples& out) {
  const double inv_r2 = 1.0 / (radius * radius);
  out = CovectorSamples(target.rows(), target.cols());
  const Eigen::Index rows = target.rows(), cols = target.cols();
#pragma omp parallel for collapse(2) schedule(static)
  for (Eigen::Index m = 0; m < cols; ++m)
    for (Eigen::Index c = 0; c < rows; ++c)
      shrink_one(target.hx(c, m), target.hy(c, m), target.v(c, m), mu, inv_r2, out.hx(c, m), out.hy(c, m),
                 out.v(c, m));
}

void shrink_gamma(const Eigen::VectorXd& target, const Eigen::VectorXd& threshold,
                  const Eigen::Matrix<char, Eigen::Dynamic, 1>& mask, Eigen::VectorXd& out) {
  out.resize(target.size());
  const Eigen::Index n = target.size();
#pragma omp parallel for schedule(static)
  for (Eigen::Index e = 0; e < n; ++e) out[e] = mask[e] ? 0.0 : gamma_shrink(target[e], threshold[e]);
}

// Row blocks walked column by column; each row still sums its increments in
// order, so the totals match the serial kernels bit for bit.
Residual2 sigma_dual_update(const CovectorSamples& sigma, const CovectorSamples& reached,
                            const CovectorSamples& prev, const Eigen::VectorXd& row_weight, double radius,
                            CovectorSamples& dual) {
  const double inv_r2 = 1.0 / (radius * radius);
  const Eigen::Index rows = sigma.rows(), cols = sigma.cols();
  Eigen::ArrayXd primal = Eigen::ArrayXd::Zero(rows), dualr = Eigen::ArrayXd::Zero(rows);
#pragma omp parallel for schedule(static)
  for (Eigen::Index r0 = 0; r0 < rows; r0 += kBlock) {
    const Eigen::Index r1 = std::min(rows, r0 + kBlock);
    for (Eigen::Index m = 0; m < cols; ++m) {
      for (Eigen::Index c = r0; c < r1; ++c) {
        const double px = sigma.hx(c, m) - reached.hx(c, m);
        const double py = sigma.hy(c, m) - reached.hy(c, m);
        const double pv = sigma.v(c, m) - reached.v(c, m);
        dual.hx(c, m) += px;
        dual.hy(c, m) += py;
        dual.v(c, m) += pv;
        primal[c] += px * px + py * py + inv_r2 * pv * pv;
        const double dx = prev.hx(c, m) - sigma.hx(c, m);
        const double dy = prev.hy(c, m) - sigma.hy(c, m);
        const double dv = prev.v(c, m) - sigma.v(c, m);
        dualr[c] += dx * dx + dy * dy + inv_r2 * dv * dv;
      }
    }
  }
  Residual2 total;
  for (Eigen::Index c = 0; c < rows; ++c) {
    total.primal += row_weight[c] * primal[c];
    total.dual += row_weight[c] * dualr[c];
  }
  return total;
}

double sigma_mass(const CovectorSamples& sigma, const Eigen::VectorXd& row_weight, double radius) {
  const double inv_r2 = 1.0 / (radius * radius);
  const Eigen::Index rows = sigma.rows(), cols = sigma.cols();
  Eigen::ArrayXd part = Eigen::ArrayXd::Zero(rows);
#pragma omp parallel for schedule(static)
  for (Eigen::Index r0 = 0; r0 < rows; r0 += kBlock) {
    const Eigen::Index r1 = std::min(rows, r0 + kBlock);
    for (Eigen::Index m = 0; m < cols; ++m)
      for (Eigen::Index c = r0; c < r1; ++c)
        part[c] += std::sqrt(sigma.hx(c, m) * sigma.hx(c, m) + sigma.hy(c, m) * sigma.hy(c, m) +
                             inv_r2 * sigma.v(c, m) * sigma.v(c, m));
  }
  double total = 0.0;
  for (Eigen::Index c = 0; c < rows; ++c) total += row_weight[c] * part[c];
  return total;
}

}  // namespace omp

}  // namespace minsec::kernels
