#pragma once

#include "minsec/transport.hpp"

#include <Eigen/Core>

#include <map>
#include <string>
#include <vector>

namespace minsec {

/// Uniform sampling of the fiber: N increments at theta_m = 2 pi m / N and
/// vertical frequencies 0..K with K = N/2 - 1 (negative ones by conjugation).
struct FiberDiscretization {
  int N = 64;
  int K = 31;
  double radius = 1.0;

  double theta(int m) const;
  double length() const;  // 2 pi r
};

/// Throws std::invalid_argument unless N is even and >= 8 and r > 0.
FiberDiscretization make_fiber(int N, double radius);

/// Fiber samples for many entities at once: rows are entities, columns increments.
using FiberSamples = Eigen::ArrayXXd;
/// Coefficients c_0..c_K per entity (rows); c_{-k} = conj(c_k) is implied.
using FiberCoefficients = Eigen::ArrayXXcd;

/// c_k = (1/N) sum_m x_m e^{-i k theta_m} for k = 0..K.
FiberCoefficients fourier_forward(const FiberSamples& samples, int K);
/// x_m = c_0 + 2 Re sum_{k>=1} c_k e^{i k theta_m}.
FiberSamples fourier_inverse(const FiberCoefficients& coeffs, int N);

/// Coefficients for k = -K..K of one complex sequence, indexed k + K.
Eigen::VectorXcd fourier_forward(const Eigen::VectorXcd& sequence, int K);
/// Inverse of the above on an N-point grid.
Eigen::VectorXcd fourier_inverse(const Eigen::VectorXcd& coeffs, int N);

/// Fejer approximation of a Dirac delta at gamma0 (normalized so its value at
/// gamma0 is K and its mean over the circle is 1).
double fejer_delta(double gamma0, int K, double theta);

/// The vertical form: horizontal part (0, 0), vertical part 1 / (2 pi).
struct Covector {
  Eigen::Vector2d h = Eigen::Vector2d::Zero();
  double v = 0.0;
};
Covector make_tau_bar(const FiberDiscretization& fd);

/// d kappa_e / (2 pi) on interior edges (compact numbering).
Eigen::VectorXd make_kappa_bar(const TriMesh& mesh, const TransportAtlas& atlas, int degree);

/// Source of boundary angles: tangent alignment, or explicit field angles per
/// boundary vertex (radians in the vertex frame, multiplied by d internally).
struct BoundarySpec {
  bool tangent = true;
  std::map<int, double> angles;

  static BoundarySpec Tangent() { return {}; }
  static BoundarySpec Explicit(std::map<int, double> a) { return {false, std::move(a)}; }
};

/// Reads "vertex_index angle_radians" lines ('#' starts a comment).
BoundarySpec read_boundary_angles(const std::string& path);

struct BoundaryData {
  int degree = 1;
  int K = 0;
  /// Degree-d boundary angle per mesh vertex (0 at interior vertices).
  std::vector<double> gamma;
  /// Boundary vertices in ascending order.
  std::vector<int> vertices;
  /// values(i, k) = f^{(k)} at vertices[i] for k = 1..K; column 0 unused (0).
  Eigen::MatrixXcd values;
};

/// f^{(k)} = (1/2 pi) (1 - |k|/K) e^{-i k gamma0} / (i k): the coefficients of
/// the sawtooth whose derivative is the Fejer delta scaled to unit fiber mass.
cdouble boundary_coefficient(double gamma0, int k, int K);

BoundaryData make_boundary_data(const TriMesh& mesh, const TransportAtlas& atlas, const BoundarySpec& spec,
                                int degree, int K);

}  // namespace minsec
