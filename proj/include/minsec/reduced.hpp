#pragma once

#include "minsec/operators.hpp"

#include <vector>

namespace minsec {

/// Sparse inverse Poisson problem on interior CR edges:
///   min phi^T L-hat phi + lambda_eff sum_e M-hat_e |Gamma_e|
///   s.t. L-hat phi = M-hat (Gamma - kappa-bar), phi = 0 on the boundary.
struct ReducedConfig {
  double lambda_eff = 1.0;
  double nu = 1.0;
  double epsilon = 1e-8;
  int max_iters = 20000;
  bool adaptive = true;
};

struct ReducedSolution {
  Eigen::VectorXd phi;
  Eigen::VectorXd gamma;
  double objective = 0;
  /// max_e |M-hat^{-1} L-hat phi - (Gamma - kappa-bar)|
  double feasibility = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> primal_history, dual_history;
};

ReducedSolution solve_reduced(const CrouzeixRaviart& cr, const Eigen::VectorXd& kappa_bar, const ReducedConfig& config);
/// Builds the CR operators of `mesh` and solves with kappa-bar at the given degree.
ReducedSolution solve_reduced(const TriMesh& mesh, int degree, const ReducedConfig& config);

}  // namespace minsec
