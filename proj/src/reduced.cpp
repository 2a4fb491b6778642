#include "minsec/reduced.hpp"

#include "minsec/bundle.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>

namespace minsec {

ReducedSolution solve_reduced(const CrouzeixRaviart& cr, const Eigen::VectorXd& kappa_bar,
                              const ReducedConfig& config) {
  if (!(config.lambda_eff >= 0)) throw std::invalid_argument("lambda_eff must be nonnegative");
  if (!(config.nu > 0)) throw std::invalid_argument("nu must be positive");
  if (!(config.epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  const Eigen::Index ne = kappa_bar.size();
  if (ne != cr.mass.size()) throw std::invalid_argument("kappa-bar size does not match the CR operators");
  const Eigen::VectorXd& m = cr.mass;
  const SpMat Mhat = SpMat(m.asDiagonal());

  ReducedSolution out;
  out.phi = Eigen::VectorXd::Zero(ne);
  out.gamma = kappa_bar;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(ne);
  double nu = config.nu;
  Eigen::SimplicialLDLT<SpMat> solver;
  double factored = -1;
  auto wnorm = [&](const Eigen::VectorXd& x) { return std::sqrt(x.dot(m.asDiagonal() * x)); };

  for (int it = 0; it < config.max_iters; ++it) {
    if (nu != factored) {
      solver.compute(SpMat(2.0 * Mhat + nu * cr.L));
      if (solver.info() != Eigen::Success) throw std::runtime_error("reduced: factorization failed");
      factored = nu;
    }
    const Eigen::VectorXd g = out.gamma - kappa_bar + z;
    out.phi = solver.solve(nu * m.cwiseProduct(g));
    const Eigen::VectorXd target = kappa_bar + (cr.L * out.phi).cwiseQuotient(m);
    const Eigen::VectorXd hat = target - z;
    const Eigen::VectorXd prev = out.gamma;
    const double thr = config.lambda_eff / nu;
    for (Eigen::Index e = 0; e < ne; ++e) {
      const double a = std::abs(hat[e]);
      out.gamma[e] = a > thr ? (1 - thr / a) * hat[e] : 0.0;
    }
    z += out.gamma - target;
    const double rp = wnorm(out.gamma - target);
    const double rd = wnorm(prev - out.gamma);
    out.primal_history.push_back(rp);
    out.dual_history.push_back(rd);
    out.iterations = it + 1;
    if (rp < config.epsilon && rd < config.epsilon) {
      out.converged = true;
      break;
    }
    if (config.adaptive) {
      if (rp > 10 * rd) {
        nu *= 2;
        z /= 2;
      } else if (rd > 10 * rp) {
        nu /= 2;
        z *= 2;
      }
    }
  }
  const Eigen::VectorXd lphi = (cr.L * out.phi).cwiseQuotient(m);
  out.feasibility = ne > 0 ? (lphi - (out.gamma - kappa_bar)).cwiseAbs().maxCoeff() : 0.0;
  out.objective = out.phi.dot(cr.L * out.phi) + config.lambda_eff * m.dot(out.gamma.cwiseAbs());
  return out;
}

ReducedSolution solve_reduced(const TriMesh& mesh, int degree, const ReducedConfig& config) {
  const TransportAtlas atlas = build_transport(mesh);
  const LinearFem fem = assemble_linear_fem(mesh, atlas);
  const CrouzeixRaviart cr = assemble_cr(mesh, atlas, fem);
  return solve_reduced(cr, make_kappa_bar(mesh, atlas, degree), config);
}

}  // namespace minsec
