#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "aswarz/precond.hpp"

namespace aswarz {

/// Action of an inverse preconditioner; lets tests substitute doubles.
using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline LinearMap as_map(const Preconditioner& p) {
  return [&p](const Eigen::VectorXd& r) { return apply_inverse(p, r); };
}

struct SolveReport {
  int level = 0;
  int n_dofs = 0;
  double h_min = 0.0, h_max = 0.0;
  std::optional<int> iterations;
  bool converged = true;
  std::vector<double> residual_history;  // relative preconditioned residuals
  std::optional<double> lambda_min, lambda_max, cond;
  double wall_time_ms = 0.0;
};

/// Full (unrestarted) left-preconditioned GMRES, modified Gram-Schmidt with
/// one reorthogonalization pass. Converged when the preconditioned residual
/// drops below tol relative to ||B^{-1} b||.
std::pair<Eigen::VectorXd, SolveReport> gmres(const Eigen::MatrixXd& matrix,
                                              const LinearMap& precond,
                                              const Eigen::VectorXd& rhs,
                                              double tol, int max_iter);

/// Cholesky solve; throws on a non-SPD matrix.
std::pair<Eigen::VectorXd, SolveReport> direct_solve(
    const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs);

/// Extreme eigenvalues of B^{-1} A, computed by the symmetric similarity
/// S A S with S = (B^{-1})^{1/2}. Throws if B^{-1} is numerically
/// indefinite.
std::pair<double, double> spectrum(const Eigen::MatrixXd& matrix,
                                   const LinearMap& precond);

}  // namespace aswarz
