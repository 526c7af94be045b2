#include "aswarz/solve.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace aswarz {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::pair<Eigen::VectorXd, SolveReport> gmres(const Eigen::MatrixXd& matrix,
                                              const LinearMap& precond,
                                              const Eigen::VectorXd& rhs,
                                              double tol, int max_iter) {
  const auto n = matrix.rows();
  if (matrix.cols() != n || rhs.size() != n)
    throw std::invalid_argument("gmres: dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("gmres: tol must be positive");
  const auto t0 = Clock::now();

  SolveReport report;
  report.n_dofs = static_cast<int>(n);

  const Eigen::VectorXd pb = precond(rhs);
  const double beta0 = pb.norm();
  if (beta0 == 0.0) {
    report.iterations = 0;
    report.wall_time_ms = elapsed_ms(t0);
    return {Eigen::VectorXd::Zero(n), report};
  }

  Eigen::MatrixXd basis(n, max_iter + 1);
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(max_iter + 1, max_iter);
  Eigen::VectorXd cs(max_iter), sn(max_iter);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(max_iter + 1);

  basis.col(0) = pb / beta0;
  g[0] = beta0;
  report.residual_history.push_back(1.0);

  int k = 0;
  bool converged = false;
  for (; k < max_iter; ++k) {
    Eigen::VectorXd w = precond(matrix * basis.col(k));
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= k; ++i) {
        const double hik = basis.col(i).dot(w);
        w -= hik * basis.col(i);
        hess(i, k) += hik;
      }
    }
    const double hnext = w.norm();
    hess(k + 1, k) = hnext;

    // Givens update of the Hessenberg column.
    for (int i = 0; i < k; ++i) {
      const double tmp = cs[i] * hess(i, k) + sn[i] * hess(i + 1, k);
      hess(i + 1, k) = -sn[i] * hess(i, k) + cs[i] * hess(i + 1, k);
      hess(i, k) = tmp;
    }
    const double denom = std::hypot(hess(k, k), hess(k + 1, k));
    cs[k] = hess(k, k) / denom;
    sn[k] = hess(k + 1, k) / denom;
    hess(k, k) = denom;
    hess(k + 1, k) = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];

    const double rel = std::abs(g[k + 1]) / beta0;
    report.residual_history.push_back(rel);
    if (rel <= tol) {
      converged = true;
      ++k;
      break;
    }
    if (hnext == 0.0) {  // lucky breakdown: Krylov space exhausted
      converged = rel <= tol;
      ++k;
      break;
    }
    basis.col(k + 1) = w / hnext;
  }

  // Back substitution on the triangularized Hessenberg.
  Eigen::VectorXd y(k);
  for (int i = k - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < k; ++j) s -= hess(i, j) * y[j];
    y[i] = s / hess(i, i);
  }
  Eigen::VectorXd x = basis.leftCols(k) * y;

  report.iterations = k;
  report.converged = converged;
  report.wall_time_ms = elapsed_ms(t0);
  return {std::move(x), report};
}

std::pair<Eigen::VectorXd, SolveReport> direct_solve(
    const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs) {
  const auto t0 = Clock::now();
  Eigen::LLT<Eigen::MatrixXd> llt(matrix);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("direct_solve: matrix is not SPD");
  SolveReport report;
  report.n_dofs = static_cast<int>(matrix.rows());
  Eigen::VectorXd x = llt.solve(rhs);
  report.wall_time_ms = elapsed_ms(t0);
  return {std::move(x), report};
}

std::pair<double, double> spectrum(const Eigen::MatrixXd& matrix,
                                   const LinearMap& precond) {
  const auto n = matrix.rows();
  Eigen::MatrixXd binv(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    binv.col(j) = precond(Eigen::VectorXd::Unit(n, j));
  binv = 0.5 * (binv + binv.transpose().eval());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig_b(binv);
  if (eig_b.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigendecomposition failed");
  const Eigen::VectorXd& mu = eig_b.eigenvalues();
  if (mu.minCoeff() <= 0.0)
    throw std::runtime_error("spectrum: preconditioner numerically indefinite");
  const Eigen::MatrixXd sqrt_binv = eig_b.eigenvectors() *
                                    mu.cwiseSqrt().asDiagonal() *
                                    eig_b.eigenvectors().transpose();

  Eigen::MatrixXd sym = sqrt_binv * matrix * sqrt_binv;
  sym = 0.5 * (sym + sym.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigendecomposition failed");
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

}  // namespace aswarz
