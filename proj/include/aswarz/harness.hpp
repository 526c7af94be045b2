#pragma once

#include <string>
#include <vector>

#include "aswarz/assembly.hpp"
#include "aswarz/solve.hpp"

namespace aswarz {

enum class Problem { LShape, LShapeArtificial, Slit };
enum class Refinement { Uniform, Artificial, Adaptive };

Problem problem_from_string(const std::string& name);
Refinement refinement_from_string(const std::string& name);
std::string to_string(Problem p);

struct ExperimentConfig {
  Problem problem = Problem::Slit;
  Refinement refinement = Refinement::Uniform;
  std::vector<PrecondKind> preconditioners = {PrecondKind::LMLD};
  int levels = 5;
  double tol = 1e-8;
  double dorfler_theta = 0.5;
  int max_dofs = 8000;
  bool spectra = false;
  bool force_spectra = false;  // compute dense spectra above 4000 dofs too
  std::string out_path;

  /// Applies the coupled-field rules (artificial problem forces artificial
  /// refinement) and validates ranges. Throws on invalid settings.
  void normalize();
};

struct ExperimentRow {
  Problem problem;
  PrecondKind precond;
  SolveReport report;
  std::optional<double> energy_error;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  bool stopped_early = false;  // max_dofs reached before the last level
};

/// Energy-norm error sqrt(pi - <b, x>) for the slit problem, from Galerkin
/// orthogonality and the exact energy <f,u> = pi. Throws if <b,x> exceeds
/// pi beyond round-off.
double energy_error_slit(const Eigen::VectorXd& rhs, const Eigen::VectorXd& x);

/// Runs the level loop: assemble, precondition, GMRES, optional spectra,
/// refine. Writes a CSV to cfg.out_path when set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// CSV with header problem,precond,level,n_dofs,h_min,h_max,lambda_min,
/// lambda_max,cond,iterations,converged,energy_error,time_ms.
std::string to_csv(const ExperimentResult& result);

}  // namespace aswarz
