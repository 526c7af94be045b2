#include "aswarz/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace aswarz {

Problem problem_from_string(const std::string& name) {
  if (name == "lshape") return Problem::LShape;
  if (name == "lshape-artificial") return Problem::LShapeArtificial;
  if (name == "slit") return Problem::Slit;
  throw std::invalid_argument("unknown problem: " + name);
}

Refinement refinement_from_string(const std::string& name) {
  if (name == "uniform") return Refinement::Uniform;
  if (name == "artificial") return Refinement::Artificial;
  if (name == "adaptive") return Refinement::Adaptive;
  throw std::invalid_argument("unknown refinement: " + name);
}

std::string to_string(Problem p) {
  switch (p) {
    case Problem::LShape: return "lshape";
    case Problem::LShapeArtificial: return "lshape-artificial";
    case Problem::Slit: return "slit";
  }
  return "?";
}

void ExperimentConfig::normalize() {
  if (problem == Problem::LShapeArtificial) refinement = Refinement::Artificial;
  if (levels < 0) throw std::invalid_argument("levels must be >= 0");
  if (!(tol > 0.0 && tol < 1.0))
    throw std::invalid_argument("tol must lie in (0,1)");
  if (!(dorfler_theta > 0.0 && dorfler_theta <= 1.0))
    throw std::invalid_argument("theta must lie in (0,1]");
  if (preconditioners.empty())
    throw std::invalid_argument("no preconditioners requested");
}

double energy_error_slit(const Eigen::VectorXd& rhs,
                         const Eigen::VectorXd& x) {
  const double energy = rhs.dot(x);
  if (energy > std::numbers::pi + 1e-8)
    throw std::runtime_error("Galerkin energy exceeds pi: assembly broken");
  return std::sqrt(std::max(0.0, std::numbers::pi - energy));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.normalize();

  const bool slit = cfg.problem == Problem::Slit;
  static const BoundaryGeometry lshape_geo = make_lshape_geometry();
  static const BoundaryGeometry slit_geo = make_slit_geometry();
  MeshHierarchy hier =
      make_hierarchy(slit ? slit_geo : lshape_geo, 1.0);
  const NeumannData neumann = slit ? NeumannData{} : neumann_data_lshape();

  ExperimentResult result;
  for (int level = 0; level <= cfg.levels; ++level) {
    const BoundaryMesh& mesh = hier.finest();
    if (mesh.num_free() > cfg.max_dofs) {
      result.stopped_early = true;
      break;
    }

    GalerkinSystem sys = assemble_hypersingular(mesh, /*stabilize=*/!slit);
    sys.rhs = slit ? assemble_rhs_slit(mesh)
                   : assemble_rhs_lshape(mesh, neumann);

    Eigen::VectorXd reference_solution;
    for (PrecondKind kind : cfg.preconditioners) {
      Preconditioner p = build_preconditioner(kind, hier, sys.matrix);
      auto [x, report] = gmres(sys.matrix, as_map(p), sys.rhs, cfg.tol,
                               4 * mesh.num_free());
      report.level = level;
      report.h_min = mesh.h_min();
      report.h_max = mesh.h_max();
      if (cfg.spectra &&
          (mesh.num_free() <= 4000 || cfg.force_spectra)) {
        auto [lmin, lmax] = spectrum(sys.matrix, as_map(p));
        report.lambda_min = lmin;
        report.lambda_max = lmax;
        report.cond = lmax / lmin;
      }
      ExperimentRow row{cfg.problem, kind, std::move(report), std::nullopt};
      if (slit) row.energy_error = energy_error_slit(sys.rhs, x);
      if (reference_solution.size() == 0) reference_solution = x;
      result.rows.push_back(std::move(row));
    }

    if (level == cfg.levels) break;
    switch (cfg.refinement) {
      case Refinement::Uniform:
        refine_uniform(hier);
        break;
      case Refinement::Artificial:
        refine_artificial_corner(hier);
        break;
      case Refinement::Adaptive: {
        auto [x, rep] = direct_solve(sys.matrix, sys.rhs);
        std::set<int> marked = estimate_and_mark(mesh, x, cfg.dorfler_theta);
        if (marked.empty()) {
          result.stopped_early = true;
          level = cfg.levels;  // nothing left to refine
          break;
        }
        refine_hierarchy(hier, marked);
        break;
      }
    }
  }

  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot open " + cfg.out_path);
    out << to_csv(result);
  }
  return result;
}

std::string to_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << "problem,precond,level,n_dofs,h_min,h_max,lambda_min,lambda_max,"
        "cond,iterations,converged,energy_error,time_ms\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& row : result.rows) {
    const SolveReport& r = row.report;
    os << to_string(row.problem) << ',' << to_string(row.precond) << ','
       << r.level << ',' << r.n_dofs << ',' << num(r.h_min) << ','
       << num(r.h_max) << ',';
    os << (r.lambda_min ? num(*r.lambda_min) : "") << ','
       << (r.lambda_max ? num(*r.lambda_max) : "") << ','
       << (r.cond ? num(*r.cond) : "") << ','
       << (r.iterations ? std::to_string(*r.iterations) : "") << ','
       << (r.converged ? "1" : "0") << ','
       << (row.energy_error ? num(*row.energy_error) : "") << ','
       << num(r.wall_time_ms) << '\n';
  }
  return os.str();
}

}  // namespace aswarz
