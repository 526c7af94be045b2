#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "aswarz/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hypersingular BEM multilevel preconditioner experiments"};

  std::string problem = "slit";
  std::string refinement = "uniform";
  std::string precond = "lmld,gmld,hb,diag";
  aswarz::ExperimentConfig cfg;

  app.add_option("--problem", problem, "lshape | lshape-artificial | slit")
      ->capture_default_str();
  app.add_option("--refine", refinement, "uniform | artificial | adaptive")
      ->capture_default_str();
  app.add_option("--precond", precond,
                 "comma list of lmld,gmld,hb,diag,none")
      ->capture_default_str();
  app.add_option("--levels", cfg.levels, "maximum refinement level")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "GMRES relative tolerance")
      ->capture_default_str();
  app.add_option("--theta", cfg.dorfler_theta, "Doerfler marking fraction")
      ->capture_default_str();
  app.add_option("--max-dofs", cfg.max_dofs, "stop once dofs exceed this")
      ->capture_default_str();
  app.add_flag("--spectra", cfg.spectra,
               "compute extreme eigenvalues and condition numbers");
  app.add_flag("--force-spectra", cfg.force_spectra,
               "dense spectra even above 4000 dofs");
  app.add_option("--out", cfg.out_path, "CSV output path");

  CLI11_PARSE(app, argc, argv);

  if (const char* threads = std::getenv("ASWARZ_THREADS"))
    Eigen::setNbThreads(std::atoi(threads));

  try {
    cfg.problem = aswarz::problem_from_string(problem);
    cfg.refinement = aswarz::refinement_from_string(refinement);
    cfg.preconditioners.clear();
    std::stringstream ss(precond);
    for (std::string item; std::getline(ss, item, ',');)
      cfg.preconditioners.push_back(aswarz::precond_kind_from_string(item));

    const aswarz::ExperimentResult result = aswarz::run_experiment(cfg);
    if (cfg.out_path.empty()) std::cout << aswarz::to_csv(result);
    return result.stopped_early ? 2 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
