// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any criterion fails.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "aswarz/harness.hpp"

using namespace aswarz;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok,
            const std::string& detail) {
  std::printf("%s  criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct GradedFamily {
  std::vector<double> cond_lmld, cond_gmld, cond_hb, cond_diag, cond_none;
  std::vector<int> iter_lmld, iter_gmld, iter_hb, iter_diag;
};

// Artificial corner grading on the L-shape: condition numbers per level,
// GMRES counts at the finest level only (the load assembly dominates the
// runtime and only the final counts enter a criterion).
GradedFamily run_graded_family(int max_level) {
  GradedFamily fam;
  MeshHierarchy hier = make_hierarchy(make_lshape_geometry(), 1.0);
  const NeumannData data = neumann_data_lshape();
  for (int l = 0; l <= max_level; ++l) {
    const GalerkinSystem sys = assemble_hypersingular(hier.finest(), true);
    Eigen::VectorXd b;
    if (l == max_level) b = assemble_rhs_lshape(hier.finest(), data);
    auto add = [&](PrecondKind kind, std::vector<double>& conds,
                   std::vector<int>* iters) {
      const auto p = build_preconditioner(kind, hier, sys.matrix);
      auto [lmin, lmax] = spectrum(sys.matrix, as_map(p));
      conds.push_back(lmax / lmin);
      if (iters && l == max_level) {
        auto [x, rep] = gmres(sys.matrix, as_map(p), b, 1e-8,
                              4 * hier.finest().num_free());
        iters->push_back(*rep.iterations);
      }
    };
    add(PrecondKind::LMLD, fam.cond_lmld, &fam.iter_lmld);
    add(PrecondKind::GMLD, fam.cond_gmld, &fam.iter_gmld);
    add(PrecondKind::HB, fam.cond_hb, &fam.iter_hb);
    add(PrecondKind::DIAG, fam.cond_diag, &fam.iter_diag);
    add(PrecondKind::NONE, fam.cond_none, nullptr);
    if (l < max_level) refine_artificial_corner(hier);
  }
  return fam;
}

char buf[256];

void criterion_1_lmld_bounded(const GradedFamily& fam) {
  const auto& c = fam.cond_lmld;
  double cmin = 1e300, cmax = 0.0;
  for (double v : c) {
    cmin = std::min(cmin, v);
    cmax = std::max(cmax, v);
  }
  std::vector<double> lvls, tail;
  for (size_t l = c.size() - 10; l < c.size(); ++l) {
    lvls.push_back(static_cast<double>(l));
    tail.push_back(c[l]);
  }
  const double slope = loglog_slope(lvls, tail);
  const bool ok = cmax / cmin <= 3.0 && std::abs(slope) < 0.1;
  std::snprintf(buf, sizeof(buf),
                "cond range [%.3f, %.3f], ratio %.3f <= 3, tail slope %.4f",
                cmin, cmax, cmax / cmin, slope);
  report(1, "LMLD condition number L-independent", ok, buf);
}

void criterion_2_gmld_linear(const GradedFamily& fam) {
  const auto& c = fam.cond_gmld;
  double rmin = 1e300, rmax = 0.0;
  for (size_t l = 10; l < c.size(); ++l) {
    const double r = c[l] / static_cast<double>(l + 1);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  bool monotone = true;
  for (size_t l = 6; l < c.size(); ++l)
    if (c[l] < c[l - 1] * (1.0 - 1e-9)) monotone = false;
  const bool ok = rmax / rmin <= 4.0 && monotone;
  std::snprintf(buf, sizeof(buf),
                "cond/(L+1) in [%.3f, %.3f] (band %.2f <= 4), monotone from "
                "L=5: %s",
                rmin, rmax, rmax / rmin, monotone ? "yes" : "no");
  report(2, "GMLD linear growth, sharp", ok, buf);
}

void criterion_3_hb_quadratic(const GradedFamily& fam) {
  // Quadratic-type growth, measured against the dof count (affine in the
  // level for this family, and the abscissa of the reference data).
  std::vector<double> dofs, conds;
  for (size_t l = 10; l < fam.cond_hb.size(); ++l) {
    dofs.push_back(8.0 + 2.0 * static_cast<double>(l));
    conds.push_back(fam.cond_hb[l]);
  }
  const double expo = loglog_slope(dofs, conds);
  const bool ok = expo >= 1.5 && expo <= 2.5;
  std::snprintf(buf, sizeof(buf), "cond(HB) ~ N^%.3f, expected in [1.5, 2.5]",
                expo);
  report(3, "HB quadratic-type growth", ok, buf);
}

void criterion_4_unpreconditioned() {
  MeshHierarchy hier = make_hierarchy(make_slit_geometry(), 1.0);
  refine_uniform(hier);  // start at N = 3 so the log-log fit is meaningful
  std::vector<double> n, cond;
  for (int l = 0; l < 6; ++l) {
    const GalerkinSystem sys = assemble_hypersingular(hier.finest(), false);
    auto [lmin, lmax] =
        spectrum(sys.matrix, [](const Eigen::VectorXd& r) { return r; });
    n.push_back(hier.finest().num_free());
    cond.push_back(lmax / lmin);
    refine_uniform(hier);
  }
  const double expo = loglog_slope(n, cond);
  const bool ok = expo >= 0.9;
  std::snprintf(buf, sizeof(buf), "cond(A) ~ N^%.3f on 6 uniform slit levels",
                expo);
  report(4, "unpreconditioned superlinear growth", ok, buf);
}

void criterion_5_slit_rates() {
  auto slope_of = [](Refinement refinement, int levels) {
    ExperimentConfig cfg;
    cfg.problem = Problem::Slit;
    cfg.refinement = refinement;
    cfg.levels = levels;
    cfg.preconditioners = {PrecondKind::LMLD};
    const ExperimentResult result = run_experiment(cfg);
    std::vector<double> n, err;
    for (const auto& row : result.rows) {
      n.push_back(row.report.n_dofs);
      err.push_back(*row.energy_error);
    }
    const std::vector<double> n4(n.end() - 4, n.end());
    const std::vector<double> e4(err.end() - 4, err.end());
    return loglog_slope(n4, e4);
  };
  const double uni = slope_of(Refinement::Uniform, 7);
  const double ada = slope_of(Refinement::Adaptive, 26);
  const bool ok = uni > -0.65 && uni < -0.4 && ada > -1.7 && ada < -1.2;
  std::snprintf(buf, sizeof(buf),
                "uniform slope %.3f (expect [-0.65,-0.4]), adaptive slope "
                "%.3f (expect [-1.7,-1.2])",
                uni, ada);
  report(5, "slit energy-error rates", ok, buf);
}

void criterion_6_as_identity() {
  // Projection-sum path vs matrix path on every corpus hierarchy with at
  // most 200 fine dofs.
  double worst = 0.0;
  auto check = [&](const MeshHierarchy& hier, bool stabilize) {
    if (hier.finest().num_free() > 200) return;
    const GalerkinSystem fine_sys =
        assemble_hypersingular(hier.finest(), stabilize);
    const Eigen::MatrixXd& a = fine_sys.matrix;
    const int n = static_cast<int>(a.rows());
    const auto lmld = build_preconditioner(PrecondKind::LMLD, hier, a);
    Eigen::MatrixXd binv = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : lmld.entries)
      for (const auto& [i, ci] : e.column)
        for (const auto& [j, cj] : e.column) binv(i, j) += e.inv_diag * ci * cj;
    const Eigen::MatrixXd matrix_path = binv * a;

    Eigen::MatrixXd op_path = Eigen::MatrixXd::Zero(n, n);
    const auto prolongations = build_prolongations(hier);
    for (int l = 0; l <= hier.max_level(); ++l) {
      const GalerkinSystem level_sys =
          assemble_hypersingular(hier.levels[l], stabilize);
      for (int z : hier.ntilde(l)) {
        const int zi = hier.levels[l].free_index(z);
        Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
        for (const auto& [i, v] : prolongations[l].columns[zi]) c[i] = v;
        op_path += c * (c.transpose() * a) / level_sys.matrix(zi, zi);
      }
    }
    worst = std::max(worst, (op_path - matrix_path).cwiseAbs().maxCoeff() /
                                matrix_path.cwiseAbs().maxCoeff());
  };

  {
    MeshHierarchy hier = make_hierarchy(make_slit_geometry(), 1.0);
    for (int l = 0; l < 5; ++l) {
      refine_uniform(hier);
      check(hier, false);
    }
  }
  {
    MeshHierarchy hier = make_hierarchy(make_lshape_geometry(), 1.0);
    for (int l = 0; l < 6; ++l) {
      refine_artificial_corner(hier);
      check(hier, true);
    }
  }
  {
    std::mt19937 rng(2026);
    MeshHierarchy hier = make_hierarchy(make_slit_geometry(), 0.5);
    for (int l = 0; l < 5; ++l) {
      std::set<int> marked;
      std::uniform_int_distribution<int> pick(0,
                                              hier.finest().num_elements() - 1);
      for (int i = 0; i < 3; ++i) marked.insert(pick(rng));
      refine_hierarchy(hier, marked);
      check(hier, false);
    }
  }
  const bool ok = worst < 1e-10;
  std::snprintf(buf, sizeof(buf), "max relative deviation %.3e < 1e-10", worst);
  report(6, "additive Schwarz operator/matrix identity", ok, buf);
}

void criterion_7_assembly_oracle() {
  const double unit = single_layer_segment_pair({0, 0}, {1, 0}, {0, 0}, {1, 0});
  const double unit_err = std::abs(unit - 3.0 / (4.0 * std::numbers::pi));

  double worst = 0.0;
  auto check = [&](const BoundaryMesh& mesh, bool stabilize) {
    const GalerkinSystem sys = assemble_hypersingular(mesh, stabilize);
    const double scale = sys.matrix.cwiseAbs().maxCoeff();
    for (int j = 0; j < mesh.num_free(); ++j)
      for (int k = j; k < mesh.num_free(); ++k)
        worst = std::max(
            worst, std::abs(sys.matrix(j, k) -
                            quadrature_oracle_entry(mesh, j, k, stabilize)) /
                       scale);
  };
  {
    MeshHierarchy hier = make_hierarchy(make_slit_geometry(), 1.0);
    for (int l = 0; l < 5; ++l) {
      check(hier.finest(), false);  // up to 32 elements
      refine_uniform(hier);
    }
    check(hier.finest(), false);  // 64 elements
  }
  {
    MeshHierarchy hier = make_hierarchy(make_lshape_geometry(), 1.0);
    check(hier.finest(), true);
    refine_uniform(hier);
    check(hier.finest(), true);  // 16 elements
    refine_artificial_corner(hier);
    refine_artificial_corner(hier);
    check(hier.finest(), true);  // graded, 20 elements
  }
  const bool ok = worst < 1e-8 && unit_err < 1e-10;
  std::snprintf(buf, sizeof(buf),
                "unit-segment integral error %.2e < 1e-10, max matrix "
                "deviation %.2e < 1e-8",
                unit_err, worst);
  report(7, "assembly oracle equivalence", ok, buf);
}

void criterion_8_structural() {
  std::string detail;
  bool ok = true;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what + " FAILED";
    }
  };

  // Symmetry + kernel/SPD dichotomy.
  {
    const BoundaryMesh mesh = make_initial_mesh(make_lshape_geometry(), 1.0);
    const GalerkinSystem plain = assemble_hypersingular(mesh, false);
    const GalerkinSystem stab = assemble_hypersingular(mesh, true);
    const double scale = plain.matrix.cwiseAbs().maxCoeff();
    expect((plain.matrix - plain.matrix.transpose()).cwiseAbs().maxCoeff() /
               scale <
           1e-12, "matrix symmetry");
    expect((plain.matrix * Eigen::VectorXd::Ones(plain.matrix.cols()))
                   .cwiseAbs()
                   .maxCoeff() /
               scale <
           1e-10, "A*1 = 0 unstabilized");
    expect(Eigen::LLT<Eigen::MatrixXd>(stab.matrix).info() == Eigen::Success,
           "SPD after stabilization");
  }

  // Prolongation composition exactness.
  {
    MeshHierarchy hier = make_hierarchy(make_slit_geometry(), 1.0);
    for (int l = 0; l < 3; ++l) refine_uniform(hier);
    const auto pr = build_prolongations(hier);
    MeshHierarchy truncated;
    truncated.levels.assign(hier.levels.begin(), hier.levels.begin() + 3);
    truncated.records.assign(hier.records.begin(), hier.records.begin() + 2);
    const auto pr_mid = build_prolongations(truncated);
    const int nf = hier.finest().num_free();
    double dev = 0.0;
    for (int ci = 0; ci < static_cast<int>(pr_mid[0].columns.size()); ++ci) {
      Eigen::VectorXd composed = Eigen::VectorXd::Zero(nf);
      for (const auto& [j, vj] : pr_mid[0].columns[ci])
        for (const auto& [i, vi] : pr[2].columns[j]) composed[i] += vj * vi;
      Eigen::VectorXd direct = Eigen::VectorXd::Zero(nf);
      for (const auto& [i, v] : pr[0].columns[ci]) direct[i] = v;
      dev = std::max(dev, (composed - direct).cwiseAbs().maxCoeff());
    }
    expect(dev == 0.0, "prolongation composition");
  }

  // Ntilde brute-force patch oracle on 100 random refinement sequences.
  {
    std::mt19937 rng(99);
    bool agree = true;
    for (int trial = 0; trial < 100; ++trial) {
      MeshHierarchy hier = make_hierarchy(
          trial % 2 ? make_lshape_geometry() : make_slit_geometry(), 1.0);
      for (int s = 0; s < 3; ++s) {
        const BoundaryMesh& mesh = hier.finest();
        std::set<int> marked;
        std::uniform_int_distribution<int> pick(0, mesh.num_elements() - 1);
        for (int i = 0; i < 2; ++i) marked.insert(pick(rng));
        refine_hierarchy(hier, marked);
        const BoundaryMesh& coarse = hier.levels[hier.max_level() - 1];
        const BoundaryMesh& fine = hier.finest();
        auto patch_len = [](const BoundaryMesh& m, int z) {
          double len = 0.0;
          for (int e = 0; e < m.num_elements(); ++e)
            if (m.elements[e].first == z || m.elements[e].second == z)
              len += m.element_diam[e];
          return len;
        };
        std::vector<int> oracle;
        for (int z : fine.free_nodes)
          if (z >= coarse.num_nodes() ||
              patch_len(fine, z) < patch_len(coarse, z) - 1e-12)
            oracle.push_back(z);
        if (oracle != hier.ntilde(hier.max_level())) agree = false;
      }
    }
    expect(agree, "Ntilde patch oracle");
  }

  // A-self-adjointness of every preconditioned operator.
  {
    MeshHierarchy hier = make_hierarchy(make_lshape_geometry(), 1.0);
    for (int l = 0; l < 4; ++l) refine_artificial_corner(hier);
    const GalerkinSystem sys = assemble_hypersingular(hier.finest(), true);
    const int n = static_cast<int>(sys.matrix.rows());
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (auto kind : {PrecondKind::LMLD, PrecondKind::GMLD, PrecondKind::HB,
                      PrecondKind::DIAG, PrecondKind::NONE}) {
      const auto p = build_preconditioner(kind, hier, sys.matrix);
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd x(n), y(n);
        for (int i = 0; i < n; ++i) {
          x[i] = gauss(rng);
          y[i] = gauss(rng);
        }
        const Eigen::VectorXd px =
            apply_preconditioned_operator(p, sys.matrix, x);
        const Eigen::VectorXd py =
            apply_preconditioned_operator(p, sys.matrix, y);
        worst = std::max(
            worst, std::abs((sys.matrix * px).dot(y) - (sys.matrix * x).dot(py)) /
                       (sys.matrix.norm() * x.norm() * y.norm()));
      }
    }
    expect(worst < 1e-10, "A-self-adjointness");
  }

  report(8, "structural invariants suite", ok,
         ok ? "symmetry, kernel/SPD, prolongation, Ntilde oracle, "
              "A-self-adjointness all hold"
            : detail);
}

void criterion_9_gmres_ordering(const GradedFamily& fam) {
  const size_t last = fam.iter_lmld.size() - 1;
  const int lmld = fam.iter_lmld[last], gmld = fam.iter_gmld[last],
            hb = fam.iter_hb[last], diag = fam.iter_diag[last];

  // Slit experiment at its finest common level.
  MeshHierarchy hier = make_hierarchy(make_slit_geometry(), 1.0);
  for (int l = 0; l < 6; ++l) refine_uniform(hier);
  const GalerkinSystem sys = assemble_hypersingular(hier.finest(), false);
  const Eigen::VectorXd b = assemble_rhs_slit(hier.finest());
  auto iters = [&](PrecondKind kind) {
    const auto p = build_preconditioner(kind, hier, sys.matrix);
    auto [x, rep] =
        gmres(sys.matrix, as_map(p), b, 1e-8, 4 * hier.finest().num_free());
    return *rep.iterations;
  };
  const int s_lmld = iters(PrecondKind::LMLD), s_gmld = iters(PrecondKind::GMLD),
            s_hb = iters(PrecondKind::HB), s_diag = iters(PrecondKind::DIAG);

  const bool ok = lmld <= gmld && gmld <= hb && lmld <= diag &&
                  s_lmld <= s_gmld && s_gmld <= s_hb && s_lmld <= s_diag;
  std::snprintf(buf, sizeof(buf),
                "graded: lmld %d <= gmld %d <= hb %d, lmld <= diag %d; slit: "
                "lmld %d <= gmld %d <= hb %d, lmld <= diag %d",
                lmld, gmld, hb, diag, s_lmld, s_gmld, s_hb, s_diag);
  report(9, "GMRES iteration ordering", ok, buf);
}

}  // namespace

int main() {
  const GradedFamily fam = run_graded_family(25);
  criterion_1_lmld_bounded(fam);
  criterion_2_gmld_linear(fam);
  criterion_3_hb_quadratic(fam);
  criterion_4_unpreconditioned();
  criterion_5_slit_rates();
  criterion_6_as_identity();
  criterion_7_assembly_oracle();
  criterion_8_structural();
  criterion_9_gmres_ordering(fam);
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
