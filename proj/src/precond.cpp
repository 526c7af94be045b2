#include "aswarz/precond.hpp"

#include <algorithm>
#include <stdexcept>

namespace aswarz {

PrecondKind precond_kind_from_string(const std::string& name) {
  if (name == "lmld") return PrecondKind::LMLD;
  if (name == "gmld") return PrecondKind::GMLD;
  if (name == "hb") return PrecondKind::HB;
  if (name == "diag") return PrecondKind::DIAG;
  if (name == "none") return PrecondKind::NONE;
  throw std::invalid_argument("unknown preconditioner: " + name);
}

std::string to_string(PrecondKind kind) {
  switch (kind) {
    case PrecondKind::LMLD: return "lmld";
    case PrecondKind::GMLD: return "gmld";
    case PrecondKind::HB: return "hb";
    case PrecondKind::DIAG: return "diag";
    case PrecondKind::NONE: return "none";
  }
  return "?";
}

namespace {

// Hat of global node z at level `level`, as fine free-node coefficients.
ScatterColumn hat_column(const MeshHierarchy& hier, int level, int z) {
  const BoundaryMesh& fine = hier.finest();
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(fine.num_nodes());
  coef[z] = 1.0;
  for (int m = level; m < hier.max_level(); ++m) {
    for (const auto& nn : hier.records[m].new_nodes)
      coef[nn.node] = 0.5 * (coef[nn.parent_a] + coef[nn.parent_b]);
  }
  ScatterColumn col;
  for (int i = 0; i < fine.num_free(); ++i) {
    const double v = coef[fine.free_nodes[i]];
    if (v != 0.0) col.emplace_back(i, v);
  }
  return col;
}

std::vector<int> active_nodes(PrecondKind kind, const MeshHierarchy& hier,
                              int level) {
  switch (kind) {
    case PrecondKind::LMLD:
      return hier.ntilde(level);
    case PrecondKind::GMLD:
      return hier.levels[level].free_nodes;
    case PrecondKind::HB: {
      if (level == 0) return hier.levels[0].free_nodes;
      std::vector<int> nodes;
      for (const auto& nn : hier.records[level - 1].new_nodes)
        if (hier.levels[level].is_free(nn.node)) nodes.push_back(nn.node);
      std::sort(nodes.begin(), nodes.end());
      return nodes;
    }
    case PrecondKind::DIAG:
      return level == hier.max_level() ? hier.finest().free_nodes
                                       : std::vector<int>{};
    case PrecondKind::NONE:
      return {};
  }
  return {};
}

}  // namespace

std::vector<Prolongation> build_prolongations(const MeshHierarchy& hier) {
  std::vector<Prolongation> result;
  for (int l = 0; l <= hier.max_level(); ++l) {
    Prolongation p;
    p.from_level = l;
    p.to_level = hier.max_level();
    for (int z : hier.levels[l].free_nodes)
      p.columns.push_back(hat_column(hier, l, z));
    result.push_back(std::move(p));
  }
  return result;
}

Preconditioner build_preconditioner(PrecondKind kind, const MeshHierarchy& hier,
                                    const Eigen::MatrixXd& fine_matrix) {
  const int n = hier.finest().num_free();
  if (fine_matrix.rows() != n || fine_matrix.cols() != n)
    throw std::invalid_argument("fine matrix size does not match hierarchy");
  Preconditioner p;
  p.kind = kind;
  p.n_fine = n;
  if (kind == PrecondKind::NONE) return p;
  for (int l = 0; l <= hier.max_level(); ++l) {
    for (int z : active_nodes(kind, hier, l)) {
      Preconditioner::Entry entry;
      entry.level = l;
      entry.node = z;
      entry.column = hat_column(hier, l, z);
      double d = 0.0;
      for (const auto& [i, ci] : entry.column)
        for (const auto& [j, cj] : entry.column)
          d += ci * fine_matrix(i, j) * cj;
      if (!(d > 0.0))
        throw std::runtime_error("nonpositive preconditioner diagonal");
      entry.inv_diag = 1.0 / d;
      p.entries.push_back(std::move(entry));
    }
  }
  return p;
}

Eigen::VectorXd apply_inverse(const Preconditioner& p,
                              const Eigen::VectorXd& r) {
  if (r.size() != p.n_fine && p.kind != PrecondKind::NONE)
    throw std::invalid_argument("residual length mismatch");
  if (p.kind == PrecondKind::NONE) return r;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(r.size());
  for (const auto& entry : p.entries) {
    double dot = 0.0;
    for (const auto& [i, c] : entry.column) dot += c * r[i];
    dot *= entry.inv_diag;
    for (const auto& [i, c] : entry.column) out[i] += dot * c;
  }
  return out;
}

Eigen::MatrixXd dense_inverse(const Preconditioner& p) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p.n_fine, p.n_fine);
  if (p.kind == PrecondKind::NONE)
    return Eigen::MatrixXd::Identity(p.n_fine, p.n_fine);
  for (const auto& entry : p.entries)
    for (const auto& [i, ci] : entry.column)
      for (const auto& [j, cj] : entry.column)
        m(i, j) += entry.inv_diag * ci * cj;
  return m;
}

Eigen::VectorXd apply_preconditioned_operator(const Preconditioner& p,
                                              const Eigen::MatrixXd& matrix,
                                              const Eigen::VectorXd& x) {
  return apply_inverse(p, matrix * x);
}

}  // namespace aswarz
