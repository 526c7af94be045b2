#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "aswarz/mesh.hpp"

namespace aswarz {

/// Sparse coefficient column: a coarse hat expressed in the finest-level
/// free nodal basis.
using ScatterColumn = std::vector<std::pair<int, double>>;

/// Embedding of the level-l nodal basis into the finest space. columns[i]
/// belongs to the i-th free node of level l.
struct Prolongation {
  int from_level = 0;
  int to_level = 0;
  std::vector<ScatterColumn> columns;
};

enum class PrecondKind { LMLD, GMLD, HB, DIAG, NONE };

PrecondKind precond_kind_from_string(const std::string& name);
std::string to_string(PrecondKind kind);

/// Multilevel diagonal preconditioner: per active (level, node) pair one
/// scatter column and the inverse energy diagonal.
struct Preconditioner {
  PrecondKind kind = PrecondKind::NONE;
  int n_fine = 0;
  struct Entry {
    int level;
    int node;  // global node index
    ScatterColumn column;
    double inv_diag;
  };
  std::vector<Entry> entries;
};

/// Coefficient columns of every level's free hats in the finest basis,
/// built by iterated midpoint interpolation along the refinement records.
std::vector<Prolongation> build_prolongations(const MeshHierarchy& hier);

/// Assembles the chosen preconditioner. Diagonals d_z = c^T A^L c with c
/// the prolonged hat column (level-independent by nestedness). Throws on a
/// nonpositive diagonal.
Preconditioner build_preconditioner(PrecondKind kind, const MeshHierarchy& hier,
                                    const Eigen::MatrixXd& fine_matrix);

/// r -> sum over active (l,z) of d_z^{-1} (c^T r) c. NONE returns r.
Eigen::VectorXd apply_inverse(const Preconditioner& p, const Eigen::VectorXd& r);

/// Dense matrix of the inverse preconditioner (columns = applications to
/// unit vectors).
Eigen::MatrixXd dense_inverse(const Preconditioner& p);

/// x -> apply_inverse(p, A x).
Eigen::VectorXd apply_preconditioned_operator(const Preconditioner& p,
                                              const Eigen::MatrixXd& matrix,
                                              const Eigen::VectorXd& x);

}  // namespace aswarz
