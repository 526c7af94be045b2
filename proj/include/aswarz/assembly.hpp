#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "aswarz/mesh.hpp"

namespace aswarz {

/// Dense Galerkin system on the free nodes of one level.
struct GalerkinSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  bool stabilized = false;
  /// <eta_j, 1> per free node, used by the rank-one stabilization and
  /// diagnostics.
  Eigen::VectorXd mass_vector;
};

/// Neumann boundary data: evaluator(x, outward_normal) -> dn w(x).
struct NeumannData {
  std::function<double(const Point2&, const Point2&)> evaluator;
  std::optional<Point2> singular_point;
};

/// -(1/2pi) * int_T int_T' log|x-y| ds(y) ds(x) via the closed-form /
/// semi-analytic path used by the assembler. Exposed for tests.
double single_layer_segment_pair(const Point2& a0, const Point2& a1,
                                 const Point2& b0, const Point2& b1);

/// Galerkin matrix of the hypersingular form, assembled through the
/// tangential-derivative identity <W u, v> = <V u', v'>. When stabilize is
/// set, the rank-one term <v,1><w,1> is added. rhs is left empty.
GalerkinSystem assemble_hypersingular(const BoundaryMesh& mesh, bool stabilize);

/// Right-hand side <1, eta_j> for the slit problem (f = 1). Exact:
/// half the support length of each interior hat.
Eigen::VectorXd assemble_rhs_slit(const BoundaryMesh& mesh);

/// Right-hand side (1/2 - K')phi tested against the hat functions, with K'
/// the adjoint double-layer operator. Requires a closed mesh.
Eigen::VectorXd assemble_rhs_lshape(const BoundaryMesh& mesh,
                                    const NeumannData& data);

/// Neumann data of the harmonic function r^{2/3} cos(2 phi / 3) on the
/// L-shape, with the angle branch cut in the excluded quadrant.
NeumannData neumann_data_lshape();

/// Gradient of r^{2/3} cos(2 phi / 3) (exposed for tests). Throws at the
/// origin.
Eigen::Vector2d lshape_potential_gradient(const Point2& x);

/// Trace of the potential w on the boundary (exact solution up to a
/// constant).
double lshape_potential(const Point2& x);

/// Independent verification path for one Galerkin entry: <V eta_k', eta_j'>
/// plus stabilization, computed by adaptive composite Gauss quadrature with
/// recursive subdivision toward the kernel singularity. Converged when two
/// depth settings agree to 1e-10 relative; otherwise throws with the
/// achieved estimate in the message.
double quadrature_oracle_entry(const BoundaryMesh& mesh, int j, int k,
                               bool stabilize, int rule_depth = 30);

}  // namespace aswarz
