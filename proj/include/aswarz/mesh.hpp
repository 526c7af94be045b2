#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <memory>
#include <set>
#include <vector>

#include "aswarz/geometry.hpp"

namespace aswarz {

/// One refinement level of the boundary mesh. Elements are straight
/// segments (node_a, node_b) in traversal order. Node indices are global
/// and stable across refinement: a node of T_l keeps its index in T_{l+1}.
struct BoundaryMesh {
  std::shared_ptr<const BoundaryGeometry> geometry;
  std::vector<Point2> node_coords;
  std::vector<std::pair<int, int>> elements;
  std::vector<double> element_diam;
  /// Degrees of freedom: all nodes for closed curves, interior nodes for
  /// open screens (the two endpoint nodes are excluded).
  std::vector<int> free_nodes;

  int num_nodes() const { return static_cast<int>(node_coords.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_free() const { return static_cast<int>(free_nodes.size()); }
  bool is_free(int node) const;
  /// Position of a node within free_nodes, or -1.
  int free_index(int node) const;
  double h_min() const;
  double h_max() const;
  /// Shortest incident element length h_l(z).
  double node_h(int node) const;
};

/// Bookkeeping of one refinement step T_{l-1} -> T_l.
struct RefinementRecord {
  int parent_level = 0;  // index l-1
  std::set<int> bisected_elements;
  struct NewNode {
    int node;
    int parent_a, parent_b;  // endpoints of the bisected parent edge
  };
  std::vector<NewNode> new_nodes;
  /// Free nodes of T_l that are new or whose patch strictly shrank.
  std::vector<int> ntilde;
};

/// The full sequence T_0..T_L with per-step records. records[l-1] maps
/// T_{l-1} -> T_l.
struct MeshHierarchy {
  std::vector<BoundaryMesh> levels;
  std::vector<RefinementRecord> records;

  int max_level() const { return static_cast<int>(levels.size()) - 1; }
  const BoundaryMesh& finest() const { return levels.back(); }

  /// Active-node set for level l: all free nodes at l = 0, ntilde for l >= 1.
  std::vector<int> ntilde(int level) const;
};

/// Uniform initial mesh on a geometry: each polygon edge split into
/// ceil(len / target_h) equal elements. For the L-shape pass target_h = 1
/// to obtain the 8-element starting mesh (short edges one element, long
/// edges two).
BoundaryMesh make_initial_mesh(BoundaryGeometry geo, double target_h);

/// Starts a hierarchy with the initial mesh as level 0.
MeshHierarchy make_hierarchy(BoundaryGeometry geo, double target_h);

/// Bisects every marked element at its arclength midpoint, then closes the
/// mesh by bisecting any element longer than twice a touching neighbour
/// until the local ratio bound 2 holds. Throws on empty marked set.
std::pair<BoundaryMesh, RefinementRecord> refine(const BoundaryMesh& mesh,
                                                 const std::set<int>& marked);

/// Appends refine(finest, marked) to the hierarchy.
void refine_hierarchy(MeshHierarchy& hier, const std::set<int>& marked);

/// Bisects every element of the finest level.
void refine_uniform(MeshHierarchy& hier);

/// Appends one level bisecting exactly the two elements incident to the
/// distinguished corner. Throws if corner_index is unset.
void refine_artificial_corner(MeshHierarchy& hier);

/// Averaging-based error indicator with Doerfler marking: per element
/// mu_T = h_T^{1/2} * || u' - A u' ||_{L2(T)} with u' the piecewise
/// constant arclength derivative of the discrete solution and A nodal
/// averaging followed by linear interpolation. Returns a minimal set with
/// sum of mu_T^2 >= theta * total.
std::set<int> estimate_and_mark(const BoundaryMesh& mesh,
                                const Eigen::VectorXd& solution_coeffs,
                                double theta);

/// Node level per the dyadic mesh-width formula, diagnostic only.
int node_level(const MeshHierarchy& hier, int level, int node);

/// Plain-text dump: "n <id> <x> <y>" per node, "e <id> <a> <b>" per
/// element, "ntilde <ids...>" per level.
void dump_hierarchy(const MeshHierarchy& hier, std::ostream& os);

}  // namespace aswarz
