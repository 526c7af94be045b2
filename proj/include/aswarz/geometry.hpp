#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace aswarz {

using Point2 = Eigen::Vector2d;

/// Polygonal boundary curve, either a closed loop or an open arc.
/// Vertices are listed in traversal order; for a closed curve the segment
/// from the last vertex back to the first closes the loop (no duplicated
/// endpoint).
struct BoundaryGeometry {
  std::vector<Point2> vertices;
  bool closed = true;
  /// Index of the distinguished corner vertex (used by the artificial
  /// corner refinement), if any.
  std::optional<int> corner_index;
};

/// Closed L-shaped polygon with the reentrant corner at the origin,
/// vertices (0,0), (0,-1), (1,-1), (1,1), (-1,1), (-1,0) counterclockwise.
BoundaryGeometry make_lshape_geometry();

/// Open segment from (-1,0) to (1,0).
BoundaryGeometry make_slit_geometry();

/// Checks that consecutive vertices are distinct and the polyline is simple.
/// Throws std::invalid_argument on violation.
void validate_geometry(const BoundaryGeometry& geo);

}  // namespace aswarz
