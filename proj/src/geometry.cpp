#include "aswarz/geometry.hpp"

#include <stdexcept>

namespace aswarz {

namespace {

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c,
                        const Point2& d) {
  auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
    double v = (q.x() - p.x()) * (r.y() - p.y()) -
               (q.y() - p.y()) * (r.x() - p.x());
    return (v > 1e-14) - (v < -1e-14);
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  return o1 != o2 && o3 != o4;
}

}  // namespace

BoundaryGeometry make_lshape_geometry() {
  BoundaryGeometry geo;
  geo.vertices = {{0.0, 0.0}, {0.0, -1.0}, {1.0, -1.0},
                  {1.0, 1.0}, {-1.0, 1.0}, {-1.0, 0.0}};
  geo.closed = true;
  geo.corner_index = 0;
  validate_geometry(geo);
  return geo;
}

BoundaryGeometry make_slit_geometry() {
  BoundaryGeometry geo;
  geo.vertices = {{-1.0, 0.0}, {1.0, 0.0}};
  geo.closed = false;
  validate_geometry(geo);
  return geo;
}

void validate_geometry(const BoundaryGeometry& geo) {
  const auto& v = geo.vertices;
  const int n = static_cast<int>(v.size());
  if (n < 2) throw std::invalid_argument("geometry needs at least 2 vertices");
  const int nseg = geo.closed ? n : n - 1;
  for (int i = 0; i < nseg; ++i) {
    if ((v[(i + 1) % n] - v[i]).norm() < 1e-14)
      throw std::invalid_argument("consecutive vertices coincide");
  }
  // Simplicity: non-adjacent segments must not cross.
  for (int i = 0; i < nseg; ++i) {
    for (int j = i + 2; j < nseg; ++j) {
      if (geo.closed && i == 0 && j == nseg - 1) continue;  // adjacent via loop
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
        throw std::invalid_argument("polyline is not simple");
    }
  }
}

}  // namespace aswarz
