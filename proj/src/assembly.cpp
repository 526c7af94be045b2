#include "aswarz/assembly.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "quad.hpp"

namespace aswarz {

namespace {

constexpr double kPi = std::numbers::pi;

// Antiderivative for the 1D double log integral:
// int_a^b int_c^d log|x-y| dy dx = F(d-a) - F(d-b) - F(c-a) + F(c-b).
double log_kernel_primitive(double t) {
  if (t == 0.0) return 0.0;
  return 0.5 * t * t * (std::log(std::abs(t)) - 1.5);
}

// int over the segment [p0,p1] of log|x-y| ds(y). Closed form near the
// segment; plain Gauss once x is far relative to the segment length, where
// the primitive difference would cancel catastrophically.
double segment_log_potential(const Point2& x, const Point2& p0,
                             const Point2& p1) {
  const Point2 dir = p1 - p0;
  const double len = dir.norm();
  const Point2 t = dir / len;
  const double s0 = (x - p0).dot(t);
  const Point2 perp = (x - p0) - s0 * t;
  const double d = perp.norm();
  const double near0 = std::clamp(s0, 0.0, len);
  if (std::hypot(s0 - near0, d) > 2.0 * len) {
    auto f = [&](double s) { return std::log((x - (p0 + s * t)).norm()); };
    return quad::gauss16(f, 0.0, len);
  }
  auto prim = [d](double s) {
    // antiderivative of log sqrt(s^2 + d^2)
    const double r2 = s * s + d * d;
    if (r2 == 0.0) return 0.0;
    double v = 0.5 * s * std::log(r2) - s;
    if (d > 0.0) v += d * std::atan(s / d);
    return v;
  };
  return prim(len - s0) - prim(-s0);
}

struct Segment {
  Point2 a, b;
  double len() const { return (b - a).norm(); }
  Point2 at(double t) const { return a + t * (b - a); }
};

bool collinear(const Segment& s, const Segment& r) {
  const Point2 t = (s.b - s.a).normalized();
  auto off = [&](const Point2& p) {
    const Point2 v = p - s.a;
    return std::abs(v.x() * t.y() - v.y() * t.x());
  };
  const double tol = 1e-12 * (s.len() + r.len());
  return off(r.a) < tol && off(r.b) < tol;
}

// Parameter on segment s of the point closest to p, clamped to [0,1].
double closest_parameter(const Segment& s, const Point2& p) {
  const Point2 d = s.b - s.a;
  const double t = (p - s.a).dot(d) / d.squaredNorm();
  return std::clamp(t, 0.0, 1.0);
}

double segment_distance(const Segment& s, const Segment& r) {
  double dist = std::numeric_limits<double>::max();
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    dist = std::min(dist, (s.at(t) - r.at(closest_parameter(r, s.at(t)))).norm());
    dist = std::min(dist, (r.at(t) - s.at(closest_parameter(s, r.at(t)))).norm());
  }
  return dist;
}

// Composite Gauss on [a,b] with dyadic panels shrinking toward the
// singular endpoint.
template <typename F>
double graded_gauss(const F& f, double a, double b, bool sing_at_a,
                    int depth) {
  double total = 0.0;
  double lo = 0.0, hi = 1.0;  // relative coordinates from the singular end
  for (int m = 0; m < depth; ++m) {
    lo = 0.5 * hi;
    total += sing_at_a ? quad::gauss16(f, a + lo * (b - a), a + hi * (b - a))
                       : quad::gauss16(f, b - hi * (b - a), b - lo * (b - a));
    hi = lo;
  }
  total += sing_at_a ? quad::gauss16(f, a, a + hi * (b - a))
                     : quad::gauss16(f, b - hi * (b - a), b);
  return total;
}

// I(S,R) = int_S int_R log|x-y|, closed/semi-analytic route.
double log_double_integral(const Segment& s, const Segment& r) {
  if (collinear(s, r)) {
    const Point2 t = (s.b - s.a).normalized();
    const double a = 0.0, b = s.len();
    double c = (r.a - s.a).dot(t), d = (r.b - s.a).dot(t);
    if (d < c) std::swap(c, d);
    return log_kernel_primitive(d - a) - log_kernel_primitive(d - b) -
           log_kernel_primitive(c - a) + log_kernel_primitive(c - b);
  }
  auto integrand = [&](double t) {
    return segment_log_potential(s.at(t), r.a, r.b);
  };
  const double dist = segment_distance(s, r);
  const double eps = 1e-13 * (s.len() + r.len());
  if (dist < eps) {
    // Touching at a shared vertex: grade the outer rule toward it.
    const double ta = (s.a - r.a).norm() < eps || (s.a - r.b).norm() < eps
                          ? 0.0
                          : 1.0;
    return s.len() * graded_gauss(integrand, 0.0, 1.0, ta == 0.0, 40);
  }
  if (dist >= std::max(s.len(), r.len()))
    return s.len() * quad::gauss16(integrand, 0.0, 1.0);
  const double tol = 1e-14 * s.len() * r.len() *
                     (1.0 + std::abs(std::log(dist + s.len() + r.len())));
  return s.len() * quad::adaptive_gauss(integrand, 0.0, 1.0, tol / s.len(), 30);
}

Eigen::VectorXd mass_vector(const BoundaryMesh& mesh) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(mesh.num_free());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int node : {mesh.elements[e].first, mesh.elements[e].second}) {
      const int j = mesh.free_index(node);
      if (j >= 0) m[j] += 0.5 * mesh.element_diam[e];
    }
  }
  return m;
}

// Signed arclength-derivative of the hat at `node` on oriented element e.
double hat_slope(const BoundaryMesh& mesh, int e, int node) {
  const auto& [a, b] = mesh.elements[e];
  const double h = mesh.element_diam[e];
  if (a == node) return -1.0 / h;
  if (b == node) return 1.0 / h;
  return 0.0;
}

}  // namespace

double single_layer_segment_pair(const Point2& a0, const Point2& a1,
                                 const Point2& b0, const Point2& b1) {
  return -log_double_integral({a0, a1}, {b0, b1}) / (2.0 * kPi);
}

GalerkinSystem assemble_hypersingular(const BoundaryMesh& mesh,
                                      bool stabilize) {
  const int ne = mesh.num_elements();
  const int n = mesh.num_free();
  for (int e = 0; e < ne; ++e)
    if (mesh.element_diam[e] <= 0.0)
      throw std::runtime_error("degenerate element");

  Eigen::MatrixXd vmat(ne, ne);
  for (int e = 0; e < ne; ++e) {
    const Segment se{mesh.node_coords[mesh.elements[e].first],
                     mesh.node_coords[mesh.elements[e].second]};
    for (int f = e; f < ne; ++f) {
      const Segment sf{mesh.node_coords[mesh.elements[f].first],
                       mesh.node_coords[mesh.elements[f].second]};
      vmat(e, f) = -log_double_integral(se, sf) / (2.0 * kPi);
      vmat(f, e) = vmat(e, f);
    }
  }

  GalerkinSystem sys;
  sys.stabilized = stabilize;
  sys.mass_vector = mass_vector(mesh);
  sys.matrix = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < ne; ++e) {
    for (int f = 0; f < ne; ++f) {
      const double v = vmat(e, f);
      for (int zj : {mesh.elements[e].first, mesh.elements[e].second}) {
        const int j = mesh.free_index(zj);
        if (j < 0) continue;
        const double sj = hat_slope(mesh, e, zj);
        for (int zk : {mesh.elements[f].first, mesh.elements[f].second}) {
          const int k = mesh.free_index(zk);
          if (k < 0) continue;
          sys.matrix(j, k) += sj * hat_slope(mesh, f, zk) * v;
        }
      }
    }
  }
  if (stabilize)
    sys.matrix += sys.mass_vector * sys.mass_vector.transpose();
  return sys;
}

Eigen::VectorXd assemble_rhs_slit(const BoundaryMesh& mesh) {
  if (!mesh.geometry || mesh.geometry->closed)
    throw std::invalid_argument("slit RHS requires open screen");
  return mass_vector(mesh);
}

Eigen::VectorXd assemble_rhs_lshape(const BoundaryMesh& mesh,
                                    const NeumannData& data) {
  if (!mesh.geometry || !mesh.geometry->closed)
    throw std::invalid_argument("L-shape RHS requires a closed mesh");
  const int ne = mesh.num_elements();

  std::vector<Segment> segs(ne);
  std::vector<Point2> normals(ne);
  for (int e = 0; e < ne; ++e) {
    segs[e] = {mesh.node_coords[mesh.elements[e].first],
               mesh.node_coords[mesh.elements[e].second]};
    const Point2 t = (segs[e].b - segs[e].a).normalized();
    normals[e] = {t.y(), -t.x()};  // outward for counterclockwise traversal
  }

  // K' phi at x with outer normal nx; collinear inner segments drop out.
  auto adjoint_dlp = [&](const Point2& x, const Point2& nx) {
    double sum = 0.0;
    for (int f = 0; f < ne; ++f) {
      const double off_a = std::abs((segs[f].a - x).dot(nx));
      const double off_b = std::abs((segs[f].b - x).dot(nx));
      if (off_a < 1e-13 && off_b < 1e-13) continue;
      auto inner = [&](double t) {
        const Point2 y = segs[f].at(t);
        const Point2 d = x - y;
        const double kern = -d.dot(nx) / (2.0 * kPi * d.squaredNorm());
        return kern * data.evaluator(y, normals[f]);
      };
      sum += segs[f].len() * quad::adaptive_gauss(inner, 0.0, 1.0, 1e-12, 30);
    }
    return sum;
  };

  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.num_free());
  for (int e = 0; e < ne; ++e) {
    const auto& [na, nb] = mesh.elements[e];
    const int ja = mesh.free_index(na), jb = mesh.free_index(nb);
    double acc_a = 0.0, acc_b = 0.0;
    auto accumulate = [&](double t, double w) {
      const Point2 x = segs[e].at(t);
      const double g =
          0.5 * data.evaluator(x, normals[e]) - adjoint_dlp(x, normals[e]);
      acc_a += w * (1.0 - t) * g;
      acc_b += w * t * g;
    };
    // Grade toward an endpoint carrying the data singularity, else plain
    // composite Gauss.
    bool sing_a = data.singular_point &&
                  (segs[e].a - *data.singular_point).norm() < 1e-13;
    bool sing_b = data.singular_point &&
                  (segs[e].b - *data.singular_point).norm() < 1e-13;
    std::vector<std::pair<double, double>> panels;
    if (sing_a || sing_b) {
      double hi = 1.0;
      for (int m = 0; m < 26; ++m) {
        panels.emplace_back(0.5 * hi, hi);
        hi *= 0.5;
      }
      panels.emplace_back(0.0, hi);
      if (sing_b)
        for (auto& p : panels) p = {1.0 - p.second, 1.0 - p.first};
    } else {
      panels = {{0.0, 0.5}, {0.5, 1.0}};
    }
    for (const auto& [lo, hi] : panels) {
      const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
      for (int q = 0; q < 8; ++q)
        accumulate(mid + half * quad::kGauss8X[q],
                   half * quad::kGauss8W[q]);
    }
    if (ja >= 0) b[ja] += segs[e].len() * acc_a;
    if (jb >= 0) b[jb] += segs[e].len() * acc_b;
  }
  return b;
}

Eigen::Vector2d lshape_potential_gradient(const Point2& x) {
  const double r = x.norm();
  if (r == 0.0)
    throw std::domain_error("Neumann data singular at the corner");
  double phi = std::atan2(x.y(), x.x());
  if (phi < -0.5 * kPi) phi += 2.0 * kPi;  // branch cut in the void quadrant
  const double c = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
  const double dr = c * std::cos(2.0 * phi / 3.0);
  const double dphi = -c * std::sin(2.0 * phi / 3.0);
  const Eigen::Vector2d er(std::cos(phi), std::sin(phi));
  const Eigen::Vector2d ephi(-std::sin(phi), std::cos(phi));
  return dr * er + dphi * ephi;
}

double lshape_potential(const Point2& x) {
  const double r = x.norm();
  if (r == 0.0) return 0.0;
  double phi = std::atan2(x.y(), x.x());
  if (phi < -0.5 * kPi) phi += 2.0 * kPi;
  return std::pow(r, 2.0 / 3.0) * std::cos(2.0 * phi / 3.0);
}

NeumannData neumann_data_lshape() {
  NeumannData data;
  data.singular_point = Point2(0.0, 0.0);
  data.evaluator = [](const Point2& x, const Point2& n) {
    return lshape_potential_gradient(x).dot(n);
  };
  return data;
}

namespace {

// Fully quadrature-based path for I(S,R), independent of the closed forms.
double oracle_log_integral(const Segment& s, const Segment& r, int depth,
                           double tol) {
  const double eps = 1e-13 * (s.len() + r.len());
  auto inner = [&](const Point2& x) {
    const double tc = closest_parameter(r, x);
    const double dist = (x - r.at(tc)).norm();
    auto f = [&](double t) {
      const double d = std::max((x - r.at(t)).norm(), 1e-300);
      return std::log(d);
    };
    if (dist < eps && tc > 0.0 && tc < 1.0) {
      // x sits on r: split at the singular parameter and grade toward it.
      return r.len() * (graded_gauss(f, 0.0, tc, false, depth) +
                        graded_gauss(f, tc, 1.0, true, depth));
    }
    return r.len() * quad::adaptive_gauss(f, 0.0, 1.0, tol, depth);
  };
  auto outer = [&](double t) { return inner(s.at(t)); };

  const bool identical = ((s.a - r.a).norm() < eps && (s.b - r.b).norm() < eps) ||
                         ((s.a - r.b).norm() < eps && (s.b - r.a).norm() < eps);
  if (identical) {
    return s.len() * (graded_gauss(outer, 0.0, 0.5, true, depth) +
                      graded_gauss(outer, 0.5, 1.0, false, depth));
  }
  const bool touch_a = closest_parameter(r, s.a) >= 0.0 &&
                       (s.a - r.at(closest_parameter(r, s.a))).norm() < eps;
  const bool touch_b =
      (s.b - r.at(closest_parameter(r, s.b))).norm() < eps;
  if (touch_a || touch_b)
    return s.len() * graded_gauss(outer, 0.0, 1.0, touch_a, depth);
  return s.len() * quad::adaptive_gauss(outer, 0.0, 1.0, tol, depth);
}

double oracle_entry_once(const BoundaryMesh& mesh, int j, int k,
                         bool stabilize, int depth, double tol) {
  const int zj = mesh.free_nodes[j], zk = mesh.free_nodes[k];
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double sj = hat_slope(mesh, e, zj);
    if (sj == 0.0) continue;
    const Segment se{mesh.node_coords[mesh.elements[e].first],
                     mesh.node_coords[mesh.elements[e].second]};
    for (int f = 0; f < mesh.num_elements(); ++f) {
      const double sk = hat_slope(mesh, f, zk);
      if (sk == 0.0) continue;
      const Segment sf{mesh.node_coords[mesh.elements[f].first],
                       mesh.node_coords[mesh.elements[f].second]};
      sum += sj * sk * (-oracle_log_integral(se, sf, depth, tol) / (2.0 * kPi));
    }
  }
  if (stabilize) {
    auto hat_mass = [&](int z) {
      double m = 0.0;
      for (int e = 0; e < mesh.num_elements(); ++e)
        if (hat_slope(mesh, e, z) != 0.0) {
          const Segment se{mesh.node_coords[mesh.elements[e].first],
                           mesh.node_coords[mesh.elements[e].second]};
          auto eta = [&](double t) {
            return mesh.elements[e].first == z ? 1.0 - t : t;
          };
          m += se.len() * quad::gauss8(eta, 0.0, 1.0);
        }
      return m;
    };
    sum += hat_mass(zj) * hat_mass(zk);
  }
  return sum;
}

}  // namespace

double quadrature_oracle_entry(const BoundaryMesh& mesh, int j, int k,
                               bool stabilize, int rule_depth) {
  if (j < 0 || j >= mesh.num_free() || k < 0 || k >= mesh.num_free())
    throw std::out_of_range("free-node index out of range");
  const double coarse =
      oracle_entry_once(mesh, j, k, stabilize, rule_depth, 1e-11);
  const double fine =
      oracle_entry_once(mesh, j, k, stabilize, rule_depth + 6, 2.5e-12);
  const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-30});
  if (std::abs(fine - coarse) / scale > 1e-10) {
    std::ostringstream msg;
    msg << "quadrature oracle did not converge: depth " << rule_depth << " -> "
        << coarse << ", depth " << rule_depth + 6 << " -> " << fine;
    throw std::runtime_error(msg.str());
  }
  return fine;
}

}  // namespace aswarz
