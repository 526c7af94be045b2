#include "aswarz/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace aswarz {

namespace {

std::vector<std::vector<int>> node_to_elements(const BoundaryMesh& mesh) {
  std::vector<std::vector<int>> inc(mesh.num_nodes());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    inc[mesh.elements[e].first].push_back(e);
    inc[mesh.elements[e].second].push_back(e);
  }
  return inc;
}

void finalize_mesh(BoundaryMesh& mesh) {
  mesh.element_diam.resize(mesh.elements.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& [a, b] = mesh.elements[e];
    mesh.element_diam[e] = (mesh.node_coords[b] - mesh.node_coords[a]).norm();
    if (mesh.element_diam[e] <= 0.0)
      throw std::runtime_error("degenerate element");
  }
  mesh.free_nodes.clear();
  if (mesh.geometry && !mesh.geometry->closed) {
    // Interior nodes only: endpoints have a single incident element.
    auto inc = node_to_elements(mesh);
    for (int z = 0; z < mesh.num_nodes(); ++z)
      if (inc[z].size() >= 2) mesh.free_nodes.push_back(z);
  } else {
    mesh.free_nodes.resize(mesh.num_nodes());
    std::iota(mesh.free_nodes.begin(), mesh.free_nodes.end(), 0);
  }
}

}  // namespace

bool BoundaryMesh::is_free(int node) const {
  return std::binary_search(free_nodes.begin(), free_nodes.end(), node);
}

int BoundaryMesh::free_index(int node) const {
  auto it = std::lower_bound(free_nodes.begin(), free_nodes.end(), node);
  if (it == free_nodes.end() || *it != node) return -1;
  return static_cast<int>(it - free_nodes.begin());
}

double BoundaryMesh::h_min() const {
  return *std::min_element(element_diam.begin(), element_diam.end());
}

double BoundaryMesh::h_max() const {
  return *std::max_element(element_diam.begin(), element_diam.end());
}

double BoundaryMesh::node_h(int node) const {
  double h = std::numeric_limits<double>::max();
  for (int e = 0; e < num_elements(); ++e)
    if (elements[e].first == node || elements[e].second == node)
      h = std::min(h, element_diam[e]);
  return h;
}

std::vector<int> MeshHierarchy::ntilde(int level) const {
  if (level == 0) return levels[0].free_nodes;
  return records[level - 1].ntilde;
}

BoundaryMesh make_initial_mesh(BoundaryGeometry geometry, double target_h) {
  if (target_h <= 0.0) throw std::invalid_argument("target_h must be positive");
  BoundaryMesh mesh;
  mesh.geometry = std::make_shared<const BoundaryGeometry>(std::move(geometry));
  const BoundaryGeometry& geo = *mesh.geometry;
  const int nv = static_cast<int>(geo.vertices.size());
  const int nseg = geo.closed ? nv : nv - 1;
  for (int i = 0; i < nv; ++i) mesh.node_coords.push_back(geo.vertices[i]);
  for (int i = 0; i < nseg; ++i) {
    const Point2& a = geo.vertices[i];
    const Point2& b = geo.vertices[(i + 1) % nv];
    const int parts =
        std::max(1, static_cast<int>(std::ceil((b - a).norm() / target_h - 1e-12)));
    int prev = i;
    for (int k = 1; k < parts; ++k) {
      mesh.node_coords.push_back(a + (b - a) * (double(k) / parts));
      int mid = mesh.num_nodes() - 1;
      mesh.elements.emplace_back(prev, mid);
      prev = mid;
    }
    mesh.elements.emplace_back(prev, (i + 1) % nv);
  }
  finalize_mesh(mesh);
  return mesh;
}

MeshHierarchy make_hierarchy(BoundaryGeometry geo, double target_h) {
  MeshHierarchy hier;
  hier.levels.push_back(make_initial_mesh(std::move(geo), target_h));
  return hier;
}

std::pair<BoundaryMesh, RefinementRecord> refine(const BoundaryMesh& mesh,
                                                 const std::set<int>& marked) {
  if (marked.empty()) throw std::invalid_argument("nothing to refine");
  for (int e : marked)
    if (e < 0 || e >= mesh.num_elements())
      throw std::out_of_range("marked element index out of range");

  // Closure: bisect until no element exceeds twice a touching neighbour.
  std::set<int> bisect = marked;
  auto inc = node_to_elements(mesh);
  bool changed = true;
  while (changed) {
    changed = false;
    auto len = [&](int e) {
      return bisect.count(e) ? 0.5 * mesh.element_diam[e] : mesh.element_diam[e];
    };
    for (int e = 0; e < mesh.num_elements(); ++e) {
      if (bisect.count(e)) continue;
      for (int node : {mesh.elements[e].first, mesh.elements[e].second}) {
        for (int f : inc[node]) {
          if (f != e && len(e) > 2.0 * len(f) * (1.0 + 1e-12)) {
            bisect.insert(e);
            changed = true;
            break;
          }
        }
        if (changed) break;
      }
    }
  }

  BoundaryMesh fine;
  fine.geometry = mesh.geometry;
  fine.node_coords = mesh.node_coords;
  RefinementRecord rec;
  rec.bisected_elements = bisect;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& [a, b] = mesh.elements[e];
    if (bisect.count(e)) {
      fine.node_coords.push_back(0.5 * (mesh.node_coords[a] + mesh.node_coords[b]));
      const int m = static_cast<int>(fine.node_coords.size()) - 1;
      fine.elements.emplace_back(a, m);
      fine.elements.emplace_back(m, b);
      rec.new_nodes.push_back({m, a, b});
    } else {
      fine.elements.emplace_back(a, b);
    }
  }
  finalize_mesh(fine);

  for (const auto& nn : rec.new_nodes) rec.ntilde.push_back(nn.node);
  // Old free nodes whose patch shrank: those incident to a bisected element.
  for (int e : bisect) {
    for (int node : {mesh.elements[e].first, mesh.elements[e].second})
      if (fine.is_free(node)) rec.ntilde.push_back(node);
  }
  std::sort(rec.ntilde.begin(), rec.ntilde.end());
  rec.ntilde.erase(std::unique(rec.ntilde.begin(), rec.ntilde.end()),
                   rec.ntilde.end());
  return {std::move(fine), std::move(rec)};
}

void refine_hierarchy(MeshHierarchy& hier, const std::set<int>& marked) {
  auto [fine, rec] = refine(hier.finest(), marked);
  rec.parent_level = hier.max_level();
  hier.levels.push_back(std::move(fine));
  hier.records.push_back(std::move(rec));
}

void refine_uniform(MeshHierarchy& hier) {
  std::set<int> all;
  for (int e = 0; e < hier.finest().num_elements(); ++e) all.insert(e);
  refine_hierarchy(hier, all);
}

void refine_artificial_corner(MeshHierarchy& hier) {
  const BoundaryMesh& mesh = hier.finest();
  if (!mesh.geometry || !mesh.geometry->corner_index)
    throw std::invalid_argument("geometry has no distinguished corner");
  const Point2 corner = mesh.geometry->vertices[*mesh.geometry->corner_index];
  int corner_node = -1;
  for (int z = 0; z < mesh.num_nodes(); ++z)
    if ((mesh.node_coords[z] - corner).norm() < 1e-14) corner_node = z;
  if (corner_node < 0) throw std::runtime_error("corner node not found in mesh");
  std::set<int> marked;
  for (int e = 0; e < mesh.num_elements(); ++e)
    if (mesh.elements[e].first == corner_node ||
        mesh.elements[e].second == corner_node)
      marked.insert(e);
  refine_hierarchy(hier, marked);
}

std::set<int> estimate_and_mark(const BoundaryMesh& mesh,
                                const Eigen::VectorXd& solution_coeffs,
                                double theta) {
  if (solution_coeffs.size() != mesh.num_free())
    throw std::invalid_argument("coefficient length mismatch");
  if (theta <= 0.0 || theta > 1.0)
    throw std::invalid_argument("theta must lie in (0,1]");

  // Nodal values, zero on constrained (screen endpoint) nodes.
  Eigen::VectorXd u = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int j = 0; j < mesh.num_free(); ++j)
    u[mesh.free_nodes[j]] = solution_coeffs[j];

  const int ne = mesh.num_elements();
  Eigen::VectorXd slope(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& [a, b] = mesh.elements[e];
    slope[e] = (u[b] - u[a]) / mesh.element_diam[e];
  }
  auto inc = node_to_elements(mesh);
  Eigen::VectorXd avg(mesh.num_nodes());
  for (int z = 0; z < mesh.num_nodes(); ++z) {
    double s = 0.0;
    for (int e : inc[z]) s += slope[e];
    avg[z] = s / static_cast<double>(inc[z].size());
  }
  // mu_T^2 = h_T * int_T (Au' - u')^2, the integrand linear on T.
  Eigen::VectorXd mu2(ne);
  for (int e = 0; e < ne; ++e) {
    const auto& [a, b] = mesh.elements[e];
    const double ea = avg[a] - slope[e], eb = avg[b] - slope[e];
    const double h = mesh.element_diam[e];
    mu2[e] = h * (h / 3.0) * (ea * ea + ea * eb + eb * eb);
  }

  std::vector<int> order(ne);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return mu2[i] > mu2[j]; });
  const double total = mu2.sum();
  std::set<int> marked;
  double acc = 0.0;
  for (int e : order) {
    if (acc >= theta * total && !marked.empty()) break;
    if (mu2[e] <= 0.0) break;
    marked.insert(e);
    acc += mu2[e];
  }
  return marked;
}

int node_level(const MeshHierarchy& hier, int level, int node) {
  const double h0 = hier.levels[0].h_max();
  const double hz = hier.levels[level].node_h(node);
  return static_cast<int>(std::floor(std::log(hz / h0) / std::log(0.5) + 1e-9));
}

void dump_hierarchy(const MeshHierarchy& hier, std::ostream& os) {
  char buf[128];
  for (int l = 0; l <= hier.max_level(); ++l) {
    const BoundaryMesh& m = hier.levels[l];
    for (int z = 0; z < m.num_nodes(); ++z) {
      std::snprintf(buf, sizeof(buf), "n %d %.17g %.17g\n", z,
                    m.node_coords[z].x(), m.node_coords[z].y());
      os << buf;
    }
    for (int e = 0; e < m.num_elements(); ++e) {
      std::snprintf(buf, sizeof(buf), "e %d %d %d\n", e, m.elements[e].first,
                    m.elements[e].second);
      os << buf;
    }
    os << "ntilde";
    for (int z : hier.ntilde(l)) os << ' ' << z;
    os << '\n';
  }
}

}  // namespace aswarz
