#include "ddr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace ddr {

MeshParseError::MeshParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

MeshTopologyError::MeshTopologyError(int entity, const std::string& what)
    : std::runtime_error(what), entity_(entity) {}

MeshFamily parse_mesh_family(const std::string& name) {
  if (name == "cartesian") return MeshFamily::cartesian;
  if (name == "triangular") return MeshFamily::triangular;
  if (name == "hexagonal") return MeshFamily::hexagonal;
  throw std::invalid_argument("unknown mesh family '" + name + "'");
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::cartesian: return "cartesian";
    case MeshFamily::triangular: return "triangular";
    case MeshFamily::hexagonal: return "hexagonal";
  }
  return "unknown";
}

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const std::vector<Point>& loop) {
  double a = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    a += cross(loop[i], loop[(i + 1) % loop.size()]);
  }
  return 0.5 * a;
}

Point centroid(const std::vector<Point>& loop) {
  // Shifted to the first vertex to limit cancellation.
  const Point origin = loop.front();
  double area = 0.0;
  Point c = Point::Zero();
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point p = loop[i] - origin;
    const Point q = loop[(i + 1) % loop.size()] - origin;
    const double w = cross(p, q);
    area += w;
    c += w * (p + q);
  }
  return origin + c / (3.0 * area);
}

}  // namespace

Mesh Mesh::from_topology(std::vector<Point> vertices, std::vector<std::array<int, 2>> edges,
                         std::vector<std::vector<int>> element_edges,
                         std::vector<std::vector<int>> element_orientations,
                         std::vector<Point> element_centers) {
  Mesh mesh;
  const int nv = static_cast<int>(vertices.size());
  mesh.vertices_.resize(nv);
  for (int i = 0; i < nv; ++i) mesh.vertices_[i] = Vertex{i, vertices[i]};

  std::map<std::pair<int, int>, int> seen;
  mesh.edges_.resize(edges.size());
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    const auto [a, b] = edges[i];
    if (a < 0 || b < 0 || a >= nv || b >= nv || a == b) {
      throw MeshTopologyError(i, "edge " + std::to_string(i) + " has invalid endpoints");
    }
    const auto key = std::minmax(a, b);
    if (!seen.emplace(std::pair{key.first, key.second}, i).second) {
      throw MeshTopologyError(i, "duplicate edge " + std::to_string(i) + " (same endpoints as edge " +
                                     std::to_string(seen[{key.first, key.second}]) + ")");
    }
    Edge& e = mesh.edges_[i];
    e.id = i;
    e.vertices = {a, b};
    const Point d = vertices[b] - vertices[a];
    e.length = d.norm();
    if (!(e.length > 0.0)) throw MeshTopologyError(i, "edge " + std::to_string(i) + " has zero length");
    e.tangent = d / e.length;
    e.normal = Point(-e.tangent.y(), e.tangent.x());
    e.midpoint = 0.5 * (vertices[a] + vertices[b]);
  }

  if (element_edges.size() != element_orientations.size()) {
    throw std::invalid_argument("element edge and orientation lists differ in size");
  }
  const int nt = static_cast<int>(element_edges.size());
  mesh.elements_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    Element& el = mesh.elements_[t];
    el.id = t;
    el.edges = std::move(element_edges[t]);
    el.orientations = std::move(element_orientations[t]);
    const auto name = "element " + std::to_string(t);
    if (el.edges.size() < 3 || el.edges.size() != el.orientations.size()) {
      throw MeshTopologyError(t, name + " needs at least three edges with one sign each");
    }
    for (int e : el.edges) {
      if (e < 0 || e >= mesh.n_edges()) throw MeshTopologyError(t, name + " references unknown edge");
    }
    for (int s : el.orientations) {
      if (s != 1 && s != -1) throw MeshTopologyError(t, name + " has an orientation sign other than +-1");
    }
    {
      auto sorted = el.edges;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw MeshTopologyError(t, name + " lists an edge twice");
      }
    }
    // Walk the loop: the start of edge i is the endpoint not shared with edge i+1.
    const int ne = static_cast<int>(el.edges.size());
    el.vertices.resize(ne);
    for (int i = 0; i < ne; ++i) {
      const auto& cur = mesh.edges_[el.edges[i]].vertices;
      const auto& nxt = mesh.edges_[el.edges[(i + 1) % ne]].vertices;
      int shared = -1;
      for (int a : cur) {
        if (a == nxt[0] || a == nxt[1]) shared = a;
      }
      if (shared < 0) throw MeshTopologyError(t, name + " has an open edge loop");
      el.vertices[(i + 1) % ne] = shared;
    }
    for (int i = 0; i < ne; ++i) {
      const auto& cur = mesh.edges_[el.edges[i]].vertices;
      const int start = el.vertices[i];
      const int end = el.vertices[(i + 1) % ne];
      const bool ok = (cur[0] == start && cur[1] == end) || (cur[1] == start && cur[0] == end);
      if (!ok) throw MeshTopologyError(t, name + " has an open edge loop");
    }
    std::vector<Point> loop;
    for (int v : el.vertices) loop.push_back(vertices[v]);
    double area = signed_area(loop);
    if (area < 0.0) {
      std::reverse(el.edges.begin(), el.edges.end());
      std::reverse(el.orientations.begin(), el.orientations.end());
      // Recompute starts for the reversed traversal.
      std::vector<int> starts(ne);
      for (int i = 0; i < ne; ++i) {
        const auto& cur = mesh.edges_[el.edges[i]].vertices;
        const auto& nxt = mesh.edges_[el.edges[(i + 1) % ne]].vertices;
        const int shared = (cur[0] == nxt[0] || cur[0] == nxt[1]) ? cur[0] : cur[1];
        starts[(i + 1) % ne] = shared;
      }
      el.vertices = starts;
      loop.clear();
      for (int v : el.vertices) loop.push_back(vertices[v]);
      area = -area;
    }
    if (!(area > 0.0)) throw MeshTopologyError(t, name + " has zero area");
    el.area = area;
    // Counter-clockwise traversal along t_E means n_E points inward.
    for (int i = 0; i < ne; ++i) {
      const Edge& e = mesh.edges_[el.edges[i]];
      const int expected = (e.vertices[0] == el.vertices[i]) ? -1 : 1;
      if (el.orientations[i] != expected) {
        throw MeshTopologyError(t, name + " has a wrong orientation sign on edge " + std::to_string(e.id));
      }
    }
    double diam = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      for (std::size_t j = i + 1; j < loop.size(); ++j) diam = std::max(diam, (loop[i] - loop[j]).norm());
    }
    el.diameter = diam;
  }

  std::vector<Point> centers(nt, Point::Constant(std::numeric_limits<double>::quiet_NaN()));
  for (int t = 0; t < nt && t < static_cast<int>(element_centers.size()); ++t) centers[t] = element_centers[t];
  mesh.finalize(centers);
  return mesh;
}

void Mesh::finalize(const std::vector<Point>& centers) {
  for (auto& e : edges_) e.elements.clear();
  for (const auto& el : elements_) {
    for (int e : el.edges) {
      edges_[e].elements.push_back(el.id);
      if (edges_[e].elements.size() > 2) {
        throw MeshTopologyError(e, "edge " + std::to_string(e) + " belongs to more than two elements");
      }
    }
  }
  boundary_vertex_.assign(vertices_.size(), false);
  for (auto& e : edges_) {
    if (e.elements.empty()) throw MeshTopologyError(e.id, "edge " + std::to_string(e.id) + " belongs to no element");
    e.boundary = e.elements.size() == 1;
    if (e.boundary) {
      boundary_vertex_[e.vertices[0]] = true;
      boundary_vertex_[e.vertices[1]] = true;
    }
  }
  h_ = 0.0;
  for (auto& el : elements_) {
    std::vector<Point> loop;
    for (int v : el.vertices) loop.push_back(vertices_[v].x);
    const Point& given = centers[el.id];
    el.center = std::isnan(given.x()) ? centroid(loop) : given;
    h_ = std::max(h_, el.diameter);
  }
}

Mesh Mesh::from_polygons(std::vector<Point> vertices, const std::vector<std::vector<int>>& polygons) {
  std::vector<std::array<int, 2>> edges;
  std::map<std::pair<int, int>, int> index;
  std::vector<std::vector<int>> elem_edges, elem_orient;
  for (const auto& poly : polygons) {
    std::vector<int> ee, oo;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
      const int a = poly[i], b = poly[(i + 1) % n];
      const auto key = std::pair{std::min(a, b), std::max(a, b)};
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, static_cast<int>(edges.size())).first;
        edges.push_back({key.first, key.second});
      }
      ee.push_back(it->second);
      oo.push_back(a < b ? -1 : 1);
    }
    elem_edges.push_back(std::move(ee));
    elem_orient.push_back(std::move(oo));
  }
  return from_topology(std::move(vertices), std::move(edges), std::move(elem_edges), std::move(elem_orient));
}

int Mesh::local_edge_index(int element, int edge) const {
  const auto& es = elements_[element].edges;
  const auto it = std::find(es.begin(), es.end(), edge);
  return it == es.end() ? -1 : static_cast<int>(it - es.begin());
}

bool Mesh::operator==(const Mesh& o) const {
  if (n_vertices() != o.n_vertices() || n_edges() != o.n_edges() || n_elements() != o.n_elements()) return false;
  for (int i = 0; i < n_vertices(); ++i) {
    if (vertices_[i].x != o.vertices_[i].x) return false;
  }
  for (int i = 0; i < n_edges(); ++i) {
    if (edges_[i].vertices != o.edges_[i].vertices) return false;
  }
  for (int i = 0; i < n_elements(); ++i) {
    const auto& a = elements_[i];
    const auto& b = o.elements_[i];
    if (a.edges != b.edges || a.orientations != b.orientations || a.center != b.center) return false;
  }
  return true;
}

namespace {

// Vertex pool merging coincident points, used by the structured builders.
class VertexPool {
 public:
  int add(Point p) {
    for (int c = 0; c < 2; ++c) {
      if (std::abs(p[c]) < 1e-13) p[c] = 0.0;
      if (std::abs(p[c] - 1.0) < 1e-13) p[c] = 1.0;
    }
    const auto key = std::pair{std::llround(p.x() * 1e9), std::llround(p.y() * 1e9)};
    const auto [it, inserted] = ids_.emplace(key, static_cast<int>(points_.size()));
    if (inserted) points_.push_back(p);
    return it->second;
  }
  std::vector<Point> points() const { return points_; }

 private:
  std::map<std::pair<long long, long long>, int> ids_;
  std::vector<Point> points_;
};

using Polygon = std::vector<Point>;

// Clips a convex polygon to the half plane sign * (p[axis] - value) >= 0.
Polygon clip(const Polygon& poly, int axis, double value, double sign) {
  Polygon out;
  const auto f = [&](const Point& p) { return sign * (p[axis] - value); };
  constexpr double tol = 1e-14;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& cur = poly[i];
    const Point& nxt = poly[(i + 1) % n];
    if (f(cur) >= -tol) out.push_back(cur);
    const bool crosses = (f(cur) > tol && f(nxt) < -tol) || (f(cur) < -tol && f(nxt) > tol);
    if (crosses) {
      const double s = (value - cur[axis]) / (nxt[axis] - cur[axis]);
      Point p = cur + s * (nxt - cur);
      p[axis] = value;
      out.push_back(p);
    }
  }
  Polygon dedup;
  for (const auto& p : out) {
    if (dedup.empty() || (p - dedup.back()).norm() > 1e-13) dedup.push_back(p);
  }
  while (dedup.size() > 1 && (dedup.front() - dedup.back()).norm() <= 1e-13) dedup.pop_back();
  return dedup;
}

Mesh build_cartesian(int n) {
  VertexPool pool;
  std::vector<std::vector<int>> polys;
  const auto pt = [n](int i, int j) { return Point(double(i) / n, double(j) / n); };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) pool.add(pt(i, j));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      polys.push_back({pool.add(pt(i, j)), pool.add(pt(i + 1, j)), pool.add(pt(i + 1, j + 1)), pool.add(pt(i, j + 1))});
    }
  }
  return Mesh::from_polygons(pool.points(), polys);
}

Mesh build_triangular(int n) {
  VertexPool pool;
  std::vector<std::vector<int>> polys;
  const auto pt = [n](int i, int j) { return Point(double(i) / n, double(j) / n); };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) pool.add(pt(i, j));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = pool.add(pt(i, j)), b = pool.add(pt(i + 1, j));
      const int c = pool.add(pt(i + 1, j + 1)), d = pool.add(pt(i, j + 1));
      polys.push_back({a, b, c});
      polys.push_back({a, c, d});
    }
  }
  return Mesh::from_polygons(pool.points(), polys);
}

// Flat-top hexagons with column spacing 1/n and rows chosen so that the square
// sides run through hexagon centres or along hexagon edges.
Mesh build_hexagonal(int n) {
  const int m = n;
  const int rows = std::max(1, static_cast<int>(std::lround(std::sqrt(3.0) * n / 2.0)));
  VertexPool pool;
  std::vector<std::vector<int>> polys;
  // Coordinates as integer numerators over fixed denominators so that points on
  // the square sides are exact.
  const auto x_at = [m](int num) { return double(num) / (3.0 * m); };
  const auto y_at = [rows](int num) { return double(num) / (2.0 * rows); };
  for (int j = -1; j <= m + 1; ++j) {
    const bool odd = (j % 2 != 0);
    for (int i = -1; i <= rows + 1; ++i) {
      const int cy2 = odd ? 2 * i + 1 : 2 * i;  // centre in units of 1/(2 rows)
      const int cx3 = 3 * j;                   // centre in units of 1/(3 m)
      Polygon hex = {Point(x_at(cx3 + 2), y_at(cy2)),     Point(x_at(cx3 + 1), y_at(cy2 + 1)),
                     Point(x_at(cx3 - 1), y_at(cy2 + 1)), Point(x_at(cx3 - 2), y_at(cy2)),
                     Point(x_at(cx3 - 1), y_at(cy2 - 1)), Point(x_at(cx3 + 1), y_at(cy2 - 1))};
      hex = clip(hex, 0, 0.0, 1.0);
      hex = clip(hex, 0, 1.0, -1.0);
      hex = clip(hex, 1, 0.0, 1.0);
      hex = clip(hex, 1, 1.0, -1.0);
      if (hex.size() < 3 || signed_area(hex) < 1e-12) continue;
      std::vector<int> ids;
      for (const auto& p : hex) ids.push_back(pool.add(p));
      polys.push_back(std::move(ids));
    }
  }
  return Mesh::from_polygons(pool.points(), polys);
}

}  // namespace

Mesh build_structured_mesh(MeshFamily family, int n) {
  if (n < 1) throw std::invalid_argument("subdivision count must be positive");
  switch (family) {
    case MeshFamily::cartesian: return build_cartesian(n);
    case MeshFamily::triangular: return build_triangular(n);
    case MeshFamily::hexagonal: return build_hexagonal(n);
  }
  throw std::invalid_argument("unknown mesh family");
}

Mesh build_regular_polygon(int n_sides) {
  if (n_sides < 3) throw std::invalid_argument("a polygon needs at least three sides");
  std::vector<Point> pts;
  std::vector<int> loop;
  for (int i = 0; i < n_sides; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / n_sides;
    pts.emplace_back(0.5 * std::cos(theta), 0.5 * std::sin(theta));
    loop.push_back(i);
  }
  return Mesh::from_polygons(std::move(pts), {loop});
}

MeshDiagnostics mesh_diagnostics(const Mesh& mesh) {
  MeshDiagnostics d;
  d.h = mesh.h();
  d.min_element_diameter = std::numeric_limits<double>::infinity();
  for (const auto& el : mesh.elements()) {
    d.min_element_diameter = std::min(d.min_element_diameter, el.diameter);
    d.max_element_diameter = std::max(d.max_element_diameter, el.diameter);
    d.max_edges_per_element = std::max(d.max_edges_per_element, static_cast<int>(el.edges.size()));
    d.total_area += el.area;
    for (std::size_t i = 0; i < el.edges.size(); ++i) {
      const Edge& e = mesh.edge(el.edges[i]);
      if (el.orientations[i] * e.normal.dot(e.midpoint - el.center) <= 0.0) {
        d.orientation_ok = false;
        d.violations.push_back("element " + std::to_string(el.id) + ": omega n_E does not point outward on edge " +
                               std::to_string(e.id));
      }
    }
  }
  for (const auto& e : mesh.edges()) {
    d.max_frame_defect = std::max(d.max_frame_defect, std::abs(cross(e.tangent, e.normal) - 1.0));
    if (e.boundary) {
      ++d.boundary_edge_count;
      continue;
    }
    int sum = 0;
    for (int t : e.elements) sum += mesh.element(t).orientations[mesh.local_edge_index(t, e.id)];
    if (sum != 0) {
      d.orientation_ok = false;
      d.violations.push_back("edge " + std::to_string(e.id) + ": orientation signs do not cancel");
    }
  }
  return d;
}

}  // namespace ddr
