// Polygonal meshes of planar domains: topology, geometry, structured families,
// a plain-text file format, and regularity diagnostics.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddr {

using Point = Eigen::Vector2d;

/// Raised when a mesh file cannot be parsed. `line()` is 1-based.
class MeshParseError : public std::runtime_error {
 public:
  MeshParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised when a mesh is topologically inconsistent (open loop, duplicate edge,
/// wrong orientation sign). `entity()` is the offending element or edge id.
class MeshTopologyError : public std::runtime_error {
 public:
  MeshTopologyError(int entity, const std::string& what);
  int entity() const { return entity_; }

 private:
  int entity_;
};

struct Vertex {
  int id = 0;
  Point x = Point::Zero();
};

struct Edge {
  int id = 0;
  std::array<int, 2> vertices{0, 0};
  Point tangent = Point::Zero();  // from vertices[0] to vertices[1]
  Point normal = Point::Zero();   // det[t n] = +1
  Point midpoint = Point::Zero();
  double length = 0.0;
  bool boundary = false;
  std::vector<int> elements;  // incident elements, at most two
};

struct Element {
  int id = 0;
  std::vector<int> edges;        // counter-clockwise loop
  std::vector<int> orientations; // omega_TE: +1 if omega n_E points outward
  std::vector<int> vertices;     // vertices[i] is the start of edges[i] in the loop
  Point center = Point::Zero();  // interior point x_T
  double diameter = 0.0;
  double area = 0.0;
};

enum class MeshFamily { cartesian, triangular, hexagonal };

MeshFamily parse_mesh_family(const std::string& name);
std::string to_string(MeshFamily family);

class Mesh {
 public:
  Mesh() = default;

  /// Builds a mesh from raw topology. Each element lists its edges in loop
  /// order with the relative orientations; an empty `centers` entry (NaN) asks
  /// for the centroid. Edge tangents run from the first to the second vertex.
  static Mesh from_topology(std::vector<Point> vertices,
                            std::vector<std::array<int, 2>> edges,
                            std::vector<std::vector<int>> element_edges,
                            std::vector<std::vector<int>> element_orientations,
                            std::vector<Point> element_centers = {});

  /// Builds a mesh from polygons given as counter-clockwise vertex loops.
  /// Edges are created on the fly with tangents from lower to higher vertex id.
  static Mesh from_polygons(std::vector<Point> vertices,
                            const std::vector<std::vector<int>>& polygons);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Element>& elements() const { return elements_; }

  const Vertex& vertex(int i) const { return vertices_[i]; }
  const Edge& edge(int i) const { return edges_[i]; }
  const Element& element(int i) const { return elements_[i]; }

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int n_elements() const { return static_cast<int>(elements_.size()); }

  /// Maximum element diameter.
  double h() const { return h_; }

  const std::vector<bool>& boundary_vertices() const { return boundary_vertex_; }
  bool is_boundary_vertex(int v) const { return boundary_vertex_[v]; }

  /// Local position of an edge within an element loop, or -1.
  int local_edge_index(int element, int edge) const;

  bool operator==(const Mesh& other) const;

 private:
  void finalize(const std::vector<Point>& centers);

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<Element> elements_;
  std::vector<bool> boundary_vertex_;
  double h_ = 0.0;
};

/// Structured meshes of the unit square. `n` is the number of subdivisions
/// along each side (see the README for the hexagonal construction).
Mesh build_structured_mesh(MeshFamily family, int n);

/// Single-element mesh of a regular polygon with `n_sides` sides and unit
/// diameter, used for per-element DOF counts.
Mesh build_regular_polygon(int n_sides);

Mesh load_mesh(const std::filesystem::path& path);
Mesh parse_mesh(const std::string& text);
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string format_mesh(const Mesh& mesh);

struct MeshDiagnostics {
  double h = 0.0;
  double min_element_diameter = 0.0;
  double max_element_diameter = 0.0;
  int max_edges_per_element = 0;
  int boundary_edge_count = 0;
  double total_area = 0.0;
  /// Largest |det[t n] - 1| over edges.
  double max_frame_defect = 0.0;
  bool orientation_ok = true;
  std::vector<std::string> violations;
};

MeshDiagnostics mesh_diagnostics(const Mesh& mesh);

}  // namespace ddr
