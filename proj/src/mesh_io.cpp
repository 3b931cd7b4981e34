#include "ddr/mesh.hpp"

#include <fmt/format.h>

#include <fstream>
#include <limits>
#include <sstream>

namespace ddr {

namespace {

struct LineReader {
  std::istringstream in;
  int line_no = 0;

  explicit LineReader(const std::string& text) : in(text) {}

  // Next non-blank line with '#' comments stripped.
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_no;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      if (raw.find_first_not_of(" \t\r") != std::string::npos) {
        out = raw;
        return true;
      }
    }
    return false;
  }

  std::string require(const char* what) {
    std::string s;
    if (!next(s)) throw MeshParseError(line_no + 1, std::string("unexpected end of file, expected ") + what);
    return s;
  }

  int header(const std::string& keyword) {
    std::istringstream ls(require(keyword.c_str()));
    std::string word;
    long long count = -1;
    if (!(ls >> word >> count) || word != keyword || count < 0) {
      throw MeshParseError(line_no, "expected '" + keyword + " <count>'");
    }
    return static_cast<int>(count);
  }
};

}  // namespace

Mesh parse_mesh(const std::string& text) {
  LineReader reader(text);
  std::vector<Point> vertices;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::vector<int>> elem_edges, elem_orient;
  std::vector<Point> centers;

  const int nv = reader.header("VERTICES");
  for (int i = 0; i < nv; ++i) {
    std::istringstream ls(reader.require("a vertex"));
    double x = 0, y = 0;
    std::string extra;
    if (!(ls >> x >> y) || (ls >> extra)) throw MeshParseError(reader.line_no, "expected '<x1> <x2>'");
    vertices.emplace_back(x, y);
  }
  const int ne = reader.header("EDGES");
  for (int i = 0; i < ne; ++i) {
    std::istringstream ls(reader.require("an edge"));
    int a = 0, b = 0;
    std::string extra;
    if (!(ls >> a >> b) || (ls >> extra)) throw MeshParseError(reader.line_no, "expected '<v0> <v1>'");
    if (a < 0 || b < 0 || a >= nv || b >= nv) throw MeshParseError(reader.line_no, "vertex id out of range");
    edges.push_back({a, b});
  }
  const int nt = reader.header("ELEMENTS");
  for (int t = 0; t < nt; ++t) {
    std::istringstream ls(reader.require("an element"));
    int n = 0;
    if (!(ls >> n) || n < 3) throw MeshParseError(reader.line_no, "expected an edge count of at least 3");
    std::vector<int> ee(n), oo(n);
    for (int i = 0; i < n; ++i) {
      if (!(ls >> ee[i] >> oo[i])) throw MeshParseError(reader.line_no, "expected '<edge> <sign>' pairs");
      if (ee[i] < 0 || ee[i] >= ne) throw MeshParseError(reader.line_no, "edge id out of range");
    }
    std::vector<double> rest;
    for (double v; ls >> v;) rest.push_back(v);
    if (!ls.eof()) throw MeshParseError(reader.line_no, "trailing garbage");
    if (rest.size() == 2) {
      centers.emplace_back(rest[0], rest[1]);
    } else if (rest.empty()) {
      centers.push_back(Point::Constant(std::numeric_limits<double>::quiet_NaN()));
    } else {
      throw MeshParseError(reader.line_no, "optional interior point needs exactly two coordinates");
    }
    elem_edges.push_back(std::move(ee));
    elem_orient.push_back(std::move(oo));
  }
  if (std::string extra; reader.next(extra)) throw MeshParseError(reader.line_no, "unexpected content after elements");
  return Mesh::from_topology(std::move(vertices), std::move(edges), std::move(elem_edges), std::move(elem_orient),
                             std::move(centers));
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_mesh(buffer.str());
}

std::string format_mesh(const Mesh& mesh) {
  std::string out = fmt::format("VERTICES {}\n", mesh.n_vertices());
  for (const auto& v : mesh.vertices()) out += fmt::format("{:.17g} {:.17g}\n", v.x.x(), v.x.y());
  out += fmt::format("EDGES {}\n", mesh.n_edges());
  for (const auto& e : mesh.edges()) out += fmt::format("{} {}\n", e.vertices[0], e.vertices[1]);
  out += fmt::format("ELEMENTS {}\n", mesh.n_elements());
  for (const auto& el : mesh.elements()) {
    out += fmt::format("{}", el.edges.size());
    for (std::size_t i = 0; i < el.edges.size(); ++i) out += fmt::format(" {} {}", el.edges[i], el.orientations[i]);
    out += fmt::format(" {:.17g} {:.17g}\n", el.center.x(), el.center.y());
  }
  return out;
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file " + path.string());
  out << format_mesh(mesh);
}

}  // namespace ddr
