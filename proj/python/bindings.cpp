#include "ddr/mesh.hpp"
#include "ddr/parallel.hpp"
#include "ddr/scheme.hpp"
#include "ddr/spaces.hpp"
#include "ddr/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace ddr;

namespace {

py::dict rank_dict(const RankInfo& r) {
  py::dict d;
  d["rank"] = r.rank;
  d["sigma_max"] = r.sigma_max;
  d["gap"] = r.gap;
  d["threshold"] = r.threshold;
  d["conclusive"] = r.conclusive;
  return d;
}

py::dict exactness(const Mesh& mesh, int k, const std::string& bc, int threads) {
  ExactnessReport r;
  {
    py::gil_scoped_release release;
    r = check_exactness(mesh, k, parse_bc(bc), "", resolve_threads(threads));
  }
  py::dict d;
  d["k"] = r.k;
  d["bc"] = to_string(r.bc);
  d["dim_V"] = r.dim_V;
  d["dim_Sigma"] = r.dim_Sigma;
  d["dim_W"] = r.dim_W;
  d["target_dim_W"] = r.target_dim_W;
  d["rank_G"] = rank_dict(r.rank_G);
  d["rank_R"] = rank_dict(r.rank_R);
  d["nullity_G"] = r.nullity_G;
  d["nullity_R"] = r.nullity_R;
  d["composition_norm"] = r.composition_norm;
  d["mean_residual"] = r.mean_residual;
  d["passed"] = r.passed();
  return d;
}

py::list commutation(const Mesh& mesh, int k, int threads) {
  std::vector<CommutationResult> res;
  {
    py::gil_scoped_release release;
    res = check_commutation(mesh, k, default_field_suite(k), resolve_threads(threads));
  }
  py::list out;
  for (const auto& c : res) {
    py::dict d;
    d["field"] = c.field;
    d["kind"] = c.kind;
    d["residual"] = c.residual;
    d["polynomial"] = c.polynomial;
    out.append(d);
  }
  return out;
}

py::dict stability(const Mesh& mesh, int k, int threads) {
  StabilityReport r;
  {
    py::gil_scoped_release release;
    r = estimate_poincare(mesh, k, "", resolve_threads(threads));
  }
  py::dict d;
  d["h"] = r.h;
  d["lambda_P"] = r.lambda_P;
  d["gamma_h"] = r.gamma_h;
  d["norm_lower"] = r.norm_lower;
  d["norm_upper"] = r.norm_upper;
  d["converged"] = r.converged;
  return d;
}

py::dict errors_dict(const ErrorRecord& e) {
  py::dict d;
  d["MeshSize"] = e.h;
  const auto v = e.errors();
  for (int c = 0; c < 4; ++c) d[error_names[c]] = v[c];
  return d;
}

py::dict solve_benchmark(const Mesh& mesh, int k, int threads) {
  ErrorRecord err;
  Solution sol;
  {
    py::gil_scoped_release release;
    const ManufacturedSolution ms = quad_rot_benchmark();
    const BoundaryData bd{{ms.u, ms.rot_u}, ms.p};
    const DiscreteComplex dc(mesh, k, resolve_threads(threads));
    sol = solve(dc, assemble(dc, ms.f, &bd));
    err = error_report(dc, sol, {ms.u, ms.rot_u}, ms.p);
  }
  py::dict d = errors_dict(err);
  d["residual"] = sol.residual;
  d["divergence"] = sol.divergence;
  d["dim_Sigma"] = static_cast<int>(sol.u.values.size());
  d["dim_V"] = static_cast<int>(sol.p.values.size());
  return d;
}

py::list study(const std::string& family, int k, const std::vector<int>& ns, int threads) {
  std::vector<StudyRow> rows;
  {
    py::gil_scoped_release release;
    rows = convergence_study(parse_mesh_family(family), k, ns, threads);
  }
  py::list out;
  for (const auto& r : rows) {
    py::dict d = errors_dict(r.errors);
    d["n"] = r.n;
    d["residual"] = r.residual;
    d["divergence"] = r.divergence;
    out.append(d);
  }
  return out;
}

std::vector<ErrorRecord> records_from(const py::list& rows) {
  std::vector<ErrorRecord> rec;
  for (const auto& item : rows) {
    const auto d = item.cast<py::dict>();
    rec.push_back({d["MeshSize"].cast<double>(), d["ErrUL2"].cast<double>(), d["ErrURotRot"].cast<double>(),
                   d["ErrPL2"].cast<double>(), d["ErrPGrad"].cast<double>()});
  }
  return rec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Serendipity discrete de Rham complex for the quad-rot problem";

  py::register_exception<SolveError>(m, "SolveError", PyExc_RuntimeError);

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("n_vertices", &Mesh::n_vertices)
      .def_property_readonly("n_edges", &Mesh::n_edges)
      .def_property_readonly("n_elements", &Mesh::n_elements)
      .def_property_readonly("h", &Mesh::h)
      .def("vertices", [](const Mesh& mesh) {
        std::vector<std::array<double, 2>> out;
        for (const auto& v : mesh.vertices()) out.push_back({v.x.x(), v.x.y()});
        return out;
      })
      .def("element_vertices", [](const Mesh& mesh, int t) { return mesh.element(t).vertices; }, py::arg("element"))
      .def("to_text", &format_mesh)
      .def("save", [](const Mesh& mesh, const std::filesystem::path& p) { save_mesh(mesh, p); }, py::arg("path"))
      .def("__eq__", &Mesh::operator==)
      .def("__repr__", [](const Mesh& mesh) {
        return "<Mesh elements=" + std::to_string(mesh.n_elements()) + " edges=" + std::to_string(mesh.n_edges()) +
               " vertices=" + std::to_string(mesh.n_vertices()) + ">";
      });

  m.def("structured_mesh", [](const std::string& family, int n) { return build_structured_mesh(parse_mesh_family(family), n); },
        py::arg("family"), py::arg("n"));
  m.def("regular_polygon", &build_regular_polygon, py::arg("n_sides"));
  m.def("load_mesh", [](const std::filesystem::path& p) { return load_mesh(p); }, py::arg("path"));
  m.def("parse_mesh", &parse_mesh, py::arg("text"));

  m.def("local_dof_counts",
        [](const Mesh& polygon, int k, const std::string& space) { return local_dof_counts(polygon, k, parse_space(space)); },
        py::arg("polygon"), py::arg("k"), py::arg("space"),
        "(full, serendipity) DOF counts of a single-element mesh.");
  m.def("space_dim",
        [](const Mesh& mesh, int k, const std::string& space, const std::string& variant, const std::string& bc) {
          return space_layout(mesh, k, parse_space(space), parse_variant(variant), parse_bc(bc)).dim;
        },
        py::arg("mesh"), py::arg("k"), py::arg("space"), py::arg("variant") = "serendipity", py::arg("bc") = "none");

  m.def("check_exactness", &exactness, py::arg("mesh"), py::arg("k"), py::arg("bc") = "none", py::arg("threads") = 1);
  m.def("check_commutation", &commutation, py::arg("mesh"), py::arg("k"), py::arg("threads") = 1);
  m.def("estimate_stability", &stability, py::arg("mesh"), py::arg("k"), py::arg("threads") = 1);
  m.def("solve_benchmark", &solve_benchmark, py::arg("mesh"), py::arg("k"), py::arg("threads") = 0,
        "Solves the manufactured benchmark and returns the four error norms.");
  m.def("convergence_study", &study, py::arg("family"), py::arg("k"), py::arg("n"), py::arg("threads") = 0);
  m.def("format_csv", [](const py::list& rows) { return format_csv(records_from(rows)); }, py::arg("rows"));
  m.def("format_rates", [](const py::list& rows) { return format_rates(records_from(rows)); }, py::arg("rows"));
}
