#include "ddr/cli.hpp"

#include "ddr/parallel.hpp"
#include "ddr/scheme.hpp"
#include "ddr/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>

namespace ddr {

namespace {

constexpr const char* synopsis =
    "usage: ddr <mesh|verify|dofs|solve|convergence> [flags]\n"
    "  mesh gen            --family F --n N [--out FILE]\n"
    "  verify exactness    --family F --n N --k K [--bc none|homogeneous]\n"
    "  verify commutation  --family F --n N --k K\n"
    "  verify stability    --family F --n N[,N...] --k K\n"
    "  dofs table          [--shape triangle|quadrangle|pentagon|hexagon] [--k K]\n"
    "  dofs count          --family F --n N --k K [--variant full|serendipity] [--bc none|homogeneous]\n"
    "  solve               --family F --n N --k K\n"
    "  convergence         --family F --k K --n N[,N...] [--out FILE]\n"
    "common flags: --threads T (default: DDR_THREADS, then all cores), --mesh FILE instead of --family/--n,\n"
    "              --quadrature-degree D, --format table|kv\n";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MeshSource {
  std::string family = "cartesian";
  std::vector<int> n{4};
  std::string file;

  void add_flags(CLI::App* app, bool many_n = false) {
    app->add_option("--family", family, "cartesian, triangular or hexagonal")->capture_default_str();
    if (many_n)
      app->add_option("--n", n, "subdivisions per side (comma separated list)")->delimiter(',')->capture_default_str();
    else
      app->add_option("--n", n, "subdivisions per side")->expected(1)->capture_default_str();
    app->add_option("--mesh", file, "mesh file (overrides --family/--n)");
  }

  std::string name(int nn) const { return file.empty() ? fmt::format("{}-{}", family, nn) : file; }

  Mesh build(int nn) const {
    if (!file.empty()) return load_mesh(file);
    if (nn < 1) throw UsageError("--n must be at least 1");
    return build_structured_mesh(parse_mesh_family(family), nn);
  }
};

struct Common {
  int k = 0;
  int threads = 0;
  int quadrature_degree = 0;
  std::string format = "table";

  void add_flags(CLI::App* app, bool with_k = true) {
    if (with_k) app->add_option("--k", k, "polynomial degree")->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--threads", threads, "worker threads")->check(CLI::NonNegativeNumber);
    app->add_option("--quadrature-degree", quadrature_degree, "degree of rules for non-polynomial integrands")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--format", format, "table or kv")->check(CLI::IsMember({"table", "kv"}))->capture_default_str();
  }
};

int shape_sides(const std::string& s) {
  static const std::map<std::string, int> shapes{{"triangle", 3}, {"quadrangle", 4}, {"pentagon", 5}, {"hexagon", 6}};
  const auto it = shapes.find(s);
  if (it == shapes.end()) throw UsageError("unknown shape '" + s + "'");
  return it->second;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete rot-rot complex on polygonal meshes"};
  app.require_subcommand(1);

  MeshSource src;
  Common opt;
  std::string out_file, bc = "none", variant = "full";
  std::vector<std::string> shapes;
  std::vector<int> k_list{0, 1, 2, 3, 4};

  auto* mesh = app.add_subcommand("mesh", "mesh utilities")->require_subcommand(1);
  auto* mesh_gen = mesh->add_subcommand("gen", "write a structured mesh");
  src.add_flags(mesh_gen);
  mesh_gen->add_option("--out", out_file, "output file (stdout if omitted)");

  auto* verify = app.add_subcommand("verify", "certify structural properties")->require_subcommand(1);
  auto* v_exact = verify->add_subcommand("exactness", "ranks of the gradient and rotor");
  src.add_flags(v_exact);
  opt.add_flags(v_exact);
  v_exact->add_option("--bc", bc, "none or homogeneous")->capture_default_str();
  auto* v_comm = verify->add_subcommand("commutation", "commuting interpolators");
  src.add_flags(v_comm);
  opt.add_flags(v_comm);
  double tol_poly = 1e-10, tol_smooth = 1e-8;
  v_comm->add_option("--tol-poly", tol_poly, "tolerance for polynomial fields")->capture_default_str();
  v_comm->add_option("--tol-smooth", tol_smooth, "tolerance for non-polynomial fields")->capture_default_str();
  auto* v_stab = verify->add_subcommand("stability", "Poincare and inf-sup constants under refinement");
  src.add_flags(v_stab, true);
  opt.add_flags(v_stab);
  double floor_ratio = 0.25;
  v_stab->add_option("--floor", floor_ratio, "minimum allowed ratio to the coarsest value")->capture_default_str();

  auto* dofs = app.add_subcommand("dofs", "degree-of-freedom counts")->require_subcommand(1);
  auto* d_table = dofs->add_subcommand("table", "local counts on regular polygons, full and serendipity");
  d_table->add_option("--shape", shapes, "triangle, quadrangle, pentagon or hexagon (repeatable)");
  d_table->add_option("--k", k_list, "polynomial degree(s)")->delimiter(',');
  auto* d_count = dofs->add_subcommand("count", "global dimensions on a mesh");
  src.add_flags(d_count);
  opt.add_flags(d_count);
  d_count->add_option("--variant", variant, "full or serendipity")->capture_default_str();
  d_count->add_option("--bc", bc, "none or homogeneous")->capture_default_str();

  auto* solve_cmd = app.add_subcommand("solve", "solve the quad-rot benchmark on one mesh");
  src.add_flags(solve_cmd);
  opt.add_flags(solve_cmd);

  auto* conv = app.add_subcommand("convergence", "convergence study of the quad-rot benchmark");
  src.add_flags(conv, true);
  opt.add_flags(conv);
  conv->add_option("--out", out_file, "CSV file; rates go to the same name with extension .rates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << synopsis;
    return 2;
  }

  try {
    const int threads = resolve_threads(opt.threads);
    const bool kv = opt.format == "kv";

    if (mesh_gen->parsed()) {
      const Mesh m = src.build(src.n.front());
      if (out_file.empty())
        out << format_mesh(m);
      else
        save_mesh(m, out_file);
      const MeshDiagnostics d = mesh_diagnostics(m);
      err << fmt::format("{} elements, {} edges, {} vertices, h = {:.6g}\n", m.n_elements(), m.n_edges(),
                         m.n_vertices(), d.h);
      return 0;
    }

    if (v_exact->parsed()) {
      const Mesh m = src.build(src.n.front());
      const ExactnessReport r = check_exactness(m, opt.k, parse_bc(bc), src.name(src.n.front()), threads);
      out << (kv ? format_key_value(r) : format_table(r));
      return r.passed() ? 0 : 1;
    }

    if (v_comm->parsed()) {
      const Mesh m = src.build(src.n.front());
      const FieldSuite suite = default_field_suite(opt.k);
      const auto res = check_commutation(m, opt.k, suite, threads);
      out << (kv ? format_key_value(res) : format_table(res));
      bool ok = true;
      for (const auto& c : res) {
        ok = ok && c.residual < (c.polynomial ? tol_poly : tol_smooth);
      }
      if (!kv) out << (ok ? "PASS\n" : "FAIL\n");
      return ok ? 0 : 1;
    }

    if (v_stab->parsed()) {
      std::vector<StabilityReport> reps;
      for (int nn : src.n) {
        reps.push_back(estimate_poincare(src.build(nn), opt.k, src.name(nn), threads));
        out << (kv ? format_key_value(reps.back()) : format_table(reps.back()));
      }
      bool ok = std::all_of(reps.begin(), reps.end(), [](const auto& r) { return r.converged; });
      for (const auto& r : reps) {
        ok = ok && r.lambda_P >= floor_ratio * reps.front().lambda_P && r.gamma_h >= floor_ratio * reps.front().gamma_h;
      }
      if (!kv) out << (ok ? "PASS\n" : "FAIL\n");
      return ok ? 0 : 1;
    }

    if (d_table->parsed()) {
      if (shapes.empty()) shapes = {"triangle", "quadrangle", "pentagon", "hexagon"};
      out << fmt::format("{:<12}{:>4}  {:>13}  {:>13}  {:>13}\n", "shape", "k", "V full/ser", "Sigma full/ser",
                         "W full/ser");
      for (const auto& s : shapes) {
        const Mesh poly = build_regular_polygon(shape_sides(s));
        for (int k : k_list) {
          if (k < 0) throw UsageError("--k must be nonnegative");
          std::string row = fmt::format("{:<12}{:>4}", s, k);
          for (SpaceKind sp : {SpaceKind::V, SpaceKind::Sigma, SpaceKind::W}) {
            const auto [full, ser] = local_dof_counts(poly, k, sp);
            row += fmt::format("  {:>13}", fmt::format("{}/{}", full, ser));
          }
          out << row << "\n";
        }
      }
      return 0;
    }

    if (d_count->parsed()) {
      const Mesh m = src.build(src.n.front());
      for (SpaceKind sp : {SpaceKind::V, SpaceKind::Sigma, SpaceKind::W}) {
        const SpaceLayout l = space_layout(m, opt.k, sp, parse_variant(variant), parse_bc(bc));
        out << (kv ? fmt::format("dim_{}={}\n", to_string(sp), l.dim) : fmt::format("{:<6} {}\n", to_string(sp), l.dim));
      }
      return 0;
    }

    if (solve_cmd->parsed()) {
      const int nn = src.n.front();
      const Mesh m = src.build(nn);
      const DiscreteComplex dc(m, opt.k, threads, opt.quadrature_degree);
      const ManufacturedSolution ms = quad_rot_benchmark();
      const BoundaryData bd{{ms.u, ms.rot_u}, ms.p};
      const Solution sol = solve(dc, assemble(dc, ms.f, &bd));
      const ErrorRecord e = error_report(dc, sol, {ms.u, ms.rot_u}, ms.p);
      if (kv) {
        out << fmt::format("mesh={}\nk={}\ndim_Sigma0={}\ndim_V0={}\n", src.name(nn), opt.k,
                           dc.layout(SpaceKind::Sigma, BoundaryCondition::homogeneous).dim,
                           dc.layout(SpaceKind::V, BoundaryCondition::homogeneous).dim);
        out << fmt::format("MeshSize={:.17g}\n", e.h);
        const auto errs = e.errors();
        for (int c = 0; c < 4; ++c) out << fmt::format("{}={:.17g}\n", error_names[c], errs[c]);
        out << fmt::format("residual={:.17g}\ndivergence={:.17g}\n", sol.residual, sol.divergence);
      } else {
        out << fmt::format("mesh {}  k={}  h={:.6g}\n", src.name(nn), opt.k, e.h);
        const auto errs = e.errors();
        for (int c = 0; c < 4; ++c) out << fmt::format("  {:<12}{:.6e}\n", error_names[c], errs[c]);
        out << fmt::format("  residual    {:.3e}\n  divergence  {:.3e}\n", sol.residual, sol.divergence);
      }
      return sol.divergence < 1e-9 ? 0 : 1;
    }

    if (conv->parsed()) {
      if (!src.file.empty()) throw UsageError("convergence needs --family and --n, not --mesh");
      for (int nn : src.n)
        if (nn < 1) throw UsageError("--n values must be at least 1");
      const auto rows =
          convergence_study(parse_mesh_family(src.family), opt.k, src.n, threads, opt.quadrature_degree);
      std::vector<ErrorRecord> rec;
      bool ok = true;
      for (const auto& r : rows) {
        rec.push_back(r.errors);
        ok = ok && r.divergence < 1e-9;
      }
      if (!out_file.empty()) {
        write_csv(out_file, rec);
        err << fmt::format("wrote {} and {}\n", out_file, rates_path(out_file).string());
      }
      out << format_csv(rec);
      if (rec.size() > 1) out << "\n" << format_rates(rec);
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << synopsis;
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n" << synopsis;
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << synopsis;
  return 2;
}

}  // namespace ddr
