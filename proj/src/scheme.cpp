#include "ddr/scheme.hpp"

#include "ddr/parallel.hpp"

#include <fmt/format.h>

#include <Eigen/SparseLU>

#include <cmath>
#include <fstream>
#include <numbers>

namespace ddr {

using Eigen::MatrixXd;
using Eigen::VectorXd;

ManufacturedSolution quad_rot_benchmark() {
  using std::numbers::pi;
  ManufacturedSolution ms;
  ms.u = [](const Point& x) {
    const double s = std::sin(pi * (x.x() + x.y()));
    return Point(-s, s);
  };
  ms.rot_u = [](const Point& x) { return 2 * pi * std::cos(pi * (x.x() + x.y())); };
  ms.p = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  ms.f = [](const Point& x) {
    const double s = std::sin(pi * (x.x() + x.y()));
    const double c4 = 4 * pi * pi * pi * pi;
    return Point(-c4 * s + pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                 c4 * s + pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  return ms;
}

namespace {

// Columns of the identity selecting the DOFs of `reduced` inside `full`.
SparseMatrix selector(const SpaceLayout& reduced, const SpaceLayout& full) {
  const auto map = embedding(reduced, full);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) trip.emplace_back(map[i], static_cast<int>(i), 1.0);
  SparseMatrix s(full.dim, reduced.dim);
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

// Full-layout vector keeping only the DOFs that `reduced` drops.
VectorXd boundary_part(VectorXd full, const SpaceLayout& reduced, const SpaceLayout& full_layout) {
  for (int i : embedding(reduced, full_layout)) full[i] = 0.0;
  return full;
}

// l(v) = sum_T int_T f . P_Sigma v, in the full Sigma layout.
VectorXd load_vector(const DiscreteComplex& dc, const VectorField& f) {
  const Mesh& mesh = dc.mesh();
  std::vector<VectorXd> local(mesh.n_elements());
  parallel_for(mesh.n_elements(), dc.threads(), [&](int t) {
    const ElementBases& b = dc.bases().element(t);
    const auto& rule = b.high_rule;
    VectorXd fx(rule.size()), fy(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Point v = f(Point(rule.points.col(q)));
      fx[q] = v.x() * rule.weights[q];
      fy[q] = v.y() * rule.weights[q];
    }
    const VectorValues phi = b.vpoly_k.polys.vector_values(rule.points);
    local[t] = dc.element(t).potential_Sigma.transpose() * (phi.x * fx + phi.y * fy);
  });
  VectorXd out = VectorXd::Zero(dc.layout(SpaceKind::Sigma).dim);
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const auto& dofs = dc.dofs(SpaceKind::Sigma, t);
    for (std::size_t i = 0; i < dofs.size(); ++i) out[dofs[i]] += local[t][static_cast<int>(i)];
  }
  return out;
}

}  // namespace

SaddleSystem assemble(const DiscreteComplex& dc, const VectorField& f, const BoundaryData* boundary) {
  const auto bc = BoundaryCondition::homogeneous;
  const SpaceLayout& ls = dc.layout(SpaceKind::Sigma);
  const SpaceLayout& lv = dc.layout(SpaceKind::V);
  SaddleSystem sys;
  sys.sigma0 = dc.layout(SpaceKind::Sigma, bc);
  sys.v0 = dc.layout(SpaceKind::V, bc);

  const SparseMatrix a = a_matrix(dc).matrix;
  const SparseMatrix b = sigma_product(dc).matrix * global_gradient(dc).matrix;
  const SparseMatrix ps = selector(sys.sigma0, ls);
  const SparseMatrix pv = selector(sys.v0, lv);
  sys.A = ps.transpose() * a * ps;
  sys.B_full_rows = b * pv;
  sys.B = ps.transpose() * sys.B_full_rows;

  sys.u_lift = VectorXd::Zero(ls.dim);
  sys.p_lift = VectorXd::Zero(lv.dim);
  if (boundary) {
    sys.u_lift = boundary_part(interpolate_Sigma(dc.bases(), ls, boundary->u).values, sys.sigma0, ls);
    sys.p_lift = boundary_part(interpolate_V(dc.bases(), lv, boundary->p).values, sys.v0, lv);
  }

  const int ns = sys.sigma0.dim, nv = sys.v0.dim;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(sys.A.nonZeros() + 2 * sys.B.nonZeros());
  for (int j = 0; j < sys.A.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(sys.A, j); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  for (int j = 0; j < sys.B.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(sys.B, j); it; ++it) {
      trip.emplace_back(it.row(), ns + it.col(), it.value());
      trip.emplace_back(ns + it.col(), it.row(), -it.value());
    }
  }
  sys.matrix.resize(ns + nv, ns + nv);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());

  sys.rhs.resize(ns + nv);
  sys.rhs.head(ns) = ps.transpose() * (load_vector(dc, f) - a * sys.u_lift - b * sys.p_lift);
  sys.rhs.tail(nv) = sys.B_full_rows.transpose() * sys.u_lift;
  return sys;
}

Solution solve(const DiscreteComplex& dc, const SaddleSystem& sys, double tolerance) {
  const int ns = sys.sigma0.dim, nv = sys.v0.dim;
  VectorXd x = VectorXd::Zero(ns + nv);
  double residual = 0.0;
  const double bnorm = sys.rhs.norm();
  if (bnorm > 0.0) {
    SparseMatrix k = sys.matrix;
    k.makeCompressed();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(k);
    if (lu.info() != Eigen::Success) throw SolveError("sparse LU factorization failed: " + lu.lastErrorMessage());
    x = lu.solve(sys.rhs);
    VectorXd r = sys.rhs - k * x;
    residual = r.norm() / bnorm;
    for (int step = 0; step < 3 && residual > 1e-3 * tolerance; ++step) {
      x += lu.solve(r);
      r = sys.rhs - k * x;
      residual = r.norm() / bnorm;
    }
    if (!(residual < tolerance))
      throw SolveError(fmt::format("relative residual {:.3e} above tolerance {:.1e}", residual, tolerance));
  }
  Solution sol;
  sol.residual = residual;
  const SpaceLayout& ls = dc.layout(SpaceKind::Sigma);
  const SpaceLayout& lv = dc.layout(SpaceKind::V);
  VectorXd u = sys.u_lift, p = sys.p_lift;
  const auto ms = embedding(sys.sigma0, ls);
  const auto mv = embedding(sys.v0, lv);
  for (int i = 0; i < ns; ++i) u[ms[i]] += x[i];
  for (int i = 0; i < nv; ++i) p[mv[i]] += x[ns + i];
  const double un = u.norm();
  sol.divergence = un > 0.0 ? (sys.B_full_rows.transpose() * u).norm() / un : 0.0;
  sol.u = DofVector(ls, std::move(u));
  sol.p = DofVector(lv, std::move(p));
  return sol;
}

ErrorRecord error_report(const DiscreteComplex& dc, const Solution& sol, const SigmaField& u, const ScalarField& p) {
  const VectorXd eu = sol.u.values - interpolate_Sigma(dc.bases(), dc.layout(SpaceKind::Sigma), u).values;
  const VectorXd ep = sol.p.values - interpolate_V(dc.bases(), dc.layout(SpaceKind::V), p).values;
  const SparseMatrix m = sigma_product(dc).matrix;
  ErrorRecord rec;
  rec.h = dc.mesh().h();
  rec.u_l2 = quadratic_norm(m, eu);
  rec.u_rotrot = quadratic_norm(a_matrix(dc).matrix, eu);
  rec.p_l2 = quadratic_norm(v_l2_product(dc).matrix, ep);
  rec.p_grad = quadratic_norm(m, global_gradient(dc).matrix * ep);
  return rec;
}

std::vector<std::array<double, 4>> convergence_rates(const std::vector<ErrorRecord>& records) {
  std::vector<std::array<double, 4>> out;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    const auto a = records[i].errors(), b = records[i + 1].errors();
    const double dh = std::log(records[i].h / records[i + 1].h);
    std::array<double, 4> r{};
    for (int c = 0; c < 4; ++c) r[c] = std::log(a[c] / b[c]) / dh;
    out.push_back(r);
  }
  return out;
}

std::vector<StudyRow> convergence_study(MeshFamily family, int k, const std::vector<int>& n_list, int threads,
                                       int quadrature_degree) {
  threads = resolve_threads(threads);
  const ManufacturedSolution ms = quad_rot_benchmark();
  const BoundaryData bd{{ms.u, ms.rot_u}, ms.p};
  std::vector<StudyRow> rows;
  for (int n : n_list) {
    const Mesh mesh = build_structured_mesh(family, n);
    const DiscreteComplex dc(mesh, k, threads, quadrature_degree);
    const SaddleSystem sys = assemble(dc, ms.f, &bd);
    const Solution sol = solve(dc, sys);
    rows.push_back({n, error_report(dc, sol, {ms.u, ms.rot_u}, ms.p), sol.residual, sol.divergence});
  }
  return rows;
}

std::string format_csv(const std::vector<ErrorRecord>& records) {
  std::string out = "MeshSize";
  for (const char* name : error_names) out += fmt::format(",{}", name);
  out += '\n';
  for (const auto& r : records)
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.h, r.u_l2, r.u_rotrot, r.p_l2, r.p_grad);
  return out;
}

std::string format_rates(const std::vector<ErrorRecord>& records) {
  std::string out = "MeshSizeCoarse,MeshSizeFine";
  for (const char* name : error_names) out += fmt::format(",{}", name);
  out += '\n';
  const auto rates = convergence_rates(records);
  for (std::size_t i = 0; i < rates.size(); ++i) {
    out += fmt::format("{:.17g},{:.17g}", records[i].h, records[i + 1].h);
    for (double r : rates[i]) out += fmt::format(",{:.17g}", r);
    out += '\n';
  }
  return out;
}

std::filesystem::path rates_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  return p.replace_extension(".rates");
}

void write_csv(const std::filesystem::path& path, const std::vector<ErrorRecord>& records) {
  const auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
  };
  write(path, format_csv(records));
  write(rates_path(path), format_rates(records));
}

}  // namespace ddr
