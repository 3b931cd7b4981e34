#include "doctest.h"
#include "helpers.hpp"

#include "ddr/scheme.hpp"

#include <random>

using namespace ddr;

namespace {

const ManufacturedSolution ms = quad_rot_benchmark();
const BoundaryData benchmark_boundary{{ms.u, ms.rot_u}, ms.p};

}  // namespace

TEST_CASE("manufactured forcing matches the operator") {
  // f = (vrot rot)^2 u + grad p checked by finite differences of rot u.
  const Point x(0.3, 0.7);
  const double d = 1e-3;
  const auto r = ms.rot_u;
  // vrot rot (vrot r) = (d2 w, -d1 w) with w = rot(vrot r) = -lap r
  const auto w = [&](const Point& y) {
    return -(r(y + Point(d, 0)) + r(y - Point(d, 0)) + r(y + Point(0, d)) + r(y - Point(0, d)) - 4 * r(y)) / (d * d);
  };
  const Point op((w(x + Point(0, d)) - w(x - Point(0, d))) / (2 * d), -(w(x + Point(d, 0)) - w(x - Point(d, 0))) / (2 * d));
  const Point gp((ms.p(x + Point(d, 0)) - ms.p(x - Point(d, 0))) / (2 * d),
                 (ms.p(x + Point(0, d)) - ms.p(x - Point(0, d))) / (2 * d));
  CHECK((op + gp - ms.f(x)).norm() < 1e-2);
}

TEST_CASE("zero forcing gives zero solution") {
  for (const Mesh& m : testing::structured_meshes(2)) {
    const DiscreteComplex dc(m, 1);
    const SaddleSystem sys = assemble(dc, [](const Point&) { return Point(0, 0); });
    CHECK(sys.rhs.norm() == 0.0);
    const Solution sol = solve(dc, sys);
    CHECK(sol.u.values.norm() < 1e-12);
    CHECK(sol.p.values.norm() < 1e-12);
  }
}

TEST_CASE("saddle structure") {
  const Mesh m = build_structured_mesh(MeshFamily::triangular, 2);
  const DiscreteComplex dc(m, 1);
  const SaddleSystem sys = assemble(dc, ms.f);
  const int ns = sys.sigma0.dim, nv = sys.v0.dim;
  const Eigen::MatrixXd k(sys.matrix);
  const Eigen::MatrixXd a(sys.A), b(sys.B);
  CHECK((k.topLeftCorner(ns, ns) - a).norm() == 0.0);
  CHECK((k.topRightCorner(ns, nv) - b).norm() == 0.0);
  CHECK((k.bottomLeftCorner(nv, ns) + b.transpose()).norm() == 0.0);
  CHECK(k.bottomRightCorner(nv, nv).norm() == 0.0);
  CHECK((a - a.transpose()).norm() <= 1e-13 * a.norm());
  // M G applied to the interpolate of a constant vanishes.
  const SparseMatrix mg = sigma_product(dc).matrix * global_gradient(dc).matrix;
  const DofVector one = interpolate_V(dc.bases(), dc.layout(SpaceKind::V), [](const Point&) { return 1.0; });
  CHECK((mg * one.values).norm() < 1e-13 * mg.norm() * one.values.norm());
}

TEST_CASE("a_h equals the squared rot-rot norm") {
  const Mesh m = build_structured_mesh(MeshFamily::hexagonal, 2);
  const DiscreteComplex dc(m, 1);
  const SaddleSystem sys = assemble(dc, ms.f);
  std::mt19937 rng(7);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd v(sys.sigma0.dim);
    for (auto& x : v) x = nd(rng);
    const DofVector dv(sys.sigma0, v);
    const double a = v.dot(sys.A * v);
    const double r = rotrot_norm(dc, dv);
    CHECK(std::abs(a - r * r) <= 1e-11 * std::abs(a));
  }
}

TEST_CASE("manufactured solve is discretely divergence free") {
  const Mesh m = build_structured_mesh(MeshFamily::cartesian, 4);
  const DiscreteComplex dc(m, 0);
  const SaddleSystem sys = assemble(dc, ms.f, &benchmark_boundary);
  const Solution sol = solve(dc, sys);
  CHECK(sol.residual < 1e-10);
  CHECK(sol.divergence < 1e-10);
  CHECK(sol.u.layout.bc == BoundaryCondition::none);
}

TEST_CASE("error report") {
  const Mesh m = build_structured_mesh(MeshFamily::triangular, 2);
  const DiscreteComplex dc(m, 1);
  Solution exact;
  exact.u = interpolate_Sigma(dc.bases(), dc.layout(SpaceKind::Sigma), {ms.u, ms.rot_u});
  exact.p = interpolate_V(dc.bases(), dc.layout(SpaceKind::V), ms.p);
  const ErrorRecord zero = error_report(dc, exact, {ms.u, ms.rot_u}, ms.p);
  for (double e : zero.errors()) CHECK(e == 0.0);

  // Homogeneity: scaling the error by -3 scales every norm by 3.
  Solution off = exact;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ud(-1, 1);
  Eigen::VectorXd du(off.u.values.size()), dp(off.p.values.size());
  for (auto& x : du) x = ud(rng);
  for (auto& x : dp) x = ud(rng);
  off.u.values += du;
  off.p.values += dp;
  Solution off3 = exact;
  off3.u.values -= 3 * du;
  off3.p.values -= 3 * dp;
  const auto e1 = error_report(dc, off, {ms.u, ms.rot_u}, ms.p).errors();
  const auto e3 = error_report(dc, off3, {ms.u, ms.rot_u}, ms.p).errors();
  for (int c = 0; c < 4; ++c) {
    CHECK(e1[c] > 0.0);
    CHECK(e3[c] == doctest::Approx(3 * e1[c]).epsilon(1e-10));
  }
}

TEST_CASE("lowest-order rates on cartesian meshes") {
  const auto rows = convergence_study(MeshFamily::cartesian, 0, {4, 8, 16, 32}, 2);
  std::vector<ErrorRecord> rec;
  for (const auto& r : rows) {
    CHECK(r.residual < 1e-10);
    CHECK(r.divergence < 1e-9);
    rec.push_back(r.errors);
  }
  const auto rates = convergence_rates(rec);
  // Energy-type error: sharp first order, approached monotonically.
  CHECK(std::abs(rates[1][1] - 1.0) <= 0.25);
  CHECK(std::abs(rates.back()[1] - 1.0) <= 0.05);
  CHECK(std::abs(rates.back()[1] - 1.0) < std::abs(rates.front()[1] - 1.0));
  CHECK(std::abs(rates.back()[2] - 2.0) <= 0.05);
  CHECK(std::abs(rates.back()[2] - 2.0) < std::abs(rates.front()[2] - 2.0));
  // L2-type errors converge at least at second order (faster before the asymptotic range).
  for (const auto& r : rates) CHECK(r[0] >= 1.75);
}

TEST_CASE("solution does not depend on element numbering") {
  const Mesh m = build_structured_mesh(MeshFamily::hexagonal, 3);
  std::vector<Point> verts;
  for (const auto& v : m.vertices()) verts.push_back(v.x);
  std::vector<std::array<int, 2>> edges;
  for (const auto& e : m.edges()) edges.push_back(e.vertices);
  std::vector<std::vector<int>> el_edges, el_or;
  std::vector<Point> centers;
  for (int t = m.n_elements() - 1; t >= 0; --t) {
    el_edges.push_back(m.element(t).edges);
    el_or.push_back(m.element(t).orientations);
    centers.push_back(m.element(t).center);
  }
  const Mesh p = Mesh::from_topology(verts, edges, el_edges, el_or, centers);

  const DiscreteComplex d1(m, 1), d2(p, 1);
  const Solution s1 = solve(d1, assemble(d1, ms.f, &benchmark_boundary));
  const Solution s2 = solve(d2, assemble(d2, ms.f, &benchmark_boundary));
  const SpaceLayout& l1 = d1.layout(SpaceKind::Sigma);
  const SpaceLayout& l2 = d2.layout(SpaceKind::Sigma);
  const int nt = m.n_elements();
  double diff = 0.0;
  for (int t = 0; t < nt; ++t) {
    diff = std::max(diff, (s1.u.values.segment(l1.element_offset[t], l1.element_size[t]) -
                           s2.u.values.segment(l2.element_offset[nt - 1 - t], l2.element_size[nt - 1 - t]))
                              .lpNorm<Eigen::Infinity>());
  }
  const int tail = l1.dim - l1.edge_offset[0];
  diff = std::max(diff, (s1.u.values.tail(tail) - s2.u.values.tail(tail)).lpNorm<Eigen::Infinity>());
  CHECK(diff <= 1e-12 * s1.u.values.lpNorm<Eigen::Infinity>());
  const auto e1 = error_report(d1, s1, {ms.u, ms.rot_u}, ms.p).errors();
  const auto e2 = error_report(d2, s2, {ms.u, ms.rot_u}, ms.p).errors();
  for (int c = 0; c < 4; ++c) CHECK(e1[c] == doctest::Approx(e2[c]).epsilon(1e-10));
}

TEST_CASE("csv and rates output") {
  std::vector<ErrorRecord> rec{{0.5, 1.0, 2.0, 3.0, 4.0}, {0.25, 0.25, 1.0, 0.75, 2.0}};
  const std::string csv = format_csv(rec);
  CHECK(csv.rfind("MeshSize,ErrUL2,ErrURotRot,ErrPL2,ErrPGrad\n", 0) == 0);
  CHECK(csv.find("0.5,1,2,3,4\n") != std::string::npos);
  const auto rates = convergence_rates(rec);
  REQUIRE(rates.size() == 1);
  CHECK(rates[0][0] == doctest::Approx(2.0));
  CHECK(rates[0][1] == doctest::Approx(1.0));
  CHECK(rates_path("out/run.csv") == std::filesystem::path("out/run.rates"));
  CHECK(format_csv({{0.1, 1.0 / 3.0, 0, 0, 0}}).find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("polynomial patch test") {
  // u = vrot psi with psi cubic has (vrot rot)^2 u = 0, so f = grad p.
  const SigmaField u{[](const Point& x) {
                       const double a = x.x(), b = x.y();
                       return Point(2 * a * a - 2 * a * b + b * b - a, -(3 * a * a + 4 * a * b - b * b - b));
                     },
                     [](const Point& x) { return -(6 * x.x() + 4 * x.y() - 2 * x.x() + 2 * x.y()); }};
  const ScalarField p = [](const Point& x) { return x.x() * x.x() * x.y() - 0.5 * x.x() * x.y() + x.y() * x.y() * x.y(); };
  const VectorField f = [](const Point& x) {
    return Point(2 * x.x() * x.y() - 0.5 * x.y(), x.x() * x.x() - 0.5 * x.x() + 3 * x.y() * x.y());
  };
  const BoundaryData bd{u, p};
  for (const Mesh& m : testing::structured_meshes(3)) {
    const DiscreteComplex dc(m, 2);
    const Solution sol = solve(dc, assemble(dc, f, &bd));
    const auto e = error_report(dc, sol, u, p).errors();
    for (double x : e) CHECK(x < 1e-9);
  }
}
