#include <doctest.h>

#include "ddr/polybasis.hpp"

#include <cmath>

using namespace ddr;

namespace {

int rank_of(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s[i] > 1e-10 * s[0];
  return r;
}

// Coefficients of a vector family written in a common frame of degree m.
Eigen::MatrixXd stacked(const ElementPolys& a, const ElementPolys& b, int m) {
  const ElementPolys ra = raise_degree(a, m), rb = raise_degree(b, m);
  Eigen::MatrixXd out(ra.size() + rb.size(), ra.coeffs.cols());
  out << ra.coeffs, rb.coeffs;
  return out;
}

}  // namespace

TEST_CASE("dimension formulas") {
  const Mesh m = build_structured_mesh(MeshFamily::cartesian, 2);
  CHECK(scalar_basis(m, 0, 2).dim() == 6);
  CHECK(scalar_basis(m, 0, -1).dim() == 0);
  CHECK(complement_basis(m, 0, BasisKind::Roly, 1).dim() == 5);
  CHECK(complement_basis(m, 0, BasisKind::cRoly, 1).dim() == 1);
  CHECK(complement_basis(m, 0, BasisKind::cRoly, 0).dim() == 0);
  CHECK(complement_basis(m, 0, BasisKind::Goly, -1).dim() == 0);
  CHECK(complement_basis(m, 0, BasisKind::P_zero_mean, 2).dim() == 5);
  const auto eb = scalar_edge_basis(m, 0, 0);
  CHECK(eb.dim() == 1);
  const double he = m.edge(0).length;
  CHECK(eb.polys.coeffs(0, 0) == doctest::Approx(1.0 / std::sqrt(he)).epsilon(1e-14));
}

TEST_CASE("Koszul direct sums") {
  for (auto fam : {MeshFamily::cartesian, MeshFamily::triangular, MeshFamily::hexagonal}) {
    const Mesh mesh = build_structured_mesh(fam, 2);
    for (int t = 0; t < mesh.n_elements(); ++t) {
      const ElementFrame f = element_frame(mesh, t);
      for (int m = 0; m <= 5; ++m) {
        const auto roly = raw_element_polys(f, BasisKind::Roly, m);
        const auto croly = raw_element_polys(f, BasisKind::cRoly, m);
        const auto goly = raw_element_polys(f, BasisKind::Goly, m);
        const auto cgoly = raw_element_polys(f, BasisKind::cGoly, m);
        CHECK(rank_of(stacked(roly, croly, m)) == (m + 1) * (m + 2));
        CHECK(rank_of(stacked(goly, cgoly, m)) == (m + 1) * (m + 2));
      }
    }
  }
}

TEST_CASE("symbolic operators") {
  ElementPolys p{ElementFrame{Point(0, 0), 1.0}, 2, false, Eigen::MatrixXd::Zero(1, 6)};
  p.coeffs(0, monomial_index(1, 1)) = 1.0;  // x y
  Eigen::Matrix2Xd pts(2, 2);
  pts << 0.3, -0.7, 0.5, 0.2;
  const auto g = grad(p).vector_values(pts);
  CHECK(g.x(0, 0) == doctest::Approx(0.5));
  CHECK(g.y(0, 0) == doctest::Approx(0.3));
  const auto r = vrot(p).vector_values(pts);
  CHECK(r.x(0, 1) == doctest::Approx(-0.7));
  CHECK(r.y(0, 1) == doctest::Approx(-0.2));
  CHECK(div(vrot(p)).coeffs.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(rot(grad(p)).coeffs.cwiseAbs().maxCoeff() < 1e-15);
  // rot vrot p = -laplacian p; div koszul p = (2 + deg) p for homogeneous p.
  const auto dk = div(koszul(p)).values(pts);
  CHECK(dk(0, 0) == doctest::Approx(4 * 0.3 * 0.5));
  const auto kp = koszul_perp(p).vector_values(pts);
  CHECK(kp.x(0, 0) == doctest::Approx(0.5 * 0.15));
  CHECK(kp.y(0, 0) == doctest::Approx(-0.3 * 0.15));
}

TEST_CASE("orthonormal bases are well conditioned") {
  for (auto fam : {MeshFamily::cartesian, MeshFamily::triangular, MeshFamily::hexagonal}) {
    const Mesh mesh = build_structured_mesh(fam, 3);
    for (int t = 0; t < mesh.n_elements(); ++t) {
      for (auto kind : {BasisKind::P, BasisKind::vP, BasisKind::Roly, BasisKind::cRoly, BasisKind::Goly, BasisKind::cGoly}) {
        for (int m = 0; m <= 5; ++m) {
          const auto b = complement_basis(mesh, t, kind, m);
          if (b.dim() == 0) continue;
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.gram);
          CHECK(es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff() < 10.0);
          CHECK((b.gram - Eigen::MatrixXd::Identity(b.dim(), b.dim())).norm() < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("hierarchical scalar bases") {
  const Mesh mesh = build_structured_mesh(MeshFamily::hexagonal, 2);
  const auto b3 = scalar_basis(mesh, 1, 3);
  const auto b1 = scalar_basis(mesh, 1, 1);
  const ElementPolys lead = raise_degree(b1.polys, 3);
  CHECK((b3.polys.coeffs.topRows(3) - lead.coeffs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("projections") {
  const Mesh mesh = build_structured_mesh(MeshFamily::hexagonal, 3);
  const int t = 2;
  const auto rule = element_rule(mesh, t, 12);
  const auto p0 = scalar_basis(mesh, t, 0);
  // Projection of x1 onto constants is the centroid abscissa.
  const Eigen::VectorXd c = l2_project([](const Point& x) { return x.x(); }, p0, rule);
  const double value = c[0] * p0.polys.values(Eigen::Matrix2Xd(mesh.element(t).center)).value();
  Point centroid = Point::Zero();
  for (int q = 0; q < rule.size(); ++q) centroid += rule.weights[q] * rule.points.col(q);
  centroid /= rule.weights.sum();
  CHECK(value == doctest::Approx(centroid.x()).epsilon(1e-13));

  // A basis member projects to a unit vector.
  const auto p3 = scalar_basis(mesh, t, 3);
  const ElementPolys member = p3.polys.rows(4, 1);
  const Eigen::VectorXd u = l2_project([&](const Point& x) { return member.values(Eigen::Matrix2Xd(x))(0, 0); }, p3, rule);
  Eigen::VectorXd e4 = Eigen::VectorXd::Zero(p3.dim());
  e4[4] = 1;
  CHECK((u - e4).norm() < 1e-12);

  // x - x_T belongs to cRoly^1.
  const auto cr = complement_basis(mesh, t, BasisKind::cRoly, 1);
  const Point xt = mesh.element(t).center;
  const auto f = [&](const Point& x) -> Point { return x - xt; };
  const Eigen::VectorXd a = l2_project_vector(f, cr, rule);
  double res = 0;
  for (int q = 0; q < rule.size(); ++q) {
    const auto vv = cr.polys.vector_values(Eigen::Matrix2Xd(rule.points.col(q)));
    const Point approx(vv.x.col(0).dot(a), vv.y.col(0).dot(a));
    res = std::max(res, (approx - f(Point(rule.points.col(q)))).norm());
  }
  CHECK(res < 1e-12);

  // Idempotence on a smooth field.
  const auto smooth = [](const Point& x) { return std::sin(3 * x.x()) * std::exp(x.y()); };
  const Eigen::VectorXd once = l2_project(smooth, p3, rule);
  const Eigen::VectorXd twice =
      l2_project([&](const Point& x) { return p3.polys.values(Eigen::Matrix2Xd(x)).col(0).dot(once); }, p3, rule);
  CHECK((once - twice).norm() < 1e-12);
}

TEST_CASE("edge bases") {
  const Mesh mesh = build_structured_mesh(MeshFamily::triangular, 2);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const auto b = scalar_edge_basis(mesh, e, 3);
    CHECK((b.gram - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
  }
}
