#include "ddr/polybasis.hpp"

namespace ddr {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::P: return "P";
    case BasisKind::vP: return "vP";
    case BasisKind::Roly: return "Roly";
    case BasisKind::cRoly: return "cRoly";
    case BasisKind::Goly: return "Goly";
    case BasisKind::cGoly: return "cGoly";
    case BasisKind::P_zero_mean: return "P_zero_mean";
  }
  return "?";
}

Eigen::MatrixXd ElementFrame::monomials(const Eigen::Matrix2Xd& pts, int m) const {
  const int n = static_cast<int>(pts.cols());
  Eigen::MatrixXd out(dim_poly2(m), n);
  if (m < 0) return out;
  Eigen::MatrixXd px(m + 1, n), py(m + 1, n);
  for (int q = 0; q < n; ++q) {
    const double xi = (pts(0, q) - center.x()) / scale;
    const double eta = (pts(1, q) - center.y()) / scale;
    px(0, q) = py(0, q) = 1.0;
    for (int j = 1; j <= m; ++j) {
      px(j, q) = px(j - 1, q) * xi;
      py(j, q) = py(j - 1, q) * eta;
    }
  }
  for (int d = 0; d <= m; ++d) {
    for (int b = 0; b <= d; ++b) out.row(monomial_index(d - b, b)) = px.row(d - b).cwiseProduct(py.row(b));
  }
  return out;
}

Eigen::MatrixXd EdgeFrame::monomials(const Eigen::Matrix2Xd& pts, int m) const {
  const int n = static_cast<int>(pts.cols());
  Eigen::MatrixXd out(dim_poly1(m), n);
  if (m < 0) return out;
  for (int q = 0; q < n; ++q) {
    const double s = (Point(pts.col(q)) - midpoint).dot(tangent) / length;
    double p = 1.0;
    for (int j = 0; j <= m; ++j, p *= s) out(j, q) = p;
  }
  return out;
}

Eigen::MatrixXd EdgeFrame::monomial_derivatives(const Eigen::Matrix2Xd& pts, int m) const {
  const int n = static_cast<int>(pts.cols());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_poly1(m), n);
  if (m < 1) return out;
  const Eigen::MatrixXd lower = monomials(pts, m - 1);
  for (int j = 1; j <= m; ++j) out.row(j) = (j / length) * lower.row(j - 1);
  return out;
}

ElementFrame element_frame(const Mesh& mesh, int element) {
  const Element& el = mesh.element(element);
  return ElementFrame{el.center, el.diameter};
}

EdgeFrame edge_frame(const Mesh& mesh, int edge) {
  const Edge& e = mesh.edge(edge);
  return EdgeFrame{e.midpoint, e.tangent, e.length};
}

Eigen::MatrixXd ElementPolys::values(const Eigen::Matrix2Xd& pts) const {
  if (vector) throw std::logic_error("values() called on a vector family");
  return coeffs * frame.monomials(pts, degree);
}

VectorValues ElementPolys::vector_values(const Eigen::Matrix2Xd& pts) const {
  if (!vector) throw std::logic_error("vector_values() called on a scalar family");
  const Eigen::MatrixXd mono = frame.monomials(pts, degree);
  const int nm = dim_poly2(degree);
  Eigen::MatrixXd cx(coeffs.rows(), nm), cy(coeffs.rows(), nm);
  for (int i = 0; i < nm; ++i) {
    cx.col(i) = coeffs.col(2 * i);
    cy.col(i) = coeffs.col(2 * i + 1);
  }
  return {cx * mono, cy * mono};
}

ElementPolys ElementPolys::rows(int first, int count) const {
  return ElementPolys{frame, degree, vector, coeffs.middleRows(first, count)};
}

namespace {

ElementPolys make(const ElementFrame& frame, int degree, bool vector, int n) {
  const int cols = (vector ? 2 : 1) * dim_poly2(degree);
  return ElementPolys{frame, degree, vector, Eigen::MatrixXd::Zero(n, cols)};
}

// Calls f(a, b, column) for every monomial of degree <= m.
template <class F>
void for_monomials(int m, F&& f) {
  for (int d = 0; d <= m; ++d)
    for (int b = 0; b <= d; ++b) f(d - b, b, monomial_index(d - b, b));
}

}  // namespace

ElementPolys grad(const ElementPolys& p) {
  if (p.vector) throw std::logic_error("grad of a vector family");
  ElementPolys out = make(p.frame, p.degree - 1, true, p.size());
  const double h = p.frame.scale;
  for_monomials(p.degree, [&](int a, int b, int i) {
    if (a > 0) out.coeffs.col(2 * monomial_index(a - 1, b)) += (a / h) * p.coeffs.col(i);
    if (b > 0) out.coeffs.col(2 * monomial_index(a, b - 1) + 1) += (b / h) * p.coeffs.col(i);
  });
  return out;
}

ElementPolys vrot(const ElementPolys& p) {
  ElementPolys g = grad(p);
  ElementPolys out = g;
  for (int i = 0; i < dim_poly2(g.degree); ++i) {
    out.coeffs.col(2 * i) = g.coeffs.col(2 * i + 1);
    out.coeffs.col(2 * i + 1) = -g.coeffs.col(2 * i);
  }
  return out;
}

ElementPolys div(const ElementPolys& v) {
  if (!v.vector) throw std::logic_error("div of a scalar family");
  ElementPolys out = make(v.frame, v.degree - 1, false, v.size());
  const double h = v.frame.scale;
  for_monomials(v.degree, [&](int a, int b, int i) {
    if (a > 0) out.coeffs.col(monomial_index(a - 1, b)) += (a / h) * v.coeffs.col(2 * i);
    if (b > 0) out.coeffs.col(monomial_index(a, b - 1)) += (b / h) * v.coeffs.col(2 * i + 1);
  });
  return out;
}

ElementPolys rot(const ElementPolys& v) {
  if (!v.vector) throw std::logic_error("rot of a scalar family");
  ElementPolys out = make(v.frame, v.degree - 1, false, v.size());
  const double h = v.frame.scale;
  for_monomials(v.degree, [&](int a, int b, int i) {
    if (a > 0) out.coeffs.col(monomial_index(a - 1, b)) += (a / h) * v.coeffs.col(2 * i + 1);
    if (b > 0) out.coeffs.col(monomial_index(a, b - 1)) -= (b / h) * v.coeffs.col(2 * i);
  });
  return out;
}

ElementPolys koszul(const ElementPolys& p) {
  if (p.vector) throw std::logic_error("koszul of a vector family");
  ElementPolys out = make(p.frame, p.degree + 1, true, p.size());
  const double h = p.frame.scale;
  for_monomials(p.degree, [&](int a, int b, int i) {
    out.coeffs.col(2 * monomial_index(a + 1, b)) += h * p.coeffs.col(i);
    out.coeffs.col(2 * monomial_index(a, b + 1) + 1) += h * p.coeffs.col(i);
  });
  return out;
}

ElementPolys koszul_perp(const ElementPolys& p) {
  if (p.vector) throw std::logic_error("koszul_perp of a vector family");
  ElementPolys out = make(p.frame, p.degree + 1, true, p.size());
  const double h = p.frame.scale;
  for_monomials(p.degree, [&](int a, int b, int i) {
    out.coeffs.col(2 * monomial_index(a, b + 1)) += h * p.coeffs.col(i);
    out.coeffs.col(2 * monomial_index(a + 1, b) + 1) -= h * p.coeffs.col(i);
  });
  return out;
}

ElementPolys raise_degree(const ElementPolys& p, int degree) {
  if (degree < p.degree) throw std::logic_error("raise_degree cannot lower the degree");
  ElementPolys out = make(p.frame, degree, p.vector, p.size());
  out.coeffs.leftCols(p.coeffs.cols()) = p.coeffs;
  return out;
}

Eigen::MatrixXd EdgePolys::values(const Eigen::Matrix2Xd& pts) const { return coeffs * frame.monomials(pts, degree); }

Eigen::MatrixXd EdgePolys::derivatives(const Eigen::Matrix2Xd& pts) const {
  return coeffs * frame.monomial_derivatives(pts, degree);
}

ElementPolys raw_element_polys(const ElementFrame& frame, BasisKind kind, int m) {
  const auto monos = [&](int deg) {
    return ElementPolys{frame, std::max(deg, -1), false, Eigen::MatrixXd::Identity(dim_poly2(deg), dim_poly2(deg))};
  };
  switch (kind) {
    case BasisKind::P:
    case BasisKind::P_zero_mean: return monos(m);
    case BasisKind::vP: {
      const int n = 2 * dim_poly2(m);
      return ElementPolys{frame, std::max(m, -1), true, Eigen::MatrixXd::Identity(n, n)};
    }
    case BasisKind::Roly:
    case BasisKind::Goly: {
      ElementPolys p = monos(m + 1);
      if (p.size() > 0) p = p.rows(1, p.size() - 1);
      ElementPolys out = kind == BasisKind::Roly ? vrot(p) : grad(p);
      out.degree = std::max(m, -1);
      if (m < 0) out.coeffs.resize(0, 0);
      return out;
    }
    case BasisKind::cRoly:
    case BasisKind::cGoly: {
      if (m < 1) return ElementPolys{frame, std::max(m, -1), true, Eigen::MatrixXd::Zero(0, 2 * dim_poly2(m))};
      const ElementPolys p = monos(m - 1);
      return kind == BasisKind::cRoly ? koszul(p) : koszul_perp(p);
    }
  }
  throw std::logic_error("unknown basis kind");
}

Eigen::MatrixXd gram_matrix(const ElementPolys& polys, const QuadratureRule& rule) {
  if (polys.vector) {
    const auto v = polys.vector_values(rule.points);
    return integrate(v, v, rule.weights);
  }
  const Eigen::MatrixXd v = polys.values(rule.points);
  return integrate(v, v, rule.weights);
}

Eigen::MatrixXd gram_matrix(const EdgePolys& polys, const QuadratureRule& rule) {
  const Eigen::MatrixXd v = polys.values(rule.points);
  return integrate(v, v, rule.weights);
}

namespace {

template <class Polys>
Eigen::MatrixXd orthonormalize_impl(Polys& polys, const QuadratureRule& rule) {
  if (polys.size() == 0) return Eigen::MatrixXd(0, 0);
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::MatrixXd g = gram_matrix(polys, rule);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) throw DegenerateBasisError("Gram matrix is not positive definite");
    polys.coeffs = llt.matrixL().solve(polys.coeffs);
  }
  return gram_matrix(polys, rule);
}

}  // namespace

Eigen::MatrixXd orthonormalize(ElementPolys& polys, const QuadratureRule& rule) {
  return orthonormalize_impl(polys, rule);
}

Eigen::MatrixXd orthonormalize(EdgePolys& polys, const QuadratureRule& rule) {
  return orthonormalize_impl(polys, rule);
}

ElementBasis scalar_basis(const Mesh& mesh, int element, int m) {
  return complement_basis(mesh, element, BasisKind::P, m);
}

EdgeBasis scalar_edge_basis(const Mesh& mesh, int edge, int m) {
  EdgeBasis basis;
  basis.edge = edge;
  basis.degree = m;
  const int n = dim_poly1(m);
  basis.polys = EdgePolys{edge_frame(mesh, edge), std::max(m, -1), Eigen::MatrixXd::Identity(n, n)};
  basis.gram = orthonormalize(basis.polys, edge_rule(mesh, edge, 2 * std::max(m, 0)));
  return basis;
}

ElementBasis complement_basis(const Mesh& mesh, int element, BasisKind kind, int m) {
  ElementBasis basis;
  basis.element = element;
  basis.kind = kind;
  basis.degree = m;
  basis.polys = raw_element_polys(element_frame(mesh, element), kind, m);
  const QuadratureRule rule = element_rule(mesh, element, 2 * std::max(basis.polys.degree, 0));
  basis.gram = orthonormalize(basis.polys, rule);
  if (kind == BasisKind::P_zero_mean && basis.dim() > 0) {
    // The first orthonormal member is the constant; the others have zero mean.
    basis.polys = basis.polys.rows(1, basis.dim() - 1);
    basis.gram = gram_matrix(basis.polys, rule);
  }
  return basis;
}

}  // namespace ddr
