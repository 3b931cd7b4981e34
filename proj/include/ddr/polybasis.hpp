// Scaled monomial frames on elements and edges, the Koszul decompositions of
// vector polynomials, L2-orthonormal subspace bases and projectors.
#pragma once

#include "ddr/mesh.hpp"
#include "ddr/quadrature.hpp"

#include <Eigen/Dense>

#include <string>

namespace ddr {

/// Dimension of P^m in two variables; P^{-1} = {0}.
constexpr int dim_poly2(int m) { return m < 0 ? 0 : (m + 1) * (m + 2) / 2; }
/// Dimension of P^m on an edge.
constexpr int dim_poly1(int m) { return m < 0 ? 0 : m + 1; }
/// Index of x^a y^b in the graded monomial ordering.
constexpr int monomial_index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

/// Monomials ((x - center) / scale)^a ((y - center) / scale)^b.
struct ElementFrame {
  Point center = Point::Zero();
  double scale = 1.0;

  /// dim_poly2(m) x npts matrix of monomial values.
  Eigen::MatrixXd monomials(const Eigen::Matrix2Xd& pts, int m) const;
};

/// Monomials ((x - midpoint) . tangent / length)^j.
struct EdgeFrame {
  Point midpoint = Point::Zero();
  Point tangent = Point(1.0, 0.0);
  double length = 1.0;

  Eigen::MatrixXd monomials(const Eigen::Matrix2Xd& pts, int m) const;
  /// Derivatives with respect to arc length along the tangent.
  Eigen::MatrixXd monomial_derivatives(const Eigen::Matrix2Xd& pts, int m) const;
};

ElementFrame element_frame(const Mesh& mesh, int element);
EdgeFrame edge_frame(const Mesh& mesh, int edge);

struct VectorValues {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
};

/// A family of scalar or vector polynomials of degree <= `degree`, one per row
/// of `coeffs`, written in an element frame. Vector coefficients interleave the
/// components: column 2*i + c is component c of monomial i.
struct ElementPolys {
  ElementFrame frame;
  int degree = -1;
  bool vector = false;
  Eigen::MatrixXd coeffs;

  int size() const { return static_cast<int>(coeffs.rows()); }
  Eigen::MatrixXd values(const Eigen::Matrix2Xd& pts) const;        // scalar only
  VectorValues vector_values(const Eigen::Matrix2Xd& pts) const;    // vector only
  ElementPolys rows(int first, int count) const;
};

ElementPolys grad(const ElementPolys& p);
ElementPolys vrot(const ElementPolys& p);
ElementPolys div(const ElementPolys& v);
ElementPolys rot(const ElementPolys& v);
/// (x - x_T) p
ElementPolys koszul(const ElementPolys& p);
/// (x - x_T)^perp p with v^perp = (v2, -v1)
ElementPolys koszul_perp(const ElementPolys& p);
/// Rewrites the family in a frame of higher degree (zero padding).
ElementPolys raise_degree(const ElementPolys& p, int degree);

struct EdgePolys {
  EdgeFrame frame;
  int degree = -1;
  Eigen::MatrixXd coeffs;

  int size() const { return static_cast<int>(coeffs.rows()); }
  Eigen::MatrixXd values(const Eigen::Matrix2Xd& pts) const;
  Eigen::MatrixXd derivatives(const Eigen::Matrix2Xd& pts) const;
};

enum class BasisKind { P, vP, Roly, cRoly, Goly, cGoly, P_zero_mean };
std::string to_string(BasisKind kind);

/// Spanning set of a polynomial subspace on one element, orthonormalized in
/// L2(T). Orthonormalization is hierarchical: the leading rows of a degree-m
/// basis of P or vP span the same space of lower degree.
struct ElementBasis {
  int element = -1;
  BasisKind kind = BasisKind::P;
  int degree = -1;
  ElementPolys polys;
  Eigen::MatrixXd gram;

  int dim() const { return polys.size(); }
};

struct EdgeBasis {
  int edge = -1;
  int degree = -1;
  EdgePolys polys;
  Eigen::MatrixXd gram;

  int dim() const { return polys.size(); }
};

/// Raw (not orthonormalized) spanning set of the requested subspace.
ElementPolys raw_element_polys(const ElementFrame& frame, BasisKind kind, int m);

/// P^m(T) orthonormal basis (m >= -1).
ElementBasis scalar_basis(const Mesh& mesh, int element, int m);
/// P^m(E) orthonormal basis (m >= -1).
EdgeBasis scalar_edge_basis(const Mesh& mesh, int edge, int m);
/// Orthonormal basis of vP^m, Roly^m, cRoly^m, Goly^m, cGoly^m or P^{m,0}.
ElementBasis complement_basis(const Mesh& mesh, int element, BasisKind kind, int m);

/// Orthonormalizes a family in L2 of the given rule by two passes of Cholesky.
/// Returns the Gram matrix of the result.
Eigen::MatrixXd orthonormalize(ElementPolys& polys, const QuadratureRule& rule);
Eigen::MatrixXd orthonormalize(EdgePolys& polys, const QuadratureRule& rule);

/// Gram matrix of a family with respect to a rule.
Eigen::MatrixXd gram_matrix(const ElementPolys& polys, const QuadratureRule& rule);
Eigen::MatrixXd gram_matrix(const EdgePolys& polys, const QuadratureRule& rule);

/// Weighted products: sum_q w_q a_i(x_q) b_j(x_q).
inline Eigen::MatrixXd integrate(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& w) {
  return a * w.asDiagonal() * b.transpose();
}
inline Eigen::MatrixXd integrate(const VectorValues& a, const VectorValues& b, const Eigen::VectorXd& w) {
  return a.x * w.asDiagonal() * b.x.transpose() + a.y * w.asDiagonal() * b.y.transpose();
}

/// Error for a singular or indefinite Gram matrix.
class DegenerateBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// L2 projection of a scalar callable f(Point) onto an element basis.
template <class F>
Eigen::VectorXd l2_project(const F& f, const ElementBasis& basis, const QuadratureRule& rule) {
  Eigen::VectorXd fq(rule.size());
  for (int q = 0; q < rule.size(); ++q) fq[q] = f(Point(rule.points.col(q)));
  const Eigen::VectorXd moments = basis.polys.values(rule.points) * rule.weights.asDiagonal() * fq;
  return basis.gram.ldlt().solve(moments);
}

/// L2 projection of a vector callable f(Point) -> Point onto a vector basis.
template <class F>
Eigen::VectorXd l2_project_vector(const F& f, const ElementBasis& basis, const QuadratureRule& rule) {
  Eigen::VectorXd fx(rule.size()), fy(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    const Point v = f(Point(rule.points.col(q)));
    fx[q] = v.x();
    fy[q] = v.y();
  }
  const auto vals = basis.polys.vector_values(rule.points);
  const Eigen::VectorXd moments = vals.x * rule.weights.asDiagonal() * fx + vals.y * rule.weights.asDiagonal() * fy;
  return basis.gram.ldlt().solve(moments);
}

template <class F>
Eigen::VectorXd l2_project(const F& f, const EdgeBasis& basis, const QuadratureRule& rule) {
  Eigen::VectorXd fq(rule.size());
  for (int q = 0; q < rule.size(); ++q) fq[q] = f(Point(rule.points.col(q)));
  const Eigen::VectorXd moments = basis.polys.values(rule.points) * rule.weights.asDiagonal() * fq;
  return basis.gram.ldlt().solve(moments);
}

}  // namespace ddr
