// Quadrature rules on mesh elements (fan sub-triangulation from the interior
// point) and on edges (Gauss-Legendre).
#pragma once

#include "ddr/mesh.hpp"

#include <Eigen/Dense>

namespace ddr {

struct QuadratureRule {
  Eigen::Matrix2Xd points;
  Eigen::VectorXd weights;
  int exact_degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for degree 2n-1.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n);

/// Collapsed tensor rule on the triangle (a, b, c), exact for total degree d.
QuadratureRule triangle_rule(const Point& a, const Point& b, const Point& c, int d);

/// Exact for bivariate polynomials of total degree <= d over the element.
QuadratureRule element_rule(const Mesh& mesh, int element, int d);

/// Gauss-Legendre rule with ceil((d+1)/2) points mapped to the edge.
QuadratureRule edge_rule(const Mesh& mesh, int edge, int d);

/// Degree used for non-polynomial integrands (forcing terms, errors).
inline int high_order_degree(int k) { return std::max(2 * k + 6, 12); }

}  // namespace ddr
