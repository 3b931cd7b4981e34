#include "ddr/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace ddr {

namespace {

// Legendre polynomial P_n and its derivative at z.
std::pair<double, double> legendre(int n, double z) {
  double p0 = 1.0, p1 = z;
  if (n == 0) return {1.0, 0.0};
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs at least one point");
  Eigen::VectorXd x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, z);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double dp = legendre(n, z).second;
    x[n - 1 - i] = z;
    w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

QuadratureRule triangle_rule(const Point& a, const Point& b, const Point& c, int d) {
  const int n = std::max(1, (d + 3) / 2);
  const auto [x, w] = gauss_legendre(n);
  const double jac = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  QuadratureRule rule;
  rule.exact_degree = d;
  rule.points.resize(2, n * n);
  rule.weights.resize(n * n);
  int q = 0;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (x[i] + 1.0);
    for (int j = 0; j < n; ++j, ++q) {
      const double v = 0.5 * (x[j] + 1.0);
      const double xi = u, eta = v * (1.0 - u);
      rule.points.col(q) = a + xi * (b - a) + eta * (c - a);
      rule.weights[q] = 0.25 * w[i] * w[j] * (1.0 - u) * jac;
    }
  }
  return rule;
}

QuadratureRule element_rule(const Mesh& mesh, int element, int d) {
  const Element& el = mesh.element(element);
  const int nv = static_cast<int>(el.vertices.size());
  QuadratureRule rule;
  rule.exact_degree = d;
  std::vector<QuadratureRule> parts;
  int total = 0;
  for (int i = 0; i < nv; ++i) {
    parts.push_back(triangle_rule(el.center, mesh.vertex(el.vertices[i]).x, mesh.vertex(el.vertices[(i + 1) % nv]).x, d));
    total += parts.back().size();
  }
  rule.points.resize(2, total);
  rule.weights.resize(total);
  int off = 0;
  for (const auto& p : parts) {
    rule.points.middleCols(off, p.size()) = p.points;
    rule.weights.segment(off, p.size()) = p.weights;
    off += p.size();
  }
  return rule;
}

QuadratureRule edge_rule(const Mesh& mesh, int edge, int d) {
  const Edge& e = mesh.edge(edge);
  const int n = std::max(1, (d + 2) / 2);
  const auto [x, w] = gauss_legendre(n);
  const Point a = mesh.vertex(e.vertices[0]).x;
  const Point b = mesh.vertex(e.vertices[1]).x;
  QuadratureRule rule;
  rule.exact_degree = d;
  rule.points.resize(2, n);
  rule.weights = 0.5 * e.length * w;
  for (int i = 0; i < n; ++i) rule.points.col(i) = a + 0.5 * (x[i] + 1.0) * (b - a);
  return rule;
}

}  // namespace ddr
