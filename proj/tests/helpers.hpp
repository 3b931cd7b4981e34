// Polynomial and trigonometric test fields with exact derivatives.
#pragma once

#include "ddr/operators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testing {

using ddr::Point;

struct Poly2 {
  struct Term {
    int a, b;
    double c;
  };
  std::vector<Term> terms;

  static Poly2 random(int degree, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Poly2 p;
    for (int d = 0; d <= degree; ++d) {
      for (int a = d; a >= 0; --a) p.terms.push_back({a, d - a, u(rng)});
    }
    return p;
  }

  double operator()(const Point& x) const {
    double s = 0;
    for (const auto& t : terms) s += t.c * std::pow(x.x(), t.a) * std::pow(x.y(), t.b);
    return s;
  }
  Poly2 dx() const {
    Poly2 p;
    for (const auto& t : terms) {
      if (t.a > 0) p.terms.push_back({t.a - 1, t.b, t.c * t.a});
    }
    return p;
  }
  Poly2 dy() const {
    Poly2 p;
    for (const auto& t : terms) {
      if (t.b > 0) p.terms.push_back({t.a, t.b - 1, t.c * t.b});
    }
    return p;
  }
};

inline ddr::ScalarField field(const Poly2& p) {
  return [p](const Point& x) { return p(x); };
}

// v = grad p
inline ddr::SigmaField gradient_field(const Poly2& p) {
  const Poly2 px = p.dx(), py = p.dy();
  return {[=](const Point& x) { return Point(px(x), py(x)); }, [](const Point&) { return 0.0; }};
}

// v = (p1, p2)
inline ddr::SigmaField vector_field(const Poly2& p1, const Poly2& p2) {
  const Poly2 d1p2 = p2.dx(), d2p1 = p1.dy();
  return {[=](const Point& x) { return Point(p1(x), p2(x)); }, [=](const Point& x) { return d1p2(x) - d2p1(x); }};
}

// Manufactured fields of the quad-rot benchmark.
inline Point exact_u(const Point& x) {
  const double s = std::sin(std::numbers::pi * (x.x() + x.y()));
  return Point(-s, s);
}
inline double exact_rot_u(const Point& x) { return 2 * std::numbers::pi * std::cos(std::numbers::pi * (x.x() + x.y())); }
inline double exact_p(const Point& x) { return std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y()); }

inline Eigen::VectorXd local(const ddr::DiscreteComplex& dc, ddr::SpaceKind space, int t, const Eigen::VectorXd& global) {
  const auto& dofs = dc.dofs(space, t);
  Eigen::VectorXd out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) out[i] = global[dofs[i]];
  return out;
}

// Values at points of an element polynomial family applied to coefficients.
inline Eigen::VectorXd eval(const ddr::ElementPolys& p, const Eigen::VectorXd& c, const Eigen::Matrix2Xd& pts) {
  return p.values(pts).transpose() * c;
}
inline Eigen::Matrix2Xd eval_vector(const ddr::ElementPolys& p, const Eigen::VectorXd& c, const Eigen::Matrix2Xd& pts) {
  const auto v = p.vector_values(pts);
  Eigen::Matrix2Xd out(2, pts.cols());
  out.row(0) = (v.x.transpose() * c).transpose();
  out.row(1) = (v.y.transpose() * c).transpose();
  return out;
}

inline std::vector<ddr::Mesh> structured_meshes(int n) {
  return {ddr::build_structured_mesh(ddr::MeshFamily::cartesian, n),
          ddr::build_structured_mesh(ddr::MeshFamily::triangular, n),
          ddr::build_structured_mesh(ddr::MeshFamily::hexagonal, n)};
}

}  // namespace testing
