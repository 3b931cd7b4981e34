#include "ddr/spaces.hpp"

#include "ddr/parallel.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ddr {

std::string to_string(SpaceKind space) {
  switch (space) {
    case SpaceKind::V: return "V";
    case SpaceKind::Sigma: return "Sigma";
    case SpaceKind::W: return "W";
  }
  return "?";
}

std::string to_string(Variant variant) { return variant == Variant::full ? "full" : "serendipity"; }
std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::none ? "none" : "homogeneous"; }

SpaceKind parse_space(const std::string& name) {
  if (name == "V") return SpaceKind::V;
  if (name == "Sigma" || name == "S") return SpaceKind::Sigma;
  if (name == "W") return SpaceKind::W;
  throw std::invalid_argument("unknown space '" + name + "' (expected V, Sigma or W)");
}

Variant parse_variant(const std::string& name) {
  if (name == "full") return Variant::full;
  if (name == "serendipity") return Variant::serendipity;
  throw std::invalid_argument("unknown variant '" + name + "' (expected full or serendipity)");
}

BoundaryCondition parse_bc(const std::string& name) {
  if (name == "none") return BoundaryCondition::none;
  if (name == "homogeneous") return BoundaryCondition::homogeneous;
  throw std::invalid_argument("unknown boundary condition '" + name + "' (expected none or homogeneous)");
}

int count_non_aligned_edges(const Mesh& mesh, int element, double tol) {
  const Element& el = mesh.element(element);
  std::vector<int> reps;
  for (int e : el.edges) {
    const Edge& E = mesh.edge(e);
    bool aligned = false;
    for (int r : reps) {
      const Edge& R = mesh.edge(r);
      const auto cross = [](const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); };
      if (std::abs(cross(E.tangent, R.tangent)) < tol &&
          std::abs(cross(R.tangent, E.midpoint - R.midpoint)) < tol * el.diameter) {
        aligned = true;
        break;
      }
    }
    if (!aligned) reps.push_back(e);
  }
  return std::max(2, static_cast<int>(reps.size()));
}

int serendipity_degree(int k, int eta) { return std::max(k + 1 - eta, -1); }

int SpaceLayout::local_dim(const Mesh& mesh, int element) const {
  const auto& el = mesh.element(element);
  return element_size[element] + static_cast<int>(el.edges.size()) * (edge_size + 1);
}

SpaceLayout space_layout(const Mesh& mesh, int k, SpaceKind space, Variant variant, BoundaryCondition bc) {
  if (k < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
  SpaceLayout l;
  l.space = space;
  l.k = k;
  l.variant = variant;
  l.bc = bc;
  const int nt = mesh.n_elements();
  l.element_offset.resize(nt);
  l.element_size.resize(nt);
  l.element_head_size.assign(nt, 0);
  for (int t = 0; t < nt; ++t) {
    const int ell = variant == Variant::serendipity ? serendipity_degree(k, count_non_aligned_edges(mesh, t)) : k - 1;
    switch (space) {
      case SpaceKind::V: l.element_size[t] = dim_poly2(ell); break;
      case SpaceKind::Sigma:
        l.element_head_size[t] = dim_poly2(k) - 1;
        // Complement block: cRoly^k, or its serendipity reduction of dimension dim P^{ell-1}.
        l.element_size[t] = l.element_head_size[t] + dim_poly2(variant == Variant::serendipity ? ell - 1 : k - 1);
        break;
      case SpaceKind::W: l.element_size[t] = dim_poly2(k); break;
    }
  }
  if (space == SpaceKind::Sigma) {
    l.edge_head_size = dim_poly1(k);
    l.edge_size = dim_poly1(k) + dim_poly1(k - 1);
  } else {
    l.edge_size = dim_poly1(k - 1);
  }

  int offset = 0;
  for (int t = 0; t < nt; ++t) {
    l.element_offset[t] = offset;
    offset += l.element_size[t];
  }
  const bool drop = bc == BoundaryCondition::homogeneous;
  l.edge_offset.assign(mesh.n_edges(), -1);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (drop && mesh.edge(e).boundary) continue;
    l.edge_offset[e] = offset;
    offset += l.edge_size;
  }
  l.vertex_offset.assign(mesh.n_vertices(), -1);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    if (drop && mesh.is_boundary_vertex(v)) continue;
    l.vertex_offset[v] = offset;
    offset += 1;
  }
  l.dim = offset;
  return l;
}

std::vector<int> local_dofs(const SpaceLayout& layout, const Mesh& mesh, int element) {
  const Element& el = mesh.element(element);
  std::vector<int> out;
  out.reserve(layout.local_dim(mesh, element));
  for (int i = 0; i < layout.element_size[element]; ++i) out.push_back(layout.element_offset[element] + i);
  for (int e : el.edges) {
    const int off = layout.edge_offset[e];
    for (int i = 0; i < layout.edge_size; ++i) out.push_back(off < 0 ? -1 : off + i);
  }
  for (int v : el.vertices) out.push_back(layout.vertex_offset[v]);
  return out;
}

std::vector<int> embedding(const SpaceLayout& reduced, const SpaceLayout& full) {
  if (reduced.space != full.space || reduced.k != full.k || reduced.variant != full.variant ||
      reduced.element_size != full.element_size || reduced.edge_size != full.edge_size) {
    throw std::invalid_argument("embedding needs layouts of the same space");
  }
  std::vector<int> map(reduced.dim, -1);
  for (std::size_t t = 0; t < reduced.element_offset.size(); ++t) {
    for (int i = 0; i < reduced.element_size[t]; ++i) map[reduced.element_offset[t] + i] = full.element_offset[t] + i;
  }
  for (std::size_t e = 0; e < reduced.edge_offset.size(); ++e) {
    if (reduced.edge_offset[e] < 0) continue;
    if (full.edge_offset[e] < 0) throw std::invalid_argument("target layout lacks an edge block");
    for (int i = 0; i < reduced.edge_size; ++i) map[reduced.edge_offset[e] + i] = full.edge_offset[e] + i;
  }
  for (std::size_t v = 0; v < reduced.vertex_offset.size(); ++v) {
    if (reduced.vertex_offset[v] < 0) continue;
    if (full.vertex_offset[v] < 0) throw std::invalid_argument("target layout lacks a vertex");
    map[reduced.vertex_offset[v]] = full.vertex_offset[v];
  }
  return map;
}

DofVector::DofVector(SpaceLayout l, Eigen::VectorXd v) : layout(std::move(l)), values(std::move(v)) {
  if (values.size() != layout.dim) throw std::invalid_argument("DOF vector size does not match its layout");
}

SpaceBases::SpaceBases(const Mesh& mesh, int k, int threads, int high_degree) : mesh_(&mesh), k_(k), threads_(std::max(1, threads)) {
  if (k < 0) throw std::invalid_argument("polynomial degree must be nonnegative");
  elements_.resize(mesh.n_elements());
  edges_.resize(mesh.n_edges());
  const int poly_degree = 2 * k + 4;
  const int high = high_degree > 0 ? high_degree : high_order_degree(k);
  parallel_for(mesh.n_elements(), threads, [&](int t) {
    ElementBases& b = elements_[t];
    b.poly_k1 = complement_basis(mesh, t, BasisKind::P, k + 1);
    b.vpoly_k = complement_basis(mesh, t, BasisKind::vP, k);
    b.roly_km1 = complement_basis(mesh, t, BasisKind::Roly, k - 1);
    b.croly_k = complement_basis(mesh, t, BasisKind::cRoly, k);
    b.croly_k2 = complement_basis(mesh, t, BasisKind::cRoly, k + 2);
    b.cgoly_k2 = complement_basis(mesh, t, BasisKind::cGoly, k + 2);
    b.rule = element_rule(mesh, t, poly_degree);
    b.high_rule = element_rule(mesh, t, high);
  });
  parallel_for(mesh.n_edges(), threads, [&](int e) {
    EdgeBases& b = edges_[e];
    b.poly_k1 = scalar_edge_basis(mesh, e, k + 1);
    b.rule = edge_rule(mesh, e, poly_degree);
    b.high_rule = edge_rule(mesh, e, high);
  });
}

namespace {

// L2 projection of sampled values onto a family (Gram taken with the same rule).
Eigen::VectorXd project_samples(const Eigen::MatrixXd& basis_vals, const Eigen::VectorXd& w, const Eigen::VectorXd& f) {
  if (basis_vals.rows() == 0) return Eigen::VectorXd(0);
  const Eigen::MatrixXd gram = integrate(basis_vals, basis_vals, w);
  return gram.ldlt().solve(basis_vals * w.asDiagonal() * f);
}

Eigen::VectorXd project_vector_samples(const VectorValues& vals, const Eigen::VectorXd& w, const Eigen::VectorXd& fx,
                                       const Eigen::VectorXd& fy) {
  if (vals.x.rows() == 0) return Eigen::VectorXd(0);
  const Eigen::MatrixXd gram = integrate(vals, vals, w);
  const Eigen::VectorXd rhs = vals.x * w.asDiagonal() * fx + vals.y * w.asDiagonal() * fy;
  return gram.ldlt().solve(rhs);
}

Eigen::VectorXd sample(const ScalarField& f, const Eigen::Matrix2Xd& pts) {
  Eigen::VectorXd out(pts.cols());
  for (int q = 0; q < pts.cols(); ++q) out[q] = f(Point(pts.col(q)));
  return out;
}

// Writes a block into the layout or, for a dropped block, checks that it vanishes.
struct BlockWriter {
  Eigen::VectorXd& out;
  double dropped_max = 0.0;

  void put(int offset, const Eigen::VectorXd& block) {
    if (offset >= 0) {
      out.segment(offset, block.size()) = block;
    } else if (block.size() > 0) {
      dropped_max = std::max(dropped_max, block.cwiseAbs().maxCoeff());
    }
  }
};

void check_layout(const SpaceBases& bases, const SpaceLayout& layout, SpaceKind space) {
  if (layout.space != space) throw std::invalid_argument("interpolator called with a layout of another space");
  if (layout.variant != Variant::full) throw std::invalid_argument("interpolation is only available for full spaces");
  if (layout.k != bases.k()) throw std::invalid_argument("layout degree differs from the basis degree");
}

void warn_trace(const char* space, double dropped) {
  if (dropped > 1e-10) {
    fmt::print(stderr, "warning: I_{} discards boundary values up to {:.3e}; the field does not satisfy the boundary condition\n",
               space, dropped);
  }
}

// Scalar interpolator shared by V (element degree k-1) and W (element degree k).
DofVector interpolate_scalar(const SpaceBases& bases, const SpaceLayout& layout, const ScalarField& q, int elem_degree) {
  const Mesh& mesh = bases.mesh();
  const int k = bases.k();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.dim);
  std::vector<double> dropped(std::max(mesh.n_edges(), mesh.n_vertices()), 0.0);
  parallel_for(mesh.n_elements(), bases.threads(), [&](int t) {
    const auto& b = bases.element(t);
    const Eigen::VectorXd f = sample(q, b.high_rule.points);
    BlockWriter w{out};
    w.put(layout.element_offset[t], project_samples(b.poly(elem_degree).values(b.high_rule.points), b.high_rule.weights, f));
  });
  parallel_for(mesh.n_edges(), bases.threads(), [&](int e) {
    const auto& b = bases.edge(e);
    BlockWriter w{out};
    w.put(layout.edge_offset[e],
          project_samples(b.poly(k - 1).values(b.high_rule.points), b.high_rule.weights, sample(q, b.high_rule.points)));
    dropped[e] = w.dropped_max;
  });
  double drop = 0.0;
  for (double d : dropped) drop = std::max(drop, d);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const double val = q(mesh.vertex(v).x);
    if (layout.vertex_offset[v] >= 0) {
      out[layout.vertex_offset[v]] = val;
    } else {
      drop = std::max(drop, std::abs(val));
    }
  }
  warn_trace(layout.space == SpaceKind::V ? "V" : "W", drop);
  return DofVector(layout, std::move(out));
}

}  // namespace

DofVector interpolate_V(const SpaceBases& bases, const SpaceLayout& layout, const ScalarField& q) {
  check_layout(bases, layout, SpaceKind::V);
  return interpolate_scalar(bases, layout, q, bases.k() - 1);
}

DofVector interpolate_W(const SpaceBases& bases, const SpaceLayout& layout, const ScalarField& r) {
  check_layout(bases, layout, SpaceKind::W);
  return interpolate_scalar(bases, layout, r, bases.k());
}

DofVector interpolate_Sigma(const SpaceBases& bases, const SpaceLayout& layout, const SigmaField& v) {
  check_layout(bases, layout, SpaceKind::Sigma);
  const Mesh& mesh = bases.mesh();
  const int k = bases.k();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.dim);
  std::vector<double> dropped(mesh.n_edges(), 0.0);
  parallel_for(mesh.n_elements(), bases.threads(), [&](int t) {
    const auto& b = bases.element(t);
    const auto& pts = b.high_rule.points;
    Eigen::VectorXd fx(pts.cols()), fy(pts.cols());
    for (int q = 0; q < pts.cols(); ++q) {
      const Point val = v.value(Point(pts.col(q)));
      fx[q] = val.x();
      fy[q] = val.y();
    }
    const Eigen::VectorXd head = project_vector_samples(b.roly_km1.polys.vector_values(pts), b.high_rule.weights, fx, fy);
    const Eigen::VectorXd tail = project_vector_samples(b.croly_k.polys.vector_values(pts), b.high_rule.weights, fx, fy);
    Eigen::VectorXd block(head.size() + tail.size());
    block << head, tail;
    BlockWriter w{out};
    w.put(layout.element_offset[t], block);
  });
  parallel_for(mesh.n_edges(), bases.threads(), [&](int e) {
    const auto& b = bases.edge(e);
    const Edge& E = mesh.edge(e);
    const auto& pts = b.high_rule.points;
    Eigen::VectorXd vt(pts.cols()), rv(pts.cols());
    for (int q = 0; q < pts.cols(); ++q) {
      const Point x(pts.col(q));
      vt[q] = v.value(x).dot(E.tangent);
      rv[q] = v.rot(x);
    }
    const Eigen::VectorXd tang = project_samples(b.poly(k).values(pts), b.high_rule.weights, vt);
    const Eigen::VectorXd rotb = project_samples(b.poly(k - 1).values(pts), b.high_rule.weights, rv);
    Eigen::VectorXd block(tang.size() + rotb.size());
    block << tang, rotb;
    BlockWriter w{out};
    w.put(layout.edge_offset[e], block);
    dropped[e] = w.dropped_max;
  });
  double drop = 0.0;
  for (double d : dropped) drop = std::max(drop, d);
  for (int n = 0; n < mesh.n_vertices(); ++n) {
    const double val = v.rot(mesh.vertex(n).x);
    if (layout.vertex_offset[n] >= 0) {
      out[layout.vertex_offset[n]] = val;
    } else {
      drop = std::max(drop, std::abs(val));
    }
  }
  warn_trace("Sigma", drop);
  return DofVector(layout, std::move(out));
}

std::pair<int, int> local_dof_counts(const Mesh& single_element_mesh, int k, SpaceKind space) {
  if (single_element_mesh.n_elements() != 1) throw std::invalid_argument("expected a single-element mesh");
  const SpaceLayout full = space_layout(single_element_mesh, k, space, Variant::full);
  const SpaceLayout ser = space_layout(single_element_mesh, k, space, Variant::serendipity);
  return {full.dim, ser.dim};
}

}  // namespace ddr
