#include "ddr/operators.hpp"

#include "ddr/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace ddr {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Offsets of the local DOFs of one element: element block, edge blocks in loop
// order, one value per vertex.
struct LocalIndex {
  int n = 0;
  int elem = 0;
  int edge = 0;

  int size() const { return elem + n * edge + n; }
  int edge_start(int i) const { return elem + i * edge; }
  int vertex(int i) const { return elem + n * edge + i; }
};

MatrixXd along(const VectorValues& v, const Point& d) { return v.x * d.x() + v.y * d.y(); }

Eigen::Matrix2Xd single(const Point& x) { return Eigen::Matrix2Xd(x); }

// Picks [moments, value at edge vertices[0], value at edge vertices[1]] for
// local edge i out of the local DOFs of a scalar space.
MatrixXd scalar_edge_selector(const Mesh& mesh, const Element& el, int i, const LocalIndex& li, int moments) {
  MatrixXd s = MatrixXd::Zero(moments + 2, li.size());
  for (int r = 0; r < moments; ++r) s(r, li.edge_start(i) + r) = 1.0;
  const Edge& E = mesh.edge(el.edges[i]);
  const int a = i, b = (i + 1) % li.n;
  const bool forward = E.vertices[0] == el.vertices[a];
  s(moments, li.vertex(forward ? a : b)) = 1.0;
  s(moments + 1, li.vertex(forward ? b : a)) = 1.0;
  return s;
}

MatrixXd block_selector(int rows, int first, int total) {
  MatrixXd s = MatrixXd::Zero(rows, total);
  for (int r = 0; r < rows; ++r) s(r, first + r) = 1.0;
  return s;
}

MatrixXd solve_square(const MatrixXd& a, const MatrixXd& rhs, int element, const char* what) {
  if (a.rows() != a.cols()) {
    throw std::logic_error(std::string(what) + ": local system is not square on element " + std::to_string(element));
  }
  Eigen::FullPivLU<MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw std::runtime_error(std::string(what) + ": singular local system on element " + std::to_string(element));
  }
  return a.partialPivLu().solve(rhs);
}

MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

DiscreteComplex::DiscreteComplex(const Mesh& mesh, int k, int threads, int high_degree)
    : k_(k), threads_(std::max(1, threads)), bases_(std::make_unique<SpaceBases>(mesh, k, threads_, high_degree)) {
  layout_V_ = space_layout(mesh, k, SpaceKind::V);
  layout_Sigma_ = space_layout(mesh, k, SpaceKind::Sigma);
  layout_W_ = space_layout(mesh, k, SpaceKind::W);
  const int nt = mesh.n_elements();
  dofs_V_.resize(nt);
  dofs_Sigma_.resize(nt);
  dofs_W_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    dofs_V_[t] = local_dofs(layout_V_, mesh, t);
    dofs_Sigma_[t] = local_dofs(layout_Sigma_, mesh, t);
    dofs_W_[t] = local_dofs(layout_W_, mesh, t);
  }
  edges_.resize(mesh.n_edges());
  elements_.resize(nt);
  parallel_for(mesh.n_edges(), threads_, [&](int e) { build_edge(e); });
  parallel_for(nt, threads_, [&](int t) { build_element(t); });
}

const SpaceLayout& DiscreteComplex::layout(SpaceKind space) const {
  switch (space) {
    case SpaceKind::V: return layout_V_;
    case SpaceKind::Sigma: return layout_Sigma_;
    case SpaceKind::W: return layout_W_;
  }
  throw std::logic_error("unknown space");
}

SpaceLayout DiscreteComplex::layout(SpaceKind space, BoundaryCondition bc) const {
  if (bc == BoundaryCondition::none) return layout(space);
  return space_layout(mesh(), k_, space, Variant::full, bc);
}

const std::vector<int>& DiscreteComplex::dofs(SpaceKind space, int element) const {
  switch (space) {
    case SpaceKind::V: return dofs_V_[element];
    case SpaceKind::Sigma: return dofs_Sigma_[element];
    case SpaceKind::W: return dofs_W_[element];
  }
  throw std::logic_error("unknown space");
}

void DiscreteComplex::build_edge(int e) {
  const int k = k_;
  const Edge& E = mesh().edge(e);
  const EdgeBases& b = bases_->edge(e);
  const auto& pts = b.rule.points;
  const auto& w = b.rule.weights;
  const EdgePolys pk1 = b.poly(k + 1), pk = b.poly(k), pkm1 = b.poly(k - 1);
  const MatrixXd psi_k1 = pk1.values(pts);
  const MatrixXd psi_km1 = pkm1.values(pts);

  MatrixXd m(k + 2, k + 2);
  m.topRows(k) = integrate(psi_km1, psi_k1, w);
  m.row(k) = pk1.values(single(mesh().vertex(E.vertices[0]).x)).transpose();
  m.row(k + 1) = pk1.values(single(mesh().vertex(E.vertices[1]).x)).transpose();
  MatrixXd rhs = MatrixXd::Zero(k + 2, k + 2);
  rhs.topLeftCorner(k, k) = integrate(psi_km1, psi_km1, w);
  rhs(k, k) = rhs(k + 1, k + 1) = 1.0;
  EdgeOperators& out = edges_[e];
  out.potential = solve_square(m, rhs, e, "edge potential");

  const MatrixXd psi_k = pk.values(pts);
  const MatrixXd gram_k = integrate(psi_k, psi_k, w);
  out.gradient = gram_k.ldlt().solve(integrate(psi_k, pk1.derivatives(pts), w) * out.potential);
}

void DiscreteComplex::build_element(int t) {
  const int k = k_;
  const Mesh& mesh = this->mesh();
  const Element& el = mesh.element(t);
  const ElementBases& b = bases_->element(t);
  const double h = el.diameter;
  const int n = static_cast<int>(el.edges.size());
  const auto& pts = b.rule.points;
  const auto& w = b.rule.weights;

  const ElementPolys pk1 = b.poly(k + 1), pk = b.poly(k), pkm1 = b.poly(k - 1);
  const ElementPolys& vp = b.vpoly_k.polys;
  const int n1 = pk1.size(), nk = pk.size(), nkm1 = pkm1.size(), nvp = vp.size();
  const MatrixXd phi_k1 = pk1.values(pts), phi_k = pk.values(pts), phi_km1 = pkm1.values(pts);
  const VectorValues vp_vals = vp.vector_values(pts);
  const MatrixXd gram_vp = integrate(vp_vals, vp_vals, w);
  const MatrixXd gram_k = integrate(phi_k, phi_k, w);
  const MatrixXd gram_k1 = integrate(phi_k1, phi_k1, w);
  const auto gram_vp_ldlt = gram_vp.ldlt();

  const int n_head = b.roly_km1.dim(), n_tail = b.croly_k.dim();
  const LocalIndex lv{n, nkm1, k};
  const LocalIndex ls{n, n_head + n_tail, 2 * k + 1};
  const LocalIndex lw{n, nk, k};

  // Per-edge quantities shared by several reconstructions.
  struct EdgeData {
    int id;
    double omega;
    Point t, nrm;
    const QuadratureRule* rule;
    MatrixXd psi_k1, psi_k, psi_km1;
    MatrixXd sel_v, sel_w;  // potential inputs from V and W local DOFs
    MatrixXd pot_v, pot_w;  // P^{k+1}(E) coefficients as functions of local DOFs
  };
  std::vector<EdgeData> ed(n);
  for (int i = 0; i < n; ++i) {
    EdgeData& d = ed[i];
    d.id = el.edges[i];
    d.omega = el.orientations[i];
    const Edge& E = mesh.edge(d.id);
    d.t = E.tangent;
    d.nrm = E.normal;
    const EdgeBases& eb = bases_->edge(d.id);
    d.rule = &eb.rule;
    d.psi_k1 = eb.poly(k + 1).values(eb.rule.points);
    d.psi_k = eb.poly(k).values(eb.rule.points);
    d.psi_km1 = eb.poly(k - 1).values(eb.rule.points);
    d.sel_v = scalar_edge_selector(mesh, el, i, lv, k);
    d.sel_w = scalar_edge_selector(mesh, el, i, lw, k);
    d.pot_v = edges_[d.id].potential * d.sel_v;
    d.pot_w = edges_[d.id].potential * d.sel_w;
  }

  ElementOperators& out = elements_[t];

  // Element gradient.
  {
    MatrixXd rhs = MatrixXd::Zero(nvp, lv.size());
    rhs.leftCols(nkm1) = -integrate(div(vp).values(pts), phi_km1, w);
    for (const auto& d : ed) {
      const auto vals = vp.vector_values(d.rule->points);
      rhs += d.omega * integrate(along(vals, d.nrm), d.psi_k1, d.rule->weights) * d.pot_v;
    }
    out.gradient = gram_vp_ldlt.solve(rhs);
  }

  // Scalar potential on V, tested against cRoly^{k+2}.
  {
    const ElementPolys& c2 = b.croly_k2.polys;
    const MatrixXd a = integrate(div(c2).values(pts), phi_k1, w);
    MatrixXd rhs = -integrate(c2.vector_values(pts), vp_vals, w) * out.gradient;
    for (const auto& d : ed) {
      const auto vals = c2.vector_values(d.rule->points);
      rhs += d.omega * integrate(along(vals, d.nrm), d.psi_k1, d.rule->weights) * d.pot_v;
    }
    out.potential_V = solve_square(a, rhs, t, "scalar potential");
  }

  // Local Sigma DOFs of the gradient.
  {
    MatrixXd g = MatrixXd::Zero(ls.size(), lv.size());
    const VectorValues roly = b.roly_km1.polys.vector_values(pts);
    const VectorValues croly = b.croly_k.polys.vector_values(pts);
    if (n_head > 0) {
      g.topRows(n_head) = integrate(roly, roly, w).ldlt().solve(integrate(roly, vp_vals, w) * out.gradient);
    }
    if (n_tail > 0) {
      g.middleRows(n_head, n_tail) = integrate(croly, croly, w).ldlt().solve(integrate(croly, vp_vals, w) * out.gradient);
    }
    for (int i = 0; i < n; ++i) g.middleRows(ls.edge_start(i), k + 1) = edges_[ed[i].id].gradient * ed[i].sel_v;
    out.gradient_dofs = g;
  }

  // Pressure L2 product built on the potentials.
  {
    MatrixXd m = out.potential_V.transpose() * gram_k1 * out.potential_V;
    for (const auto& d : ed) {
      const MatrixXd ge = integrate(d.psi_k1, d.psi_k1, d.rule->weights);
      m += h * d.pot_v.transpose() * ge * d.pot_v;
    }
    out.v_l2_product = symmetrized(m);
  }

  // Scalar rotor.
  {
    MatrixXd rhs = MatrixXd::Zero(nk, ls.size());
    if (n_head > 0) rhs.leftCols(n_head) = integrate(vrot(pk).vector_values(pts), b.roly_km1.polys.vector_values(pts), w);
    for (int i = 0; i < n; ++i) {
      const auto& d = ed[i];
      rhs.middleCols(ls.edge_start(i), k + 1) -=
          d.omega * integrate(pk.values(d.rule->points), d.psi_k, d.rule->weights);
    }
    out.rotor = gram_k.ldlt().solve(rhs);
  }

  // Vector potential, tested against vrot P^{k+1,0} + cRoly^k.
  {
    const ElementPolys q0 = pk1.rows(1, n1 - 1);
    const VectorValues tq = vrot(q0).vector_values(pts);
    const VectorValues tw = b.croly_k.polys.vector_values(pts);
    MatrixXd a(q0.size() + n_tail, nvp);
    a.topRows(q0.size()) = integrate(tq, vp_vals, w);
    if (n_tail > 0) a.bottomRows(n_tail) = integrate(tw, vp_vals, w);
    MatrixXd rhs = MatrixXd::Zero(a.rows(), ls.size());
    const MatrixXd phi_q0 = q0.values(pts);
    rhs.topRows(q0.size()) = integrate(phi_q0, phi_k, w) * out.rotor;
    for (int i = 0; i < n; ++i) {
      const auto& d = ed[i];
      rhs.block(0, ls.edge_start(i), q0.size(), k + 1) +=
          d.omega * integrate(q0.values(d.rule->points), d.psi_k, d.rule->weights);
    }
    if (n_tail > 0) rhs.block(q0.size(), n_head, n_tail, n_tail) = integrate(tw, tw, w);
    out.potential_Sigma = solve_square(a, rhs, t, "vector potential");
  }

  // Local W DOFs of the rotor.
  {
    MatrixXd r = MatrixXd::Zero(lw.size(), ls.size());
    r.topRows(nk) = out.rotor;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < k; ++j) r(lw.edge_start(i) + j, ls.edge_start(i) + k + 1 + j) = 1.0;
      r(lw.vertex(i), ls.vertex(i)) = 1.0;
    }
    out.rotor_dofs = r;
  }

  // Discrete L2-product on Sigma.
  {
    const MatrixXd& ps = out.potential_Sigma;
    MatrixXd m = ps.transpose() * gram_vp * ps;
    for (int i = 0; i < n; ++i) {
      const auto& d = ed[i];
      const auto& ew = d.rule->weights;
      const MatrixXd trace = along(vp.vector_values(d.rule->points), d.t).transpose() * ps -
                             d.psi_k.transpose() * block_selector(k + 1, ls.edge_start(i), ls.size());
      m += h * trace.transpose() * ew.asDiagonal() * trace;
      if (k > 0) {
        const MatrixXd gk = integrate(d.psi_km1, d.psi_km1, ew);
        const MatrixXd rot_on_edge = pk.values(d.rule->points).transpose() * out.rotor;
        const MatrixXd c = gk.ldlt().solve(d.psi_km1 * ew.asDiagonal() * rot_on_edge) -
                           block_selector(k, ls.edge_start(i) + k + 1, ls.size());
        m += std::pow(h, 3) * c.transpose() * gk * c;
      }
      const MatrixXd at_vertex = pk.values(single(mesh.vertex(el.vertices[i]).x)).transpose() * out.rotor -
                                 block_selector(1, ls.vertex(i), ls.size());
      m += std::pow(h, 4) * at_vertex.transpose() * at_vertex;
    }
    out.sigma_product = symmetrized(m);
  }

  // W side: vector rotor and scalar potential.
  {
    MatrixXd rhs = MatrixXd::Zero(nvp, lw.size());
    rhs.leftCols(nk) = integrate(rot(vp).values(pts), phi_k, w);
    for (const auto& d : ed) {
      const auto vals = vp.vector_values(d.rule->points);
      rhs += d.omega * integrate(along(vals, d.t), d.psi_k1, d.rule->weights) * d.pot_w;
    }
    out.vector_rotor = gram_vp_ldlt.solve(rhs);
  }
  {
    const ElementPolys& g2 = b.cgoly_k2.polys;
    const MatrixXd a = integrate(rot(g2).values(pts), phi_k1, w);
    MatrixXd rhs = integrate(g2.vector_values(pts), vp_vals, w) * out.vector_rotor;
    for (const auto& d : ed) {
      const auto vals = g2.vector_values(d.rule->points);
      rhs -= d.omega * integrate(along(vals, d.t), d.psi_k1, d.rule->weights) * d.pot_w;
    }
    out.potential_W = solve_square(a, rhs, t, "W scalar potential");
  }

  // Stabilization and local bilinear form.
  {
    const MatrixXd& pw = out.potential_W;
    const MatrixXd c = gram_k.ldlt().solve(integrate(phi_k, phi_k1, w) * pw) - block_selector(nk, 0, lw.size());
    MatrixXd s = c.transpose() * gram_k * c / (h * h);
    for (const auto& d : ed) {
      const auto& ew = d.rule->weights;
      const MatrixXd jump = pk1.values(d.rule->points).transpose() * pw - d.psi_k1.transpose() * d.pot_w;
      s += jump.transpose() * ew.asDiagonal() * jump / h;
    }
    out.stabilization = symmetrized(s);
    const MatrixXd consistency = out.vector_rotor.transpose() * gram_vp * out.vector_rotor;
    out.a = symmetrized(out.rotor_dofs.transpose() * (consistency + out.stabilization) * out.rotor_dofs);
  }

  // Component-norm weights.
  const auto weights = [&](const LocalIndex& li, double edge_w, double vertex_w, double tail_w, int head) {
    VectorXd wv = VectorXd::Ones(li.size());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < li.edge; ++j) wv[li.edge_start(i) + j] = j < head ? edge_w : tail_w;
      wv[li.vertex(i)] = vertex_w;
    }
    return wv;
  };
  out.v_weights = weights(lv, h, h * h, h, k);
  out.w_weights = weights(lw, h, h * h, h, k);
  out.sigma_weights = weights(ls, h, std::pow(h, 4), std::pow(h, 3), k + 1);
}

namespace {

SparseMatrix assemble_local(int rows, int cols, int n_elements, const std::function<const MatrixXd&(int)>& local,
                            const std::function<const std::vector<int>&(int)>& row_dofs,
                            const std::function<const std::vector<int>&(int)>& col_dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int t = 0; t < n_elements; ++t) {
    const MatrixXd& m = local(t);
    const auto& r = row_dofs(t);
    const auto& c = col_dofs(t);
    for (int j = 0; j < m.cols(); ++j) {
      for (int i = 0; i < m.rows(); ++i) {
        if (m(i, j) != 0.0) trip.emplace_back(r[i], c[j], m(i, j));
      }
    }
  }
  SparseMatrix out(rows, cols);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

GlobalOperator finish(const DiscreteComplex& dc, GlobalOperator full, SpaceKind dom, SpaceKind cod,
                      BoundaryCondition bc) {
  if (bc == BoundaryCondition::none) return full;
  return restrict(full, dc.layout(dom, bc), dc.layout(cod, bc));
}

}  // namespace

GlobalOperator global_gradient(const DiscreteComplex& dc, BoundaryCondition bc) {
  const Mesh& mesh = dc.mesh();
  const int k = dc.k();
  const SpaceLayout& lv = dc.layout(SpaceKind::V);
  const SpaceLayout& ls = dc.layout(SpaceKind::Sigma);
  std::vector<Eigen::Triplet<double>> trip;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const MatrixXd& g = dc.element(t).gradient_dofs;
    const auto& cols = dc.dofs(SpaceKind::V, t);
    for (int i = 0; i < ls.element_size[t]; ++i) {
      for (int j = 0; j < g.cols(); ++j) {
        if (g(i, j) != 0.0) trip.emplace_back(ls.element_offset[t] + i, cols[j], g(i, j));
      }
    }
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MatrixXd& ge = dc.edge(e).gradient;
    std::vector<int> cols;
    for (int j = 0; j < k; ++j) cols.push_back(lv.edge_offset[e] + j);
    cols.push_back(lv.vertex_offset[mesh.edge(e).vertices[0]]);
    cols.push_back(lv.vertex_offset[mesh.edge(e).vertices[1]]);
    for (int i = 0; i < ge.rows(); ++i) {
      for (int j = 0; j < ge.cols(); ++j) {
        if (ge(i, j) != 0.0) trip.emplace_back(ls.edge_offset[e] + i, cols[j], ge(i, j));
      }
    }
  }
  GlobalOperator op{lv, ls, SparseMatrix(ls.dim, lv.dim)};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return finish(dc, std::move(op), SpaceKind::V, SpaceKind::Sigma, bc);
}

GlobalOperator global_rotor(const DiscreteComplex& dc, BoundaryCondition bc) {
  const Mesh& mesh = dc.mesh();
  const int k = dc.k();
  const SpaceLayout& ls = dc.layout(SpaceKind::Sigma);
  const SpaceLayout& lw = dc.layout(SpaceKind::W);
  std::vector<Eigen::Triplet<double>> trip;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const MatrixXd& r = dc.element(t).rotor;
    const auto& cols = dc.dofs(SpaceKind::Sigma, t);
    for (int i = 0; i < r.rows(); ++i) {
      for (int j = 0; j < r.cols(); ++j) {
        if (r(i, j) != 0.0) trip.emplace_back(lw.element_offset[t] + i, cols[j], r(i, j));
      }
    }
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    for (int j = 0; j < k; ++j) trip.emplace_back(lw.edge_offset[e] + j, ls.edge_offset[e] + k + 1 + j, 1.0);
  }
  for (int v = 0; v < mesh.n_vertices(); ++v) trip.emplace_back(lw.vertex_offset[v], ls.vertex_offset[v], 1.0);
  GlobalOperator op{ls, lw, SparseMatrix(lw.dim, ls.dim)};
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return finish(dc, std::move(op), SpaceKind::Sigma, SpaceKind::W, bc);
}

GlobalOperator sigma_product(const DiscreteComplex& dc, BoundaryCondition bc) {
  const SpaceLayout& ls = dc.layout(SpaceKind::Sigma);
  const auto dofs = [&](int t) -> const std::vector<int>& { return dc.dofs(SpaceKind::Sigma, t); };
  GlobalOperator op{ls, ls,
                    assemble_local(ls.dim, ls.dim, dc.mesh().n_elements(),
                                   [&](int t) -> const MatrixXd& { return dc.element(t).sigma_product; }, dofs, dofs)};
  return finish(dc, std::move(op), SpaceKind::Sigma, SpaceKind::Sigma, bc);
}

GlobalOperator a_matrix(const DiscreteComplex& dc, BoundaryCondition bc) {
  const SpaceLayout& ls = dc.layout(SpaceKind::Sigma);
  const auto dofs = [&](int t) -> const std::vector<int>& { return dc.dofs(SpaceKind::Sigma, t); };
  GlobalOperator op{ls, ls,
                    assemble_local(ls.dim, ls.dim, dc.mesh().n_elements(),
                                   [&](int t) -> const MatrixXd& { return dc.element(t).a; }, dofs, dofs)};
  return finish(dc, std::move(op), SpaceKind::Sigma, SpaceKind::Sigma, bc);
}

GlobalOperator v_l2_product(const DiscreteComplex& dc, BoundaryCondition bc) {
  const SpaceLayout& lv = dc.layout(SpaceKind::V);
  const auto dofs = [&](int t) -> const std::vector<int>& { return dc.dofs(SpaceKind::V, t); };
  GlobalOperator op{lv, lv,
                    assemble_local(lv.dim, lv.dim, dc.mesh().n_elements(),
                                   [&](int t) -> const MatrixXd& { return dc.element(t).v_l2_product; }, dofs, dofs)};
  return finish(dc, std::move(op), SpaceKind::V, SpaceKind::V, bc);
}

GlobalOperator component_gram(const DiscreteComplex& dc, SpaceKind space, BoundaryCondition bc) {
  const SpaceLayout& l = dc.layout(space);
  VectorXd diag = VectorXd::Zero(l.dim);
  for (int t = 0; t < dc.mesh().n_elements(); ++t) {
    const ElementOperators& eo = dc.element(t);
    const VectorXd& wv = space == SpaceKind::V ? eo.v_weights : space == SpaceKind::W ? eo.w_weights : eo.sigma_weights;
    const auto& dofs = dc.dofs(space, t);
    for (int i = 0; i < wv.size(); ++i) diag[dofs[i]] += wv[i];
  }
  GlobalOperator op{l, l, SparseMatrix(l.dim, l.dim)};
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < l.dim; ++i) trip.emplace_back(i, i, diag[i]);
  op.matrix.setFromTriplets(trip.begin(), trip.end());
  return finish(dc, std::move(op), space, space, bc);
}

GlobalOperator restrict(const GlobalOperator& op, const SpaceLayout& domain, const SpaceLayout& codomain) {
  const auto inverse = [](const std::vector<int>& map, int full_dim) {
    std::vector<int> inv(full_dim, -1);
    for (std::size_t i = 0; i < map.size(); ++i) inv[map[i]] = static_cast<int>(i);
    return inv;
  };
  const auto col_inv = inverse(embedding(domain, op.domain), op.domain.dim);
  const auto row_inv = inverse(embedding(codomain, op.codomain), op.codomain.dim);
  std::vector<Eigen::Triplet<double>> trip;
  for (int j = 0; j < op.matrix.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(op.matrix, j); it; ++it) {
      const int r = row_inv[it.row()], c = col_inv[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  GlobalOperator out{domain, codomain, SparseMatrix(codomain.dim, domain.dim)};
  out.matrix.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd to_full(const DiscreteComplex& dc, const DofVector& v) {
  const SpaceLayout& full = dc.layout(v.layout.space);
  if (v.layout.bc == BoundaryCondition::none) return v.values;
  const auto map = embedding(v.layout, full);
  VectorXd out = VectorXd::Zero(full.dim);
  for (std::size_t i = 0; i < map.size(); ++i) out[map[i]] = v.values[i];
  return out;
}

DofVector from_full(const DiscreteComplex& dc, const SpaceLayout& layout, const Eigen::VectorXd& full) {
  const auto map = embedding(layout, dc.layout(layout.space));
  VectorXd out(layout.dim);
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = full[map[i]];
  return DofVector(layout, std::move(out));
}

double quadratic_norm(const SparseMatrix& m, const Eigen::VectorXd& x) {
  return std::sqrt(std::max(0.0, x.dot(m * x)));
}

double component_norm(const DiscreteComplex& dc, const DofVector& v) {
  return quadratic_norm(component_gram(dc, v.layout.space).matrix, to_full(dc, v));
}

double sigma_norm(const DiscreteComplex& dc, const DofVector& v) {
  if (v.layout.space != SpaceKind::Sigma) throw std::invalid_argument("sigma_norm needs a Sigma vector");
  return quadratic_norm(sigma_product(dc).matrix, to_full(dc, v));
}

double rotrot_norm(const DiscreteComplex& dc, const DofVector& v) {
  if (v.layout.space != SpaceKind::Sigma) throw std::invalid_argument("rotrot_norm needs a Sigma vector");
  return quadratic_norm(a_matrix(dc).matrix, to_full(dc, v));
}

double v_l2_norm(const DiscreteComplex& dc, const DofVector& v) {
  if (v.layout.space != SpaceKind::V) throw std::invalid_argument("v_l2_norm needs a V vector");
  return quadratic_norm(v_l2_product(dc).matrix, to_full(dc, v));
}

}  // namespace ddr
