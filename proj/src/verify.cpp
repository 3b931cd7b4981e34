#include "ddr/verify.hpp"

#include "ddr/scheme.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numbers>

namespace ddr {

RankInfo numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double min_gap) {
  RankInfo info;
  if (m.size() == 0) {
    info.gap = std::numeric_limits<double>::infinity();
    return info;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  info.sigma_max = s[0];
  info.threshold = rel_tol * s[0];
  if (s[0] == 0.0) {
    info.gap = std::numeric_limits<double>::infinity();
    return info;
  }
  int r = 0;
  while (r < s.size() && s[r] > info.threshold) ++r;
  info.rank = r;
  info.sigma_last = s[r - 1];
  info.sigma_next = r < s.size() ? s[r] : 0.0;
  info.gap = info.sigma_next > 0.0 ? info.sigma_last / info.sigma_next : std::numeric_limits<double>::infinity();
  info.conclusive = info.gap >= min_gap;
  return info;
}

ExactnessReport check_exactness(const Mesh& mesh, int k, BoundaryCondition bc, const std::string& mesh_name,
                                int threads) {
  const DiscreteComplex dc(mesh, k, threads);
  const GlobalOperator g = global_gradient(dc, bc);
  const GlobalOperator r = global_rotor(dc, bc);
  ExactnessReport rep;
  rep.mesh = mesh_name;
  rep.k = k;
  rep.bc = bc;
  rep.dim_V = g.domain.dim;
  rep.dim_Sigma = g.codomain.dim;
  rep.dim_W = r.codomain.dim;
  rep.rank_G = numerical_rank(Eigen::MatrixXd(g.matrix), rep.rel_tol);
  rep.rank_R = numerical_rank(Eigen::MatrixXd(r.matrix), rep.rel_tol);
  rep.nullity_G = rep.dim_V - rep.rank_G.rank;
  rep.nullity_R = rep.dim_Sigma - rep.rank_R.rank;
  const SparseMatrix rg = r.matrix * g.matrix;
  rep.composition_norm = rg.nonZeros() ? Eigen::MatrixXd(rg).lpNorm<Eigen::Infinity>() : 0.0;
  rep.kernel_ok = rep.nullity_G == (bc == BoundaryCondition::none ? 1 : 0);
  rep.image_ok = rep.rank_G.rank == rep.nullity_R;
  rep.target_dim_W = rep.dim_W;
  if (bc == BoundaryCondition::homogeneous) {
    // Mean functional on the element components of W_0.
    const SpaceLayout& lw = r.codomain;
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(lw.dim);
    for (int t = 0; t < mesh.n_elements(); ++t) {
      const ElementBases& b = dc.bases().element(t);
      mean.segment(lw.element_offset[t], lw.element_size[t]) = (b.poly(k).values(b.rule.points) * b.rule.weights).transpose();
    }
    const Eigen::RowVectorXd image = mean * r.matrix;
    const double scale = mean.norm() * Eigen::MatrixXd(r.matrix).norm();
    rep.mean_residual = scale > 0.0 ? image.lpNorm<Eigen::Infinity>() / scale : 0.0;
    rep.target_dim_W = rep.dim_W - 1;
  }
  rep.surjective_ok = rep.rank_R.rank == rep.target_dim_W;
  return rep;
}

FieldSuite default_field_suite(int k) {
  using std::numbers::pi;
  FieldSuite suite;
  const int d = k + 1;
  // q = sum_{a+b<=d} c_ab x^a y^b with deterministic coefficients.
  const auto coeff = [](int a, int b) { return 0.25 + 0.5 * std::sin(1.0 + 3.0 * a + 7.0 * b); };
  suite.scalars.push_back({fmt::format("poly{}", d),
                           [=](const Point& x) {
                             double s = 0;
                             for (int a = 0; a <= d; ++a)
                               for (int b = 0; a + b <= d; ++b) s += coeff(a, b) * std::pow(x.x(), a) * std::pow(x.y(), b);
                             return s;
                           },
                           {[=](const Point& x) {
                              Point g = Point::Zero();
                              for (int a = 0; a <= d; ++a) {
                                for (int b = 0; a + b <= d; ++b) {
                                  if (a > 0) g.x() += coeff(a, b) * a * std::pow(x.x(), a - 1) * std::pow(x.y(), b);
                                  if (b > 0) g.y() += coeff(a, b) * b * std::pow(x.x(), a) * std::pow(x.y(), b - 1);
                                }
                              }
                              return g;
                            },
                            [](const Point&) { return 0.0; }},
                           true});
  suite.scalars.push_back({"sin(pi x1) sin(pi x2)",
                           [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); },
                           {[](const Point& x) {
                              return Point(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                                           pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
                            },
                            [](const Point&) { return 0.0; }}});
  // v = (y^d + x y, x^d - x^2 y): rot v = d x^{d-1} - 2 x y - d y^{d-1} - x
  suite.vectors.push_back({fmt::format("vpoly{}", d),
                           {[=](const Point& x) {
                              return Point(std::pow(x.y(), d) + x.x() * x.y(), std::pow(x.x(), d) - x.x() * x.x() * x.y());
                            },
                            [=](const Point& x) {
                              return d * std::pow(x.x(), d - 1) - 2 * x.x() * x.y() - d * std::pow(x.y(), d - 1) - x.x();
                            }},
                           true});
  suite.vectors.push_back({"grad(x1^2 x2)",
                           {[](const Point& x) { return Point(2 * x.x() * x.y(), x.x() * x.x()); },
                            [](const Point&) { return 0.0; }},
                           true});
  const ManufacturedSolution ms = quad_rot_benchmark();
  suite.vectors.push_back({"u", {ms.u, ms.rot_u}});
  return suite;
}

std::vector<CommutationResult> check_commutation(const Mesh& mesh, int k, const FieldSuite& suite, int threads) {
  const DiscreteComplex dc(mesh, k, threads);
  const SparseMatrix g = global_gradient(dc).matrix;
  const SparseMatrix r = global_rotor(dc).matrix;
  const SparseMatrix ds = component_gram(dc, SpaceKind::Sigma).matrix;
  const SparseMatrix dw = component_gram(dc, SpaceKind::W).matrix;
  std::vector<CommutationResult> out;
  for (const auto& f : suite.scalars) {
    const DofVector iq = interpolate_V(dc.bases(), dc.layout(SpaceKind::V), f.q);
    const DofVector ig = interpolate_Sigma(dc.bases(), dc.layout(SpaceKind::Sigma), f.grad);
    out.push_back({f.name, "gradient", quadratic_norm(ds, g * iq.values - ig.values), f.polynomial});
  }
  for (const auto& f : suite.vectors) {
    const DofVector iv = interpolate_Sigma(dc.bases(), dc.layout(SpaceKind::Sigma), f.v);
    const DofVector ir = interpolate_W(dc.bases(), dc.layout(SpaceKind::W), f.v.rot);
    out.push_back({f.name, "rotor", quadratic_norm(dw, r * iv.values - ir.values), f.polynomial});
  }
  return out;
}

namespace {

// Smallest and largest eigenvalues of the pencil (K, diag(d)).
std::pair<double, double> diagonal_pencil_extremes(const Eigen::MatrixXd& k, const Eigen::VectorXd& d, bool& ok) {
  if (k.rows() == 0) return {0.0, 0.0};
  const Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = s.asDiagonal() * k * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (scaled + scaled.transpose()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    ok = false;
    return {0.0, 0.0};
  }
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

StabilityReport estimate_poincare(const Mesh& mesh, int k, const std::string& mesh_name, int threads) {
  const DiscreteComplex dc(mesh, k, threads);
  const auto bc = BoundaryCondition::homogeneous;
  const SparseMatrix g = global_gradient(dc, bc).matrix;
  const SparseMatrix m = sigma_product(dc, bc).matrix;
  const SparseMatrix a = a_matrix(dc, bc).matrix;
  const SparseMatrix ds = component_gram(dc, SpaceKind::Sigma, bc).matrix;
  const SparseMatrix dv = component_gram(dc, SpaceKind::V, bc).matrix;
  StabilityReport rep;
  rep.mesh = mesh_name;
  rep.k = k;
  rep.h = mesh.h();

  const Eigen::MatrixXd gtmg = Eigen::MatrixXd(SparseMatrix(g.transpose() * m * g));
  rep.lambda_P = diagonal_pencil_extremes(gtmg, Eigen::VectorXd(dv.diagonal()), rep.converged).first;

  const auto bracket = diagonal_pencil_extremes(Eigen::MatrixXd(m), Eigen::VectorXd(ds.diagonal()), rep.converged);
  rep.norm_lower = std::sqrt(std::max(0.0, bracket.first));
  rep.norm_upper = std::sqrt(std::max(0.0, bracket.second));

  // Saddle operator [[A, B], [-B^T, 0]] with B = M G, in the graph norm.
  const int ns = static_cast<int>(m.rows()), nv = static_cast<int>(g.cols());
  const Eigen::MatrixXd b = Eigen::MatrixXd(SparseMatrix(m * g));
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(ns + nv, ns + nv);
  kmat.topLeftCorner(ns, ns) = Eigen::MatrixXd(a);
  kmat.topRightCorner(ns, nv) = b;
  kmat.bottomLeftCorner(nv, ns) = -b.transpose();
  Eigen::MatrixXd nmat = Eigen::MatrixXd::Zero(ns + nv, ns + nv);
  nmat.topLeftCorner(ns, ns) = Eigen::MatrixXd(ds) + Eigen::MatrixXd(a);
  nmat.bottomRightCorner(nv, nv) = Eigen::MatrixXd(dv) + Eigen::MatrixXd(SparseMatrix(g.transpose() * ds * g));
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (nmat + nmat.transpose()));
  if (llt.info() != Eigen::Success) {
    rep.converged = false;
    return rep;
  }
  // L^{-1} K L^{-T}
  Eigen::MatrixXd x = llt.matrixL().solve(kmat);
  x = llt.matrixL().solve(x.transpose()).transpose();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(x);
  rep.gamma_h = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
  return rep;
}

std::string format_table(const ExactnessReport& r) {
  std::string out;
  out += fmt::format("exactness  mesh={} k={} bc={}\n", r.mesh, r.k, to_string(r.bc));
  out += fmt::format("  {:<22}{:>10}{:>10}{:>10}\n", "", "V", "Sigma", "W");
  out += fmt::format("  {:<22}{:>10}{:>10}{:>10}\n", "dimension", r.dim_V, r.dim_Sigma, r.dim_W);
  out += fmt::format("  {:<22}{:>10}{:>10}{:>10}\n", "rank(G), rank(R)", r.rank_G.rank, r.rank_R.rank, "");
  out += fmt::format("  {:<22}{:>30}\n", "target dim of R", r.target_dim_W);
  out += fmt::format("  {:<22}{:>10}{:>10}\n", "nullity(G), nullity(R)", r.nullity_G, r.nullity_R);
  out += fmt::format("  rank gap G {:.3e}, R {:.3e} (threshold {:g} x sigma_max)\n", r.rank_G.gap, r.rank_R.gap, r.rel_tol);
  out += fmt::format("  max |R G| = {:.3e}\n", r.composition_norm);
  out += fmt::format("  kernel {}  image {}  surjectivity {}  ->  {}\n", r.kernel_ok ? "ok" : "FAIL",
                     r.image_ok ? "ok" : "FAIL", r.surjective_ok ? "ok" : "FAIL",
                     !r.conclusive() ? "INCONCLUSIVE" : r.passed() ? "PASS" : "FAIL");
  return out;
}

std::string format_key_value(const ExactnessReport& r) {
  return fmt::format(
      "mesh={}\nk={}\nbc={}\ndim_V={}\ndim_Sigma={}\ndim_W={}\ntarget_dim_W={}\nmean_residual={:.17g}\nrank_G={}\nrank_R={}\nnullity_G={}\nnullity_R={}\n"
      "gap_G={:.17g}\ngap_R={:.17g}\nrank_tolerance={:g}\ncomposition_norm={:.17g}\nkernel_ok={}\nimage_ok={}\n"
      "surjective_ok={}\nconclusive={}\npassed={}\n",
      r.mesh, r.k, to_string(r.bc), r.dim_V, r.dim_Sigma, r.dim_W, r.target_dim_W, r.mean_residual, r.rank_G.rank, r.rank_R.rank, r.nullity_G,
      r.nullity_R, r.rank_G.gap, r.rank_R.gap, r.rel_tol, r.composition_norm, r.kernel_ok, r.image_ok,
      r.surjective_ok, r.conclusive(), r.passed());
}

std::string format_table(const std::vector<CommutationResult>& r) {
  std::string out = fmt::format("  {:<26}{:<10}{:>14}\n", "field", "diagram", "residual");
  for (const auto& c : r) out += fmt::format("  {:<26}{:<10}{:>14.3e}\n", c.field, c.kind, c.residual);
  return out;
}

std::string format_key_value(const std::vector<CommutationResult>& r) {
  std::string out;
  for (const auto& c : r) out += fmt::format("{}[{}]={:.17g}\n", c.kind, c.field, c.residual);
  return out;
}

std::string format_table(const StabilityReport& r) {
  return fmt::format(
      "stability  mesh={} k={} h={:.6g}\n  lambda_P = {:.6e}\n  gamma_h  = {:.6e}\n  "
      "||.||_Sigma / |||.|||_Sigma in [{:.4f}, {:.4f}]\n",
      r.mesh, r.k, r.h, r.lambda_P, r.gamma_h, r.norm_lower, r.norm_upper);
}

std::string format_key_value(const StabilityReport& r) {
  return fmt::format("mesh={}\nk={}\nh={:.17g}\nlambda_P={:.17g}\ngamma_h={:.17g}\nnorm_lower={:.17g}\nnorm_upper={:.17g}\nconverged={}\n",
                     r.mesh, r.k, r.h, r.lambda_P, r.gamma_h, r.norm_lower, r.norm_upper, r.converged);
}

}  // namespace ddr
