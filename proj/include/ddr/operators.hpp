// Local reconstructions of the discrete rot-rot complex, global gradient and
// rotor matrices, the discrete L2-product on Sigma, the local bilinear form of
// the quad-rot scheme, and the discrete norms.
#pragma once

#include "ddr/spaces.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>

namespace ddr {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Reconstructions attached to one edge. Columns follow the edge-local order
/// [moments in P^{k-1}(E), value at vertices[0], value at vertices[1]], shared
/// by V and W.
struct EdgeOperators {
  Eigen::MatrixXd potential;  // P^{k+1}(E) coefficients, (k+2) x (k+2)
  Eigen::MatrixXd gradient;   // P^k(E) coefficients of the tangential derivative, (k+1) x (k+2)
};

/// Local matrices of one element. Columns are indexed by the element's local
/// DOFs of the space named in the comment (see local_dofs()).
struct ElementOperators {
  // V columns
  Eigen::MatrixXd gradient;         // G_T: vP^k coefficients
  Eigen::MatrixXd potential_V;      // P_{V,T}: P^{k+1} coefficients
  Eigen::MatrixXd gradient_dofs;    // local Sigma DOFs of the discrete gradient
  Eigen::MatrixXd v_l2_product;     // P_{V,T}-based L2 product (pressure norm)
  // Sigma columns
  Eigen::MatrixXd rotor;            // R_T: P^k coefficients
  Eigen::MatrixXd potential_Sigma;  // P_{Sigma,T}: vP^k coefficients
  Eigen::MatrixXd rotor_dofs;       // local W DOFs of the discrete rotor
  Eigen::MatrixXd sigma_product;    // local discrete L2-product
  Eigen::MatrixXd a;                // local bilinear form a_T
  // W columns
  Eigen::MatrixXd vector_rotor;     // vP^k coefficients
  Eigen::MatrixXd potential_W;      // P_{W,T}: P^{k+1} coefficients
  Eigen::MatrixXd stabilization;    // s_T
  // Diagonal weights of the component norms (local DOF order)
  Eigen::VectorXd v_weights, sigma_weights, w_weights;
};

class DiscreteComplex {
 public:
  /// The mesh must outlive the complex.
  DiscreteComplex(const Mesh& mesh, int k, int threads = 1, int high_degree = 0);

  const Mesh& mesh() const { return bases_->mesh(); }
  int k() const { return k_; }
  int threads() const { return threads_; }
  const SpaceBases& bases() const { return *bases_; }
  const EdgeOperators& edge(int e) const { return edges_[e]; }
  const ElementOperators& element(int t) const { return elements_[t]; }

  /// Full layouts (no boundary conditions).
  const SpaceLayout& layout(SpaceKind space) const;
  /// Layouts with the requested boundary condition.
  SpaceLayout layout(SpaceKind space, BoundaryCondition bc) const;

  /// Global indices of the local DOFs of an element in the full layout.
  const std::vector<int>& dofs(SpaceKind space, int element) const;

 private:
  void build_edge(int e);
  void build_element(int t);

  int k_;
  int threads_;
  std::unique_ptr<SpaceBases> bases_;
  SpaceLayout layout_V_, layout_Sigma_, layout_W_;
  std::vector<std::vector<int>> dofs_V_, dofs_Sigma_, dofs_W_;
  std::vector<EdgeOperators> edges_;
  std::vector<ElementOperators> elements_;
};

struct GlobalOperator {
  SpaceLayout domain;
  SpaceLayout codomain;
  SparseMatrix matrix;
};

/// Discrete gradient V -> Sigma.
GlobalOperator global_gradient(const DiscreteComplex& dc, BoundaryCondition bc = BoundaryCondition::none);
/// Discrete rotor Sigma -> W.
GlobalOperator global_rotor(const DiscreteComplex& dc, BoundaryCondition bc = BoundaryCondition::none);
/// Gram matrix of the discrete L2-product on Sigma.
GlobalOperator sigma_product(const DiscreteComplex& dc, BoundaryCondition bc = BoundaryCondition::none);
/// Matrix of the bilinear form a_h on Sigma.
GlobalOperator a_matrix(const DiscreteComplex& dc, BoundaryCondition bc = BoundaryCondition::none);
/// Diagonal Gram matrix of the component norm of a space.
GlobalOperator component_gram(const DiscreteComplex& dc, SpaceKind space, BoundaryCondition bc = BoundaryCondition::none);
/// Gram matrix of the potential-based L2 norm on V used for pressure errors.
GlobalOperator v_l2_product(const DiscreteComplex& dc, BoundaryCondition bc = BoundaryCondition::none);

/// Submatrix of a full-layout operator for restricted layouts.
GlobalOperator restrict(const GlobalOperator& op, const SpaceLayout& domain, const SpaceLayout& codomain);

/// Values of a DOF vector scattered into the full layout (dropped blocks are 0).
Eigen::VectorXd to_full(const DiscreteComplex& dc, const DofVector& v);
/// Restriction of a full-layout vector to a layout.
DofVector from_full(const DiscreteComplex& dc, const SpaceLayout& layout, const Eigen::VectorXd& full);

/// Component (triple-bar) norm of a V, Sigma or W vector.
double component_norm(const DiscreteComplex& dc, const DofVector& v);
/// Norm induced by the discrete L2-product on Sigma.
double sigma_norm(const DiscreteComplex& dc, const DofVector& v);
/// Rot-rot seminorm of a Sigma vector; its square equals a_h(v, v).
double rotrot_norm(const DiscreteComplex& dc, const DofVector& v);
/// Potential-based L2 norm of a V vector.
double v_l2_norm(const DiscreteComplex& dc, const DofVector& v);

/// Square root of the quadratic form x^T M x, clamped at zero.
double quadratic_norm(const SparseMatrix& m, const Eigen::VectorXd& x);

}  // namespace ddr
