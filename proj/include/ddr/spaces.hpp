// Discrete spaces of the rot-rot complex: DOF layouts (full and serendipity,
// with or without boundary conditions), per-entity polynomial bases, and the
// interpolators.
#pragma once

#include "ddr/mesh.hpp"
#include "ddr/polybasis.hpp"
#include "ddr/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace ddr {

enum class SpaceKind { V, Sigma, W };
enum class Variant { full, serendipity };
enum class BoundaryCondition { none, homogeneous };

std::string to_string(SpaceKind space);
std::string to_string(Variant variant);
std::string to_string(BoundaryCondition bc);
SpaceKind parse_space(const std::string& name);
Variant parse_variant(const std::string& name);
BoundaryCondition parse_bc(const std::string& name);

/// Number of pairwise non-aligned edges of an element (edges on a common line
/// count once), at least 2.
int count_non_aligned_edges(const Mesh& mesh, int element, double tol = 1e-9);

/// max(k + 1 - eta_T, -1)
int serendipity_degree(int k, int eta);

/// Global numbering of a discrete space: element blocks, then edge blocks,
/// then vertex blocks, each in id order. Blocks removed by boundary conditions
/// have offset -1; sizes are always those of the unconstrained space.
struct SpaceLayout {
  SpaceKind space = SpaceKind::V;
  int k = 0;
  Variant variant = Variant::full;
  BoundaryCondition bc = BoundaryCondition::none;

  std::vector<int> element_offset, element_size;
  /// Sigma only: size of the Roly part leading each element block.
  std::vector<int> element_head_size;
  std::vector<int> edge_offset;
  int edge_size = 0;
  /// Sigma only: size of the tangential part leading each edge block.
  int edge_head_size = 0;
  std::vector<int> vertex_offset;
  int dim = 0;

  /// Local DOF count of an element (element, edge and vertex blocks).
  int local_dim(const Mesh& mesh, int element) const;
};

SpaceLayout space_layout(const Mesh& mesh, int k, SpaceKind space, Variant variant = Variant::full,
                         BoundaryCondition bc = BoundaryCondition::none);

/// Global index of every local DOF of an element in its local order (element
/// block, edge blocks in loop order, vertex values in loop order); -1 for DOFs
/// removed by boundary conditions.
std::vector<int> local_dofs(const SpaceLayout& layout, const Mesh& mesh, int element);

/// For each DOF of `reduced`, its index in `full`. Both layouts must share
/// space, degree and variant.
std::vector<int> embedding(const SpaceLayout& reduced, const SpaceLayout& full);

struct DofVector {
  SpaceLayout layout;
  Eigen::VectorXd values;

  DofVector() = default;
  DofVector(SpaceLayout l, Eigen::VectorXd v);
};

/// Orthonormal polynomial bases attached to one element for degree k. The
/// P^{k+1} basis is hierarchical, so its leading rows give P^{k-1} and P^k.
struct ElementBases {
  ElementBasis poly_k1;       // P^{k+1}(T)
  ElementBasis vpoly_k;       // vP^k(T)
  ElementBasis roly_km1;      // Roly^{k-1}(T)
  ElementBasis croly_k;       // cRoly^k(T)
  ElementBasis croly_k2;      // cRoly^{k+2}(T)
  ElementBasis cgoly_k2;      // cGoly^{k+2}(T)
  QuadratureRule rule;        // exact for the local polynomial products
  QuadratureRule high_rule;   // non-polynomial integrands

  ElementPolys poly(int m) const { return poly_k1.polys.rows(0, dim_poly2(m)); }
};

struct EdgeBases {
  EdgeBasis poly_k1;  // P^{k+1}(E)
  QuadratureRule rule;
  QuadratureRule high_rule;

  EdgePolys poly(int m) const { return EdgePolys{poly_k1.polys.frame, poly_k1.polys.degree, poly_k1.polys.coeffs.topRows(dim_poly1(m))}; }
};

/// All element and edge bases of a mesh for degree k.
class SpaceBases {
 public:
  /// `high_degree` > 0 overrides the degree of the rules used for non-polynomial integrands.
  SpaceBases(const Mesh& mesh, int k, int threads = 1, int high_degree = 0);

  const Mesh& mesh() const { return *mesh_; }
  int k() const { return k_; }
  int threads() const { return threads_; }
  const ElementBases& element(int t) const { return elements_[t]; }
  const EdgeBases& edge(int e) const { return edges_[e]; }

 private:
  const Mesh* mesh_;
  int k_;
  int threads_;
  std::vector<ElementBases> elements_;
  std::vector<EdgeBases> edges_;
};

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// A vector field together with its scalar rotor, as needed by I_Sigma.
struct SigmaField {
  VectorField value;
  ScalarField rot;
};

/// Interpolators. Layouts with homogeneous boundary conditions drop the
/// boundary blocks; a warning is printed to stderr if the dropped values
/// exceed 1e-10. Serendipity layouts are not supported.
DofVector interpolate_V(const SpaceBases& bases, const SpaceLayout& layout, const ScalarField& q);
DofVector interpolate_Sigma(const SpaceBases& bases, const SpaceLayout& layout, const SigmaField& v);
DofVector interpolate_W(const SpaceBases& bases, const SpaceLayout& layout, const ScalarField& r);

/// Per-element DOF counts (element + its edges + its vertices) for a single
/// element, reported as (full, serendipity) for the given space.
std::pair<int, int> local_dof_counts(const Mesh& single_element_mesh, int k, SpaceKind space);

}  // namespace ddr
