// Numerical certification of the complex: exactness through ranks, commuting
// interpolators, Poincare and inf-sup constants, norm equivalence.
#pragma once

#include "ddr/operators.hpp"

#include <string>
#include <vector>

namespace ddr {

/// Numerical rank of a dense matrix: singular values above rel_tol * sigma_max.
/// The gap is sigma_r / sigma_{r+1} (infinite when nothing is cut off).
struct RankInfo {
  int rank = 0;
  double sigma_max = 0.0;
  double sigma_last = 0.0;  // smallest retained singular value
  double sigma_next = 0.0;  // largest discarded singular value
  double gap = 0.0;
  double threshold = 0.0;
  bool conclusive = true;
};

RankInfo numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9, double min_gap = 10.0);

struct ExactnessReport {
  std::string mesh;
  int k = 0;
  BoundaryCondition bc = BoundaryCondition::none;
  int dim_V = 0, dim_Sigma = 0, dim_W = 0;
  // With boundary conditions every rotor has zero mean over the domain, so the
  // target of R is the zero-mean subspace of W_0 (one dimension less).
  int target_dim_W = 0;
  double mean_residual = 0.0;  // max |sum_T int_T (R v)_T| over unit columns, relative
  RankInfo rank_G, rank_R;
  int nullity_G = 0, nullity_R = 0;
  double composition_norm = 0.0;  // max |R G|
  bool kernel_ok = false;         // nullity(G) = 1 (none) or 0 (homogeneous)
  bool image_ok = false;          // rank(G) = nullity(R)
  bool surjective_ok = false;     // rank(R) = target_dim_W
  double rel_tol = 1e-9;

  bool conclusive() const { return rank_G.conclusive && rank_R.conclusive; }
  bool passed() const { return conclusive() && kernel_ok && image_ok && surjective_ok && composition_norm < 1e-10 && mean_residual < 1e-10; }
};

ExactnessReport check_exactness(const Mesh& mesh, int k, BoundaryCondition bc, const std::string& mesh_name = "",
                                int threads = 1);

struct ScalarTestField {
  std::string name;
  ScalarField q;
  SigmaField grad;  // gradient of q (rot = 0)
  bool polynomial = false;
};

struct VectorTestField {
  std::string name;
  SigmaField v;
  bool polynomial = false;
};

struct FieldSuite {
  std::vector<ScalarTestField> scalars;
  std::vector<VectorTestField> vectors;
};

/// Polynomial fields of degree k+1 (fixed coefficients) and the manufactured
/// trigonometric fields of the quad-rot benchmark.
FieldSuite default_field_suite(int k);

struct CommutationResult {
  std::string field;
  std::string kind;  // "gradient" or "rotor"
  double residual = 0.0;
  bool polynomial = false;
};

/// ||G I_V q - I_Sigma grad q|| and ||R I_Sigma v - I_W rot v|| in component norms.
std::vector<CommutationResult> check_commutation(const Mesh& mesh, int k, const FieldSuite& suite, int threads = 1);

struct StabilityReport {
  std::string mesh;
  int k = 0;
  double h = 0.0;
  double lambda_P = 0.0;  // smallest eigenvalue of G^T M G against the V component Gram on V_0
  double gamma_h = 0.0;   // inf-sup constant of the saddle operator in the graph norm
  double norm_lower = 0.0, norm_upper = 0.0;  // bracket of ||.||_Sigma / |||.|||_Sigma on Sigma_0
  bool converged = true;
};

StabilityReport estimate_poincare(const Mesh& mesh, int k, const std::string& mesh_name = "", int threads = 1);

std::string format_table(const ExactnessReport& r);
std::string format_key_value(const ExactnessReport& r);
std::string format_table(const std::vector<CommutationResult>& r);
std::string format_key_value(const std::vector<CommutationResult>& r);
std::string format_table(const StabilityReport& r);
std::string format_key_value(const StabilityReport& r);

}  // namespace ddr
