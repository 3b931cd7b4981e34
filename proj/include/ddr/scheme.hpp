// Stabilized saddle-point discretization of the quad-rot problem
//   (vrot rot)^2 u + grad p = f,  div u = 0,
// with errors measured against a manufactured solution.
#pragma once

#include "ddr/operators.hpp"

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddr {

struct ManufacturedSolution {
  VectorField u;
  ScalarField rot_u;
  ScalarField p;
  VectorField f;
};

/// u = (-sin(pi(x1+x2)), sin(pi(x1+x2))), p = sin(pi x1) sin(pi x2) on the unit square.
ManufacturedSolution quad_rot_benchmark();

/// Boundary values used to lift non-homogeneous data: the boundary blocks of
/// I_Sigma u and I_V p.
struct BoundaryData {
  SigmaField u;
  ScalarField p;
};

struct SaddleSystem {
  SpaceLayout sigma0, v0;   // unknowns (homogeneous layouts)
  SparseMatrix A;           // Sigma_0 x Sigma_0
  SparseMatrix B;           // Sigma_0 x V_0, B = M_Sigma G
  SparseMatrix matrix;      // [[A, B], [-B^T, 0]]
  Eigen::VectorXd rhs;
  Eigen::VectorXd u_lift;   // full Sigma layout, nonzero on boundary blocks only
  Eigen::VectorXd p_lift;   // full V layout
  SparseMatrix B_full_rows; // Sigma (full) x V_0, used for the divergence check
};

/// Assembles the system for forcing f. Without boundary data the solution
/// satisfies homogeneous conditions.
SaddleSystem assemble(const DiscreteComplex& dc, const VectorField& f, const BoundaryData* boundary = nullptr);

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Solution {
  DofVector u;              // full Sigma layout, lifting included
  DofVector p;              // full V layout
  double residual = 0.0;    // ||K x - b|| / ||b|| (0 when b = 0)
  double divergence = 0.0;  // ||B^T u|| / ||u|| over test functions in V_0
};

/// Sparse LU with column pivoting; throws SolveError when factorization fails
/// or the relative residual stays above `tolerance` after refinement.
Solution solve(const DiscreteComplex& dc, const SaddleSystem& system, double tolerance = 1e-10);

struct ErrorRecord {
  double h = 0.0;
  double u_l2 = 0.0;      // ErrUL2
  double u_rotrot = 0.0;  // ErrURotRot
  double p_l2 = 0.0;      // ErrPL2
  double p_grad = 0.0;    // ErrPGrad

  std::array<double, 4> errors() const { return {u_l2, u_rotrot, p_l2, p_grad}; }
};

inline constexpr std::array<const char*, 4> error_names = {"ErrUL2", "ErrURotRot", "ErrPL2", "ErrPGrad"};

/// Errors of (u_h, p_h) against the interpolates of the exact fields.
ErrorRecord error_report(const DiscreteComplex& dc, const Solution& sol, const SigmaField& u, const ScalarField& p);

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}) for each column.
std::vector<std::array<double, 4>> convergence_rates(const std::vector<ErrorRecord>& records);

struct StudyRow {
  int n = 0;
  ErrorRecord errors;
  double residual = 0.0;
  double divergence = 0.0;
};

/// Solves the benchmark on build_structured_mesh(family, n) for each n.
std::vector<StudyRow> convergence_study(MeshFamily family, int k, const std::vector<int>& n_list, int threads = 0,
                                       int quadrature_degree = 0);

std::string format_csv(const std::vector<ErrorRecord>& records);
std::string format_rates(const std::vector<ErrorRecord>& records);
/// Writes `path` and the companion `path` with extension ".rates".
void write_csv(const std::filesystem::path& path, const std::vector<ErrorRecord>& records);
std::filesystem::path rates_path(const std::filesystem::path& csv_path);

}  // namespace ddr
