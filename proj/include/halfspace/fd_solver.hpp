#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "halfspace/field.hpp"
#include "halfspace/stencil_kernels.hpp"

namespace halfspace {

/// Nodes (r_i, z_j) = (i h_r, j h_z), 0 <= i <= m_r, 0 <= j <= m_z, on [0, R_r] x [0, R_z].
/// Nodes with i = m_r or j = m_z carry Dirichlet data; the rest are unknowns.
struct AxisymGrid {
  double radial_extent = 12.0;
  double vertical_extent = 12.0;
  int m_r = 64;
  int m_z = 64;

  AxisymGrid() = default;
  AxisymGrid(double r_extent, double z_extent, int cells_r, int cells_z);

  double h_r() const { return radial_extent / m_r; }
  double h_z() const { return vertical_extent / m_z; }
  double r(int i) const { return i * h_r(); }
  double z(int j) const { return j * h_z(); }
  std::size_t node_count() const { return std::size_t(m_r + 1) * std::size_t(m_z + 1); }
  std::size_t unknown_count() const { return std::size_t(m_r) * std::size_t(m_z); }
  /// Row-major in z: radial index is contiguous.
  std::size_t index(int i, int j) const { return std::size_t(j) * (m_r + 1) + i; }
  bool is_dirichlet(int i, int j) const { return i == m_r || j == m_z; }
};

/// Dirichlet data u(r, z) on the outer faces.
using FarField = std::function<double(double r, double z)>;

/// Evaluates a field at (r, 0, ..., 0, z).
FarField far_field_from(const ScalarField& exact);
/// mu / (r^2 + z^2)^{(n-2)/2}.
FarField asymptotic_far_field(double mu, Dimension n);

/// Samples f on every node.
std::vector<double> sample_on_grid(const AxisymGrid& grid, const ScalarField& f);

struct Problem {
  AxisymGrid grid;
  int n = 3;
  double q = 5.0;
  double p = 3.0;
  FarField far_field;

  /// Default exponents (n+2)/(n-2) and n/(n-2).
  static Problem critical(const AxisymGrid& grid, Dimension n, FarField far_field);
};

/// Discrete residual on every node (zero on Dirichlet nodes):
///   interior    -(u_rr + (n-2)/r u_r + u_zz) - u^q
///   r = 0       radial part replaced by (n-1) u_rr with the even reflection u_{-1} = u_1
///   z = 0       ghost u_{i,-1} = u_{i,1} + 2 h_z u^p eliminated, row multiplied by h_z / 2
/// Outer-face values are taken from the far field, not from `values`.
std::vector<double> assemble_residual(const Problem& problem, std::span<const double> values);
std::vector<double> assemble_residual(const Problem& problem, std::span<const double> values,
                                      kernels::Isa isa);

struct NewtonConfig {
  double tol = 1e-10;
  int max_iter = 50;
  /// Length of the first trial step in each line search.
  double damping = 1.0;
  /// If the direct solve fails, retry by stepping q from 1 to its target in this
  /// many stages; 0 disables the retry.
  int continuation_steps = 5;
  int max_backtracks = 20;
  double backtrack_factor = 0.5;
};

struct SolveResult {
  std::vector<double> grid_values;
  int newton_iterations = 0;
  double final_residual_norm = 0.0;
  bool converged = false;
  bool used_continuation = false;
  std::vector<double> residual_history;
  std::string failure_reason;
};

/// Damped Newton with the analytic Jacobian and a sparse LU solve per iteration.
SolveResult newton_solve(const Problem& problem, std::span<const double> initial_guess,
                         const NewtonConfig& config = {});

/// Sparse Jacobian of assemble_residual restricted to the unknowns (row/col = unknown index).
Eigen::SparseMatrix<double> assemble_jacobian(const Problem& problem,
                                              std::span<const double> values);

/// Unknown index for node (i, j) with i < m_r and j < m_z.
inline std::size_t unknown_index(const AxisymGrid& g, int i, int j) {
  return std::size_t(j) * g.m_r + i;
}

double sup_norm(std::span<const double> v);

struct ConvergenceStudy {
  std::vector<double> h;
  std::vector<double> errors;  // sup over nodes of |u_h - exact|
  std::vector<int> iterations;
  double observed_order = 0.0;
};

/// Manufactured-solution refinement study; throws StudyError on any non-convergence.
ConvergenceStudy convergence_study(Dimension n, double q, double p, const ScalarField& exact,
                                   std::span<const AxisymGrid> grids,
                                   const NewtonConfig& config = {});

/// Least-squares slope of log(errors) against log(h).
double observed_order(std::span<const double> h, std::span<const double> errors);

struct FarFieldFit {
  double mu = 0.0;
  double axis_offset = 0.0;  // c in mu / |x - c e_n|^{n-2}
};

/// Fits mu / |x - c e_n|^{n-2} to the outermost layer of unknown nodes.
FarFieldFit fit_far_field(const AxisymGrid& grid, Dimension n, std::span<const double> values);

/// Half-space field from a converged solve: bilinear in (|x'|, x_n) inside the grid,
/// fitted far field outside it. Provenance sampled_grid.
ScalarField lift_to_field(const SolveResult& result, const AxisymGrid& grid, Dimension n);

}  // namespace halfspace
