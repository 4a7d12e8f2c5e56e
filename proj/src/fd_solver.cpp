#include "halfspace/fd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>

namespace halfspace {

AxisymGrid::AxisymGrid(double r_extent, double z_extent, int cells_r, int cells_z)
    : radial_extent(r_extent), vertical_extent(z_extent), m_r(cells_r), m_z(cells_z) {
  if (!(r_extent > 0.0) || !(z_extent > 0.0)) throw DomainError("AxisymGrid: extents must be positive");
  if (cells_r < 2 || cells_z < 2) throw DomainError("AxisymGrid: need at least 2 cells per direction");
}

FarField far_field_from(const ScalarField& exact) {
  const int n = exact.dim();
  return [exact, n](double r, double z) {
    Point x = Point::Zero(n);
    x[0] = r;
    x[n - 1] = z;
    return exact.value(x);
  };
}

FarField asymptotic_far_field(double mu, Dimension n) {
  if (!(mu > 0.0)) throw DomainError("asymptotic_far_field: mu must be positive");
  const double k = n.half_excess();
  return [mu, k](double r, double z) { return mu * std::pow(r * r + z * z, -k); };
}

std::vector<double> sample_on_grid(const AxisymGrid& grid, const ScalarField& f) {
  const FarField eval = far_field_from(f);
  std::vector<double> values(grid.node_count());
  for (int j = 0; j <= grid.m_z; ++j) {
    for (int i = 0; i <= grid.m_r; ++i) values[grid.index(i, j)] = eval(grid.r(i), grid.z(j));
  }
  return values;
}

Problem Problem::critical(const AxisymGrid& grid, Dimension n, FarField far_field) {
  Problem p;
  p.grid = grid;
  p.n = n;
  p.q = n.critical_interior_exponent();
  p.p = n.critical_boundary_exponent();
  p.far_field = std::move(far_field);
  return p;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

namespace {

void check_problem(const Problem& problem, std::size_t value_count) {
  Dimension n(problem.n);
  if (!problem.far_field) throw DomainError("fd solver: missing far-field data");
  if (value_count != problem.grid.node_count()) {
    throw DomainError("fd solver: value array does not match the grid");
  }
}

// Copy of values with the Dirichlet faces overwritten by the far field.
std::vector<double> with_far_field(const Problem& problem, std::span<const double> values) {
  const AxisymGrid& g = problem.grid;
  std::vector<double> work(values.begin(), values.end());
  for (int j = 0; j <= g.m_z; ++j) work[g.index(g.m_r, j)] = problem.far_field(g.r(g.m_r), g.z(j));
  for (int i = 0; i <= g.m_r; ++i) work[g.index(i, g.m_z)] = problem.far_field(g.r(i), g.z(g.m_z));
  return work;
}

void require_positive_unknowns(const AxisymGrid& g, std::span<const double> work) {
  for (int j = 0; j < g.m_z; ++j) {
    for (int i = 0; i < g.m_r; ++i) {
      if (!(work[g.index(i, j)] > 0.0)) {
        throw DomainError("fd solver: non-positive value at node (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
      }
    }
  }
}

std::vector<double> radial_coefficients(const AxisymGrid& g, int n) {
  // coef[t] belongs to node i = t + 1
  std::vector<double> coef(std::size_t(std::max(g.m_r - 1, 0)));
  const double hr = g.h_r();
  for (int i = 1; i < g.m_r; ++i) coef[i - 1] = (n - 2) / (2.0 * hr * g.r(i));
  return coef;
}

}  // namespace

std::vector<double> assemble_residual(const Problem& problem, std::span<const double> values,
                                      kernels::Isa isa) {
  check_problem(problem, values.size());
  const AxisymGrid& g = problem.grid;
  const std::vector<double> work = with_far_field(problem, values);
  require_positive_unknowns(g, work);

  const int n = problem.n;
  const double hr = g.h_r();
  const double hz = g.h_z();
  const double inv_hr2 = 1.0 / (hr * hr);
  const double inv_hz2 = 1.0 / (hz * hz);
  const std::vector<double> coef = radial_coefficients(g, n);
  std::vector<double> res(g.node_count(), 0.0);

  for (int j = 0; j < g.m_z; ++j) {
    // z = 0 rows use the even part of the ghost value; the u^p part is added below.
    const int below = j == 0 ? 1 : j - 1;
    kernels::StencilRow row;
    row.center = &work[g.index(1, j)];
    row.up = &work[g.index(1, j + 1)];
    row.down = &work[g.index(1, below)];
    row.radial_coef = coef.data();
    row.out = &res[g.index(1, j)];
    row.count = std::size_t(g.m_r - 1);
    row.inv_hr2 = inv_hr2;
    row.inv_hz2 = inv_hz2;
    kernels::neg_laplacian_row(row, isa);

    const double u0 = work[g.index(0, j)];
    const double radial_axis = (n - 1) * 2.0 * (work[g.index(1, j)] - u0) * inv_hr2;
    const double vertical_axis =
        (work[g.index(0, j + 1)] - 2.0 * u0 + work[g.index(0, below)]) * inv_hz2;
    res[g.index(0, j)] = -(radial_axis + vertical_axis);

    for (int i = 0; i < g.m_r; ++i) {
      const std::size_t k = g.index(i, j);
      const double u = work[k];
      res[k] -= std::pow(u, problem.q);
      if (j == 0) {
        res[k] -= 2.0 * std::pow(u, problem.p) / hz;
        res[k] *= 0.5 * hz;
      }
    }
  }
  return res;
}

std::vector<double> assemble_residual(const Problem& problem, std::span<const double> values) {
  return assemble_residual(problem, values, kernels::active_isa());
}

Eigen::SparseMatrix<double> assemble_jacobian(const Problem& problem,
                                              std::span<const double> values) {
  check_problem(problem, values.size());
  const AxisymGrid& g = problem.grid;
  const std::vector<double> work = with_far_field(problem, values);
  require_positive_unknowns(g, work);

  const int n = problem.n;
  const double hr = g.h_r();
  const double hz = g.h_z();
  const double inv_hr2 = 1.0 / (hr * hr);
  const double inv_hz2 = 1.0 / (hz * hz);
  const auto size = static_cast<Eigen::Index>(g.unknown_count());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(g.unknown_count() * 5);
  for (int j = 0; j < g.m_z; ++j) {
    const double row_scale = j == 0 ? 0.5 * hz : 1.0;
    for (int i = 0; i < g.m_r; ++i) {
      const auto row = static_cast<Eigen::Index>(unknown_index(g, i, j));
      const double u = work[g.index(i, j)];
      auto add = [&](int ii, int jj, double v) {
        if (g.is_dirichlet(ii, jj)) return;
        triplets.emplace_back(row, static_cast<Eigen::Index>(unknown_index(g, ii, jj)),
                              row_scale * v);
      };

      double diag = -problem.q * std::pow(u, problem.q - 1.0);
      if (i == 0) {
        diag += 2.0 * (n - 1) * inv_hr2;
        add(1, j, -2.0 * (n - 1) * inv_hr2);
      } else {
        const double c = (n - 2) / (2.0 * hr * g.r(i));
        diag += 2.0 * inv_hr2;
        add(i + 1, j, -(inv_hr2 + c));
        add(i - 1, j, -(inv_hr2 - c));
      }
      diag += 2.0 * inv_hz2;
      if (j == 0) {
        add(i, 1, -2.0 * inv_hz2);
        diag -= 2.0 * problem.p * std::pow(u, problem.p - 1.0) / hz;
      } else {
        add(i, j + 1, -inv_hz2);
        add(i, j - 1, -inv_hz2);
      }
      add(i, j, diag);
    }
  }
  Eigen::SparseMatrix<double> jac(size, size);
  jac.setFromTriplets(triplets.begin(), triplets.end());
  jac.makeCompressed();
  return jac;
}

namespace {

double unknown_sup_norm(const AxisymGrid& g, const std::vector<double>& res) {
  double m = 0.0;
  for (int j = 0; j < g.m_z; ++j) {
    for (int i = 0; i < g.m_r; ++i) m = std::max(m, std::abs(res[g.index(i, j)]));
  }
  return m;
}

// Line-search merit; the sup-norm is non-smooth and stalls backtracking.
double unknown_sum_sq(const AxisymGrid& g, const std::vector<double>& res) {
  double s = 0.0;
  for (int j = 0; j < g.m_z; ++j) {
    for (int i = 0; i < g.m_r; ++i) s += res[g.index(i, j)] * res[g.index(i, j)];
  }
  return s;
}

bool unknowns_positive(const AxisymGrid& g, const std::vector<double>& u) {
  for (int j = 0; j < g.m_z; ++j) {
    for (int i = 0; i < g.m_r; ++i) {
      if (!(u[g.index(i, j)] > 0.0)) return false;
    }
  }
  return true;
}

SolveResult run_newton(const Problem& problem, std::vector<double> u, const NewtonConfig& config) {
  const AxisymGrid& g = problem.grid;
  SolveResult result;
  u = with_far_field(problem, u);

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool pattern_ready = false;
  std::vector<double> res = assemble_residual(problem, u);
  double norm = unknown_sup_norm(g, res);
  double merit = unknown_sum_sq(g, res);
  result.residual_history.push_back(norm);

  for (int iter = 0; iter < config.max_iter; ++iter) {
    if (norm < config.tol) {
      result.converged = true;
      break;
    }
    const Eigen::SparseMatrix<double> jac = assemble_jacobian(problem, u);
    if (!pattern_ready) {
      lu.analyzePattern(jac);
      pattern_ready = true;
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) {
      result.failure_reason = "singular Jacobian";
      break;
    }
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(g.unknown_count()));
    for (int j = 0; j < g.m_z; ++j) {
      for (int i = 0; i < g.m_r; ++i) {
        rhs[static_cast<Eigen::Index>(unknown_index(g, i, j))] = -res[g.index(i, j)];
      }
    }
    const Eigen::VectorXd delta = lu.solve(rhs);
    ++result.newton_iterations;

    double step = config.damping;
    bool accepted = false;
    for (int bt = 0; bt <= config.max_backtracks; ++bt, step *= config.backtrack_factor) {
      std::vector<double> trial = u;
      for (int j = 0; j < g.m_z; ++j) {
        for (int i = 0; i < g.m_r; ++i) {
          trial[g.index(i, j)] += step * delta[static_cast<Eigen::Index>(unknown_index(g, i, j))];
        }
      }
      if (!unknowns_positive(g, trial)) continue;  // clipped step: shrink and retry
      std::vector<double> trial_res = assemble_residual(problem, trial);
      const double trial_merit = unknown_sum_sq(g, trial_res);
      if (trial_merit < (1.0 - 1e-4 * step) * merit || trial_merit == 0.0) {
        u = std::move(trial);
        res = std::move(trial_res);
        merit = trial_merit;
        norm = unknown_sup_norm(g, res);
        accepted = true;
        break;
      }
    }
    result.residual_history.push_back(norm);
    if (!accepted) {
      result.failure_reason = "line search failed to reduce the residual";
      break;
    }
  }
  if (!result.converged && norm < config.tol) result.converged = true;
  if (!result.converged && result.failure_reason.empty()) {
    result.failure_reason = "iteration limit reached";
  }
  result.final_residual_norm = norm;
  result.grid_values = std::move(u);
  return result;
}

}  // namespace

SolveResult newton_solve(const Problem& problem, std::span<const double> initial_guess,
                         const NewtonConfig& config) {
  check_problem(problem, initial_guess.size());
  if (!(config.tol > 0.0) || config.max_iter < 1) throw DomainError("newton_solve: bad config");
  if (!(config.damping > 0.0 && config.damping <= 1.0)) {
    throw DomainError("newton_solve: damping must lie in (0, 1]");
  }
  std::vector<double> start(initial_guess.begin(), initial_guess.end());
  require_positive_unknowns(problem.grid, with_far_field(problem, start));

  SolveResult direct = run_newton(problem, start, config);
  if (direct.converged || config.continuation_steps <= 0) return direct;

  SolveResult staged;
  staged.grid_values = start;
  int total_iterations = direct.newton_iterations;
  for (int k = 1; k <= config.continuation_steps; ++k) {
    Problem stage = problem;
    stage.q = 1.0 + (problem.q - 1.0) * k / config.continuation_steps;
    staged = run_newton(stage, staged.grid_values, config);
    total_iterations += staged.newton_iterations;
    if (!staged.converged) {
      staged.failure_reason = "continuation stage " + std::to_string(k) + ": " +
                              staged.failure_reason;
      break;
    }
  }
  staged.newton_iterations = total_iterations;
  staged.used_continuation = true;
  return staged;
}

double observed_order(std::span<const double> h, std::span<const double> errors) {
  if (h.size() != errors.size() || h.size() < 2) throw DomainError("observed_order: need >= 2 points");
  double mx = 0.0, my = 0.0;
  const double m = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]) / m;
    my += std::log(errors[i]) / m;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceStudy convergence_study(Dimension n, double q, double p, const ScalarField& exact,
                                   std::span<const AxisymGrid> grids, const NewtonConfig& config) {
  if (exact.dim() != n) throw DomainError("convergence_study: dimension mismatch");
  ConvergenceStudy study;
  for (const AxisymGrid& grid : grids) {
    Problem problem{grid, n, q, p, far_field_from(exact)};
    const std::vector<double> reference = sample_on_grid(grid, exact);
    const SolveResult result = newton_solve(problem, reference, config);
    if (!result.converged) {
      throw StudyError("convergence_study: solve on " + std::to_string(grid.m_r) + "x" +
                       std::to_string(grid.m_z) + " grid failed: " + result.failure_reason);
    }
    double err = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k) {
      err = std::max(err, std::abs(result.grid_values[k] - reference[k]));
    }
    study.h.push_back(std::max(grid.h_r(), grid.h_z()));
    study.errors.push_back(err);
    study.iterations.push_back(result.newton_iterations);
  }
  study.observed_order = observed_order(study.h, study.errors);
  return study;
}

FarFieldFit fit_far_field(const AxisymGrid& grid, Dimension n, std::span<const double> values) {
  if (values.size() != grid.node_count()) throw DomainError("fit_far_field: size mismatch");
  struct Sample {
    double r, z, log_u;
  };
  std::vector<Sample> samples;
  for (int j = 0; j < grid.m_z; ++j) {
    samples.push_back({grid.r(grid.m_r - 1), grid.z(j), std::log(values[grid.index(grid.m_r - 1, j)])});
  }
  for (int i = 0; i < grid.m_r - 1; ++i) {
    samples.push_back({grid.r(i), grid.z(grid.m_z - 1), std::log(values[grid.index(i, grid.m_z - 1)])});
  }
  const double k = n.half_excess();
  // Gauss-Newton on (log mu, c) for log u = log mu - k log(r^2 + (z - c)^2).
  double log_mu = 0.0;
  double c = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (const Sample& s : samples) {
      const double rho2 = s.r * s.r + (s.z - c) * (s.z - c);
      const double resid = s.log_u - (log_mu - k * std::log(rho2));
      const Eigen::Vector2d jrow(1.0, 2.0 * k * (s.z - c) / rho2);  // d model / d(log mu, c)
      jtj += jrow * jrow.transpose();
      jtr += jrow * resid;
    }
    const Eigen::Vector2d step = jtj.ldlt().solve(jtr);
    log_mu += step[0];
    c += step[1];
    if (step.norm() < 1e-14) break;
  }
  return {std::exp(log_mu), c};
}

namespace {

class LiftedModel final : public FieldModel {
 public:
  LiftedModel(std::vector<double> values, AxisymGrid grid, int n, FarFieldFit far)
      : values_(std::move(values)), grid_(grid), n_(n), far_(far), k_(0.5 * (n - 2)) {}

  int dim() const override { return n_; }
  Provenance provenance() const override { return Provenance::sampled_grid; }

  double value(const Point& x) const override {
    const double r = x.head(n_ - 1).norm();
    const double z = x[n_ - 1];
    if (z < 0.0) throw DomainError("lifted field: point below the boundary");
    if (inside(r, z)) return bilinear(r, z);
    return far_.mu * std::pow(r * r + (z - far_.axis_offset) * (z - far_.axis_offset), -k_);
  }

  Vector gradient(const Point& x) const override {
    const double r = x.head(n_ - 1).norm();
    if (inside(r, x[n_ - 1])) {
      return fd_gradient([this](const Point& p) { return value(p); }, x, kDefaultFdStep);
    }
    Point shifted = x;
    shifted[n_ - 1] -= far_.axis_offset;
    const double rho2 = shifted.squaredNorm();
    return (-(n_ - 2) * value(x) / rho2) * shifted;
  }

  double laplacian(const Point& x) const override {
    const double r = x.head(n_ - 1).norm();
    if (inside(r, x[n_ - 1])) {
      return fd_laplacian([this](const Point& p) { return value(p); }, x, kDefaultFdStep);
    }
    return 0.0;  // the far-field model is harmonic
  }

 private:
  bool inside(double r, double z) const {
    return r <= grid_.radial_extent && z <= grid_.vertical_extent;
  }

  double bilinear(double r, double z) const {
    const double fr = r / grid_.h_r();
    const double fz = z / grid_.h_z();
    const int i = std::min(static_cast<int>(fr), grid_.m_r - 1);
    const int j = std::min(static_cast<int>(fz), grid_.m_z - 1);
    const double tr = fr - i;
    const double tz = fz - j;
    const double v00 = values_[grid_.index(i, j)];
    const double v10 = values_[grid_.index(i + 1, j)];
    const double v01 = values_[grid_.index(i, j + 1)];
    const double v11 = values_[grid_.index(i + 1, j + 1)];
    return (1 - tr) * (1 - tz) * v00 + tr * (1 - tz) * v10 + (1 - tr) * tz * v01 + tr * tz * v11;
  }

  std::vector<double> values_;
  AxisymGrid grid_;
  int n_;
  FarFieldFit far_;
  double k_;
};

}  // namespace

ScalarField lift_to_field(const SolveResult& result, const AxisymGrid& grid, Dimension n) {
  if (result.grid_values.size() != grid.node_count()) {
    throw DomainError("lift_to_field: result does not match the grid");
  }
  const FarFieldFit far = fit_far_field(grid, n, result.grid_values);
  return ScalarField(std::make_shared<LiftedModel>(result.grid_values, grid, n, far));
}

}  // namespace halfspace
