#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "halfspace/field.hpp"

namespace halfspace {

/// Position of the plane x_1 = lambda_plane.
struct PlaneParams {
  double lambda_plane = 0.0;
};

/// x^lambda = (2 lambda - x_1, x_2, ..., x_n).
Point reflect(const Point& x, PlaneParams plane);

/// v_lambda(x) = v(x^lambda).
ScalarField reflect_field(const ScalarField& f, PlaneParams plane);

/// x_1 >= lambda, x_n >= 0 and |x| > exclusion.
bool in_sigma(const Point& x, PlaneParams plane, double exclusion = 0.0);

struct SigmaSamplingSpec {
  std::size_t count = 2000;
  double radius_cap = 50.0;
  /// Radius of the ball around the origin left out of the samples.
  double exclusion_radius = 1e-6;
  std::uint64_t seed = 0;
};

/// Halton points in the slab lambda <= x_1 <= lambda + R, |x_i| <= R, 0 <= x_n <= R.
struct SigmaSampling {
  double lambda_plane = 0.0;
  double radius_cap = 0.0;
  double exclusion_radius = 0.0;
  std::vector<Point> points;

  static SigmaSampling generate(int n, PlaneParams plane, const SigmaSamplingSpec& spec);
  bool valid_for(PlaneParams plane) const;
};

inline constexpr double kViolationTolerance = 1e-9;

struct MovingPlaneReport {
  double lambda_plane = 0.0;
  /// min over samples of v(x) - v_lambda(x)
  double min_difference = 0.0;
  /// max over samples of |v(x) - v_lambda(x)|; zero iff v is symmetric on the samples
  double max_abs_difference = 0.0;
  std::size_t violation_count = 0;
  Point argmin;
  std::size_t evaluated = 0;
  std::size_t skipped_singular = 0;
};

MovingPlaneReport compare_on_sigma(const ScalarField& v, PlaneParams plane,
                                   const SigmaSampling& sampling,
                                   double tol = kViolationTolerance);

struct SweepOptions {
  SigmaSamplingSpec sampling;
  double tol = kViolationTolerance;
  double bisection_width = 1e-6;
  /// Reports for distinct planes are independent; > 1 evaluates them concurrently.
  int threads = 1;
};

struct SweepResult {
  std::vector<MovingPlaneReport> reports;
  /// Largest violation-free plane before the first violating grid point, bisected.
  double lambda0_estimate = 0.0;
  /// False when every grid plane was violation-free (no bracket to bisect).
  bool refined = false;
};

/// Sweeps x_1 = lambda over an ascending grid. Throws SweepFailure when the
/// first grid plane already violates.
SweepResult sweep_planes(const ScalarField& v, std::span<const double> lambda_grid,
                         const SweepOptions& options = {});

/// Evenly spaced grid lo, lo + step, ..., <= hi.
std::vector<double> plane_grid(double lo, double hi, double step);

struct AxisOptions {
  SweepOptions sweep;
  double grid_lo = -20.0;
  double grid_hi = 20.0;
  double grid_step = 0.5;
  /// Gauss-Newton polish of each plane against the symmetric least-squares objective.
  bool polish = true;
};

struct AxisDetection {
  Vector axis_point;  // n-1 tangential coordinates
  /// max over directions of sup |v - v_lambda| on the samples at the detected plane
  double asymmetry_score = 0.0;
  std::vector<SweepResult> sweeps;
};

/// Runs a sweep along every tangential direction (moving that coordinate into slot 1).
AxisDetection detect_axis(const ScalarField& f, Dimension n, const AxisOptions& options = {});

struct DecayReport {
  double mu_estimate = 0.0;
  Vector grad_limit_estimates;
  double radial_limit_estimate = 0.0;
  std::vector<double> radii_used;
  std::vector<double> mu_per_direction;
  /// max - min of mu_per_direction
  double mu_spread = 0.0;
};

/// count deterministic unit vectors with d_n >= 0 (the first is e_n).
std::vector<Vector> hemisphere_directions(int n, std::size_t count, std::uint64_t seed = 0);

/// Richardson-extrapolated |x|^{n-2}u, |x|^{n-2}D_i u and |x|^{n-2} x.grad u along rays.
/// Empty directions means hemisphere_directions(n, 10).
DecayReport decay_report(const ScalarField& f, Dimension n, std::span<const double> radii,
                         std::span<const Vector> directions = {});

/// Polynomial extrapolation to h = 0 of samples (h_i, y_i) (Neville).
double extrapolate_to_zero(std::span<const double> h, std::span<const double> y);

}  // namespace halfspace
