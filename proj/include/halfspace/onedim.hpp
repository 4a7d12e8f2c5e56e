#pragma once

#include <optional>
#include <span>
#include <utility>

#include "halfspace/field.hpp"
#include "halfspace/moving_plane.hpp"

namespace halfspace {

/// t -> u(t, 0, ..., 0) and its derivative in t.
class TraceFunction {
 public:
  explicit TraceFunction(ScalarField source);

  double eval(double t) const;
  double derivative(double t) const;
  const ScalarField& source() const { return source_; }

 private:
  Point at(double t) const;
  ScalarField source_;
};

/// Both closed forms of g_s'(1/2) for the inverted trace
///   g_s(t) = s^{(n-2)/2} |t - 1|^{2-n} f(s (1 + 1/(t - 1))).
struct GPrimeForms {
  double reflected;  // 2^n s^{(n-2)/2} ((n-2)/2 f(-s) - s f'(-s))
  double direct;     // 2^n s^{(n-2)/2} ((n-2)/2 f(s) + s f'(s))
};

inline constexpr double kEvennessTolerance = 1e-8;
inline constexpr double kFormAgreementTolerance = 1e-10;

GPrimeForms g_s_prime_half_forms(const TraceFunction& trace, Dimension n, double s);

/// The direct form, after checking that the trace is even at +-s and that the two
/// forms agree. Throws PreconditionError otherwise.
double g_s_prime_half(const TraceFunction& trace, Dimension n, double s);

struct ScaleSearchResult {
  double s_star = 0.0;
  double gprime_at_half = 0.0;
  std::pair<double, double> bracket;
  int iterations = 0;
};

/// Bisection on g_s'(1/2) followed by a Newton polish. Throws BracketError if the
/// endpoints do not have opposite signs.
ScaleSearchResult find_symmetric_scale(const TraceFunction& trace, Dimension n, double s_lo,
                                       double s_hi);

/// Bracket [1e-3, 1e3] * lambda_guess, where lambda_guess = (mu / a(n))^{2/(n-2)} with mu
/// taken from decay_report on the trace's source.
ScaleSearchResult find_symmetric_scale(const TraceFunction& trace, Dimension n);

struct SymmetryCheck {
  Vector axis_point;
  /// |axis_point - (0.5, 0, ..., 0)|
  double axis_distance = 0.0;
  double asymmetry_score = 0.0;
  double score() const { return axis_distance + asymmetry_score; }
};

/// Detects the axis of the Kelvin image about e = (1, 0, ..., 0) of scale_field(u, s).
SymmetryCheck verify_lemma32_symmetry(const ScalarField& u, Dimension n, double s,
                                      const AxisOptions& options = {});

struct BoundaryProfileCheck {
  double amplitude = 0.0;
  double scale = 0.0;
  Vector center;  // x0', n-1 entries
  double max_deviation = 0.0;
  double rms_log_residual = 0.0;
};

/// Fits a (lambda / (lambda^2 + |x' - x0'|^2))^{(n-2)/2} to u restricted to x_n = 0.
BoundaryProfileCheck boundary_profile_check(const ScalarField& u, Dimension n,
                                            std::span<const Point> boundary_points);
BoundaryProfileCheck boundary_profile_check(const ScalarField& u, Dimension n,
                                            std::size_t count = 400, double extent = 5.0,
                                            std::uint64_t seed = 0);

struct ShootingConfig {
  int n = 3;
  double c = 1.0;
  /// Defaults resolved by resolve(): q = 2n/(n-2), p = n/(n-2), t_max = 2 c^{1-p} + 1.
  std::optional<double> p;
  std::optional<double> q;
  double step = 1e-4;
  std::optional<double> t_max;
  double overflow_guard = 1e150;
};

struct ShootingResult {
  double initial_value = 0.0;
  std::optional<double> zero_crossing_t;
  std::pair<double, double> final_state;  // (u, u')
  long step_count = 0;
  double step = 0.0;
  double p = 0.0;
  double q = 0.0;
  double t_max = 0.0;
};

/// Integrates -u'' = |u|^{q-1} u, u(0) = c, u'(0) = -c^p with classical RK4 until
/// u changes sign or t_max is reached. The crossing is located by bisecting the
/// length of a single RK4 step from the last positive state.
ShootingResult shoot_case1(const ShootingConfig& config);

}  // namespace halfspace
