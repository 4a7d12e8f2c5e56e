#include "halfspace/onedim.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "halfspace/bubble.hpp"
#include "halfspace/fit.hpp"
#include "halfspace/kelvin.hpp"
#include "halfspace/sampling.hpp"

namespace halfspace {

TraceFunction::TraceFunction(ScalarField source) : source_(std::move(source)) {}

Point TraceFunction::at(double t) const {
  Point x = Point::Zero(source_.dim());
  x[0] = t;
  return x;
}

double TraceFunction::eval(double t) const { return source_.value(at(t)); }
double TraceFunction::derivative(double t) const { return source_.gradient(at(t))[0]; }

GPrimeForms g_s_prime_half_forms(const TraceFunction& trace, Dimension n, double s) {
  if (!(s > 0.0)) throw DomainError("g_s_prime_half: s must be positive");
  const double k = n.half_excess();
  const double prefactor = std::pow(2.0, n.value()) * std::pow(s, k);
  GPrimeForms forms;
  forms.reflected = prefactor * (k * trace.eval(-s) - s * trace.derivative(-s));
  forms.direct = prefactor * (k * trace.eval(s) + s * trace.derivative(s));
  return forms;
}

double g_s_prime_half(const TraceFunction& trace, Dimension n, double s) {
  if (!(s > 0.0)) throw DomainError("g_s_prime_half: s must be positive");
  const double fp = trace.eval(s);
  const double fm = trace.eval(-s);
  if (std::abs(fp - fm) > kEvennessTolerance * std::max(1.0, std::abs(fp))) {
    throw PreconditionError("g_s_prime_half: trace is not even (f(s) != f(-s))");
  }
  const GPrimeForms forms = g_s_prime_half_forms(trace, n, s);
  const double scale = std::max({1.0, std::abs(forms.direct), std::abs(forms.reflected)});
  if (std::abs(forms.direct - forms.reflected) > kFormAgreementTolerance * scale) {
    throw PreconditionError("g_s_prime_half: the two closed forms disagree");
  }
  return forms.direct;
}

ScaleSearchResult find_symmetric_scale(const TraceFunction& trace, Dimension n, double s_lo,
                                       double s_hi) {
  if (!(s_lo > 0.0) || !(s_hi > s_lo)) throw DomainError("find_symmetric_scale: bad bracket");
  auto g = [&](double s) { return g_s_prime_half(trace, n, s); };
  double lo = s_lo;
  double hi = s_hi;
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0) return {lo, 0.0, {s_lo, s_hi}, 0};
  if (g_hi == 0.0) return {hi, 0.0, {s_lo, s_hi}, 0};
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw BracketError("find_symmetric_scale: g_s'(0.5) has the same sign at both ends");
  }

  ScaleSearchResult result;
  result.bracket = {s_lo, s_hi};
  while (hi - lo > 1e-13 * hi && result.iterations < 400) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    ++result.iterations;
    if (g_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  double s = 0.5 * (lo + hi);
  double gs = g(s);
  // Newton polish with a central-difference slope; keep only improving steps.
  for (int k = 0; k < 8 && std::abs(gs) >= 1e-12; ++k) {
    const double h = 1e-6 * s;
    const double slope = (g(s + h) - g(s - h)) / (2.0 * h);
    if (slope == 0.0) break;
    const double trial = s - gs / slope;
    if (!(trial > 0.0)) break;
    const double g_trial = g(trial);
    ++result.iterations;
    if (std::abs(g_trial) >= std::abs(gs)) break;
    s = trial;
    gs = g_trial;
  }
  result.s_star = s;
  result.gprime_at_half = gs;
  return result;
}

ScaleSearchResult find_symmetric_scale(const TraceFunction& trace, Dimension n) {
  const std::vector<double> radii = {1e2, 1e3, 1e4};
  const DecayReport decay = decay_report(trace.source(), n, radii);
  if (!(decay.mu_estimate > 0.0)) {
    throw PreconditionError("find_symmetric_scale: decay constant is not positive");
  }
  const double lambda_guess =
      std::pow(decay.mu_estimate / derive_amplitude(n), 1.0 / n.half_excess());
  return find_symmetric_scale(trace, n, 1e-3 * lambda_guess, 1e3 * lambda_guess);
}

SymmetryCheck verify_lemma32_symmetry(const ScalarField& u, Dimension n, double s,
                                      const AxisOptions& options) {
  Point e = Point::Zero(n);
  e[0] = 1.0;
  const ScalarField v = kelvin_at(scale_field(u, s), KelvinCenter(e), n);
  const AxisDetection axis = detect_axis(v, n, options);
  Vector target = Vector::Zero(n - 1);
  target[0] = 0.5;
  SymmetryCheck check;
  check.axis_point = axis.axis_point;
  check.axis_distance = (axis.axis_point - target).norm();
  check.asymmetry_score = axis.asymmetry_score;
  return check;
}

BoundaryProfileCheck boundary_profile_check(const ScalarField& u, Dimension n,
                                            std::span<const Point> boundary_points) {
  std::vector<Eigen::VectorXd> tangential;
  std::vector<double> values;
  tangential.reserve(boundary_points.size());
  values.reserve(boundary_points.size());
  for (const Point& x : boundary_points) {
    if (x.size() != n || x[n - 1] != 0.0) {
      throw DomainError("boundary_profile_check: sample is not on x_n = 0");
    }
    const double value = u.value(x);
    if (!(value > 0.0)) throw DomainError("boundary_profile_check: field is not positive");
    tangential.push_back(x.head(n - 1));
    values.push_back(value);
  }
  const double k = n.half_excess();
  const ProfileFit fit = fit_radial_profile(tangential, values, k);

  BoundaryProfileCheck out;
  out.amplitude = fit.amplitude;
  out.scale = fit.scale;
  out.center = fit.center;
  out.rms_log_residual = fit.rms_log_residual;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = fit.scale * fit.scale + (tangential[i] - fit.center).squaredNorm();
    const double model = fit.amplitude * std::pow(fit.scale / d, k);
    out.max_deviation = std::max(out.max_deviation, std::abs(values[i] - model));
  }
  return out;
}

BoundaryProfileCheck boundary_profile_check(const ScalarField& u, Dimension n,
                                            std::size_t count, double extent,
                                            std::uint64_t seed) {
  const auto points = boundary_samples(n, count, extent, seed);
  return boundary_profile_check(u, n, points);
}

namespace {

struct OdeState {
  double u;
  double du;
};

OdeState rk4_step(OdeState s, double h, double q) {
  auto accel = [q](double u) { return -std::pow(std::abs(u), q - 1.0) * u; };
  const double k1u = s.du;
  const double k1v = accel(s.u);
  const double k2u = s.du + 0.5 * h * k1v;
  const double k2v = accel(s.u + 0.5 * h * k1u);
  const double k3u = s.du + 0.5 * h * k2v;
  const double k3v = accel(s.u + 0.5 * h * k2u);
  const double k4u = s.du + h * k3v;
  const double k4v = accel(s.u + h * k3u);
  return {s.u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
          s.du + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

}  // namespace

ShootingResult shoot_case1(const ShootingConfig& config) {
  const Dimension n(config.n);
  if (!(config.c > 0.0)) throw DomainError("shoot_case1: initial value must be positive");
  if (!(config.step > 0.0)) throw DomainError("shoot_case1: step must be positive");
  ShootingResult result;
  result.initial_value = config.c;
  result.p = config.p.value_or(n.critical_boundary_exponent());
  result.q = config.q.value_or(n.printed_interior_exponent());
  result.t_max = config.t_max.value_or(2.0 * std::pow(config.c, 1.0 - result.p) + 1.0);
  result.step = config.step;
  if (!(result.q > 1.0)) throw DomainError("shoot_case1: q must exceed 1");

  OdeState state{config.c, -std::pow(config.c, result.p)};
  double t = 0.0;
  while (t < result.t_max) {
    const double h = std::min(config.step, result.t_max - t);
    const OdeState next = rk4_step(state, h, result.q);
    ++result.step_count;
    if (!std::isfinite(next.u) || !std::isfinite(next.du) ||
        std::abs(next.u) > config.overflow_guard || std::abs(next.du) > config.overflow_guard) {
      throw IntegrationError("shoot_case1: solution left the representable range at t = " +
                             std::to_string(t));
    }
    if (next.u <= 0.0) {
      double lo = 0.0;
      double hi = h;
      for (int i = 0; i < 200 && hi - lo > 1e-16 * (t + hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (rk4_step(state, mid, result.q).u > 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      const OdeState at_zero = rk4_step(state, hi, result.q);
      result.zero_crossing_t = t + 0.5 * (lo + hi);
      result.final_state = {at_zero.u, at_zero.du};
      return result;
    }
    state = next;
    t = std::min(static_cast<double>(result.step_count) * config.step, result.t_max);
  }
  result.final_state = {state.u, state.du};
  return result;
}

}  // namespace halfspace
