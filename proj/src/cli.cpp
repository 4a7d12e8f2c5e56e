#include "halfspace/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "halfspace/bubble.hpp"
#include "halfspace/fit.hpp"
#include "halfspace/kelvin.hpp"
#include "halfspace/moving_plane.hpp"
#include "halfspace/onedim.hpp"
#include "halfspace/sampling.hpp"

namespace halfspace::cli {

const std::vector<std::string> kSubcommands = {
    "verify-bubble", "kelvin-check",     "moving-plane", "detect-axis", "decay",
    "find-scale",    "shoot-ode",        "boundary-profile", "solve",   "convergence"};

namespace {

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "default"; }

void record_config(Report& r, const RunConfig& c) {
  r.set_config("n", std::to_string(c.n));
  r.set_config("lambda", format_number(c.lambda));
  r.set_config("center", join(c.center));
  r.set_config("kelvin-center", join(c.kelvin_center));
  r.set_config("kelvin", c.kelvin ? "true" : "false");
  r.set_config("q-exponent", opt(c.q_exponent));
  r.set_config("p-exponent", opt(c.p_exponent));
  r.set_config("samples", std::to_string(c.samples));
  r.set_config("extent", format_number(c.extent));
  r.set_config("tol", format_number(c.tol));
  r.set_config("plane-lo", format_number(c.plane_lo));
  r.set_config("plane-hi", format_number(c.plane_hi));
  r.set_config("plane-step", format_number(c.plane_step));
  r.set_config("sigma-count", std::to_string(c.sigma_count));
  r.set_config("radius-cap", format_number(c.radius_cap));
  r.set_config("exclusion", format_number(c.exclusion));
  r.set_config("radii", join(c.radii));
  r.set_config("directions", std::to_string(c.directions));
  r.set_config("s-lo", opt(c.s_lo));
  r.set_config("s-hi", opt(c.s_hi));
  r.set_config("c", format_number(c.c));
  r.set_config("step", format_number(c.step));
  r.set_config("t-max", opt(c.t_max));
  r.set_config("grid", std::to_string(c.grid));
  r.set_config("grids", join(c.grids));
  r.set_config("domain", format_number(c.domain));
  r.set_config("perturbation", format_number(c.perturbation));
  r.set_config("far-field", c.far_field);
  r.set_config("max-iter", std::to_string(c.max_iter));
  r.set_config("continuation-steps", std::to_string(c.continuation_steps));
  r.set_config("seed", std::to_string(c.seed));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

Vector tangential(const std::vector<double>& v, int n) {
  Vector out = Vector::Zero(n - 1);
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
  return out;
}

Point boundary_point(const std::vector<double>& v, int n) {
  Point e = Point::Zero(n);
  e.head(n - 1) = tangential(v, n);
  return e;
}

double interior_q(const RunConfig& c) {
  return c.q_exponent.value_or(Dimension(c.n).critical_interior_exponent());
}
double boundary_p(const RunConfig& c) {
  return c.p_exponent.value_or(Dimension(c.n).critical_boundary_exponent());
}

std::filesystem::path output_path(const RunConfig& c, const std::string& suffix) {
  return std::filesystem::path(c.output_dir) / (c.subcommand + suffix);
}

SigmaSamplingSpec sigma_spec(const RunConfig& c) {
  SigmaSamplingSpec s;
  s.count = c.sigma_count;
  s.radius_cap = c.radius_cap;
  s.exclusion_radius = c.exclusion;
  s.seed = c.seed;
  return s;
}

AxisOptions axis_options(const RunConfig& c) {
  AxisOptions o;
  o.sweep.sampling = sigma_spec(c);
  o.sweep.threads = c.threads;
  o.grid_lo = c.plane_lo;
  o.grid_hi = c.plane_hi;
  o.grid_step = c.plane_step;
  return o;
}

// Kelvin image about the origin of a bubble is the bubble with (lambda, y) / (lambda^2 + |y|^2).
BubbleParams kelvin_image_params(const BubbleParams& b) {
  BubbleParams out = b;
  const double Q = b.lambda * b.lambda + b.center.squaredNorm();
  out.lambda = b.lambda / Q;
  out.center = b.center / Q;
  return out;
}

void verify_bubble(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda, tangential(c.center, c.n));
  const double q = interior_q(c), p = boundary_p(c);
  const auto interior = half_space_samples(c.n, c.samples, c.extent, c.seed);
  const auto boundary = boundary_samples(c.n, c.samples, c.extent, c.seed);
  const auto ri = verify_interior(b.field, q, interior);
  const auto rb = verify_boundary(b.field, p, boundary);
  r.add_metric("interior_exponent_used", ri.interior_exponent_used);
  r.add_metric("boundary_exponent_used", p);
  r.add_metric("amplitude", b.params.amplitude);
  r.add_metric("center_depth", b.params.center[c.n - 1]);
  r.add_metric("max_interior_residual", ri.max_interior_residual);
  r.add_metric("max_boundary_residual", rb.max_boundary_residual);
  r.add_metric("proportionality_defect", ri.proportionality_defect);
  r.add_metric("sample_count", static_cast<double>(ri.sample_count));
  r.check("max_interior_residual", ri.max_interior_residual < c.tol);
  r.check("max_boundary_residual", rb.max_boundary_residual < c.tol);
  r.check("proportionality_defect", ri.proportionality_defect < c.tol);
  if (c.csv) {
    std::vector<double> values;
    for (const auto& x : interior) values.push_back(b.field.value(x));
    write_points_csv(output_path(c, ".csv"), interior, values);
  }
}

void kelvin_check(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda, tangential(c.center, c.n));
  const KelvinCenter e(boundary_point(c.kelvin_center, c.n));
  const auto v = kelvin_at(b.field, e, n);
  const double q = interior_q(c), p = boundary_p(c);

  std::vector<Point> pts;
  for (const auto& x : half_space_samples(c.n, 2 * c.samples, c.extent, c.seed)) {
    const Point y = x + e.point();
    if (x.norm() > 0.1 && pts.size() < c.samples) pts.push_back(y);
  }
  for (const auto& x : boundary_samples(c.n, c.samples / 4 + 1, c.extent, c.seed)) {
    if (x.norm() > 0.1) pts.push_back(x + e.point());
  }
  const auto rt = verify_transformed_system(v, p, q, pts, e);
  const auto vv = kelvin_at(v, e, n);
  double involution = 0.0;
  for (const auto& x : pts) {
    involution = std::max(involution, std::abs(vv.value(x) - b.field.value(x)) / b.field.value(x));
  }
  const auto fit = fit_bubble(v, n, pts);
  r.add_metric("boundary_weight_exponent", boundary_weight_exponent(n, p));
  r.add_metric("max_interior_residual", rt.max_interior_residual);
  r.add_metric("max_boundary_residual", rt.max_boundary_residual);
  r.add_metric("involution_error", involution);
  r.add_metric("fit_lambda", fit.params.lambda);
  for (int i = 0; i < c.n; ++i) r.add_metric("fit_center_" + std::to_string(i + 1), fit.params.center[i]);
  r.add_metric("fit_amplitude", fit.params.amplitude);
  r.add_metric("fit_residual", fit.fit_residual);
  r.check("max_interior_residual", rt.max_interior_residual < 1e-8);
  r.check("max_boundary_residual", rt.max_boundary_residual < 1e-8);
  r.check("involution_error", involution < 1e-10);
  r.check("fit_residual", fit.fit_residual < 1e-7);
}

ScalarField plane_field(const RunConfig& c, double& expected_axis) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda, tangential(c.center, c.n));
  if (!c.kelvin) {
    expected_axis = b.params.center[0];
    return b.field;
  }
  expected_axis = kelvin_image_params(b.params).center[0];
  return kelvin_origin(b.field, n);
}

void moving_plane(const RunConfig& c, Report& r) {
  double expected = 0.0;
  const auto v = plane_field(c, expected);
  SweepOptions o;
  o.sampling = sigma_spec(c);
  o.threads = c.threads;
  const auto grid = plane_grid(c.plane_lo, c.plane_hi, c.plane_step);
  const auto sweep = sweep_planes(v, grid, o);
  std::size_t far_left_violations = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= expected - 10.0) far_left_violations += sweep.reports[i].violation_count;
  }
  r.add_metric("lambda0_estimate", sweep.lambda0_estimate);
  r.add_metric("expected_axis", expected);
  r.add_metric("axis_error", std::abs(sweep.lambda0_estimate - expected));
  r.add_metric("refined", sweep.refined ? 1.0 : 0.0);
  r.add_metric("planes_evaluated", static_cast<double>(grid.size()));
  r.add_metric("far_left_violations", static_cast<double>(far_left_violations));
  r.check("axis_error", std::abs(sweep.lambda0_estimate - expected) < 1e-5);
  r.check("far_left_violations", far_left_violations == 0);
  if (c.csv) {
    std::ofstream out(output_path(c, ".csv"));
    out << "lambda,min_difference,max_abs_difference,violation_count\n";
    for (const auto& rep : sweep.reports) {
      out << format_number(rep.lambda_plane) << ',' << format_number(rep.min_difference) << ','
          << format_number(rep.max_abs_difference) << ',' << rep.violation_count << '\n';
    }
  }
}

void detect_axis_cmd(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda, tangential(c.center, c.n));
  ScalarField f = b.field;
  Vector expected = b.params.center.head(c.n - 1);
  if (c.kelvin) {
    f = kelvin_origin(b.field, n);
    expected = kelvin_image_params(b.params).center.head(c.n - 1);
  }
  const auto axis = detect_axis(f, n, axis_options(c));
  for (int i = 0; i < c.n - 1; ++i) r.add_metric("axis_point_" + std::to_string(i + 1), axis.axis_point[i]);
  const double err = (axis.axis_point - expected).norm();
  r.add_metric("axis_error", err);
  r.add_metric("asymmetry_score", axis.asymmetry_score);
  r.check("axis_error", err < 1e-5);
  r.check("asymmetry_score", axis.asymmetry_score < 1e-8);
}

void decay(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda, tangential(c.center, c.n));
  const auto dirs = hemisphere_directions(c.n, c.directions, c.seed);
  const auto d = decay_report(b.field, n, c.radii, dirs);
  const double mu = b.params.decay_constant();
  const double grad = d.grad_limit_estimates.cwiseAbs().maxCoeff();
  r.add_metric("mu_estimate", d.mu_estimate);
  r.add_metric("mu_expected", mu);
  r.add_metric("mu_spread", d.mu_spread);
  r.add_metric("radial_limit_estimate", d.radial_limit_estimate);
  r.add_metric("radial_limit_expected", -(c.n - 2) * mu);
  r.add_metric("max_grad_limit", grad);
  r.check("mu_estimate", std::abs(d.mu_estimate - mu) < 1e-4);
  r.check("radial_limit_estimate", std::abs(d.radial_limit_estimate + (c.n - 2) * mu) < 1e-3);
  r.check("max_grad_limit", grad < 1e-3);
  r.check("mu_spread", d.mu_spread < 1e-3);
}

void find_scale(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda);
  const TraceFunction trace(b.field);
  const auto res = (c.s_lo && c.s_hi) ? find_symmetric_scale(trace, n, *c.s_lo, *c.s_hi)
                                      : find_symmetric_scale(trace, n);
  const double expected = c.lambda * std::sqrt(2.0 * (c.n - 1) / (c.n - 2.0));
  const auto forms = g_s_prime_half_forms(trace, n, res.s_star);
  const auto sym = verify_lemma32_symmetry(b.field, n, res.s_star, axis_options(c));
  r.add_metric("s_star", res.s_star);
  r.add_metric("s_star_expected", expected);
  r.add_metric("gprime_at_half", res.gprime_at_half);
  r.add_metric("bracket_lo", res.bracket.first);
  r.add_metric("bracket_hi", res.bracket.second);
  r.add_metric("iterations", res.iterations);
  r.add_metric("form_disagreement", std::abs(forms.reflected - forms.direct));
  r.add_metric("axis_distance", sym.axis_distance);
  r.add_metric("asymmetry_score", sym.asymmetry_score);
  r.check("s_star", std::abs(res.s_star - expected) < 1e-8);
  r.check("form_disagreement", std::abs(forms.reflected - forms.direct) < 1e-10);
  r.check("axis_distance", sym.axis_distance < 1e-5);
}

void shoot_ode(const RunConfig& c, Report& r) {
  ShootingConfig cfg;
  cfg.n = c.n;
  cfg.c = c.c;
  cfg.p = c.p_exponent;
  cfg.q = c.q_exponent;
  cfg.step = c.step;
  cfg.t_max = c.t_max;
  const auto res = shoot_case1(cfg);
  cfg.step = c.step / 2;
  const auto half = shoot_case1(cfg);
  const double bound = std::pow(c.c, 1.0 - res.p);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.add_metric("p", res.p);
  r.add_metric("q", res.q);
  r.add_metric("zero_crossing_t", res.zero_crossing_t.value_or(nan));
  r.add_metric("concavity_bound", bound);
  r.add_metric("step_count", static_cast<double>(res.step_count));
  r.add_metric("final_u", res.final_state.first);
  r.add_metric("final_du", res.final_state.second);
  const bool both = res.zero_crossing_t && half.zero_crossing_t;
  const double drift = both ? std::abs(*res.zero_crossing_t - *half.zero_crossing_t) : nan;
  r.add_metric("step_halving_drift", drift);
  r.check("zero_crossing_t", res.zero_crossing_t.has_value());
  r.check("concavity_bound", res.zero_crossing_t && *res.zero_crossing_t <= bound);
  r.check("step_halving_drift", both && drift < 1e-6);
}

void boundary_profile(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda, tangential(c.center, c.n));
  const auto res = boundary_profile_check(b.field, n, c.samples, c.extent, c.seed);
  const double yn = b.params.center[c.n - 1];
  const double scale = std::sqrt(c.lambda * c.lambda + yn * yn);
  const double amplitude = b.params.amplitude * std::pow(c.lambda / scale, n.half_excess());
  r.add_metric("amplitude", res.amplitude);
  r.add_metric("amplitude_expected", amplitude);
  r.add_metric("scale", res.scale);
  r.add_metric("scale_expected", scale);
  for (int i = 0; i < c.n - 1; ++i) r.add_metric("center_" + std::to_string(i + 1), res.center[i]);
  r.add_metric("max_deviation", res.max_deviation);
  r.add_metric("rms_log_residual", res.rms_log_residual);
  r.check("amplitude", std::abs(res.amplitude - amplitude) < 1e-8 * amplitude);
  r.check("scale", std::abs(res.scale - scale) < 1e-8 * scale);
  r.check("center", (res.center - b.params.center.head(c.n - 1)).norm() < 1e-8);
  r.check("max_deviation", res.max_deviation < 1e-10);
}

NewtonConfig newton_config(const RunConfig& c) {
  NewtonConfig nc;
  nc.max_iter = c.max_iter;
  nc.continuation_steps = c.continuation_steps;
  return nc;
}

void solve(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda);
  const AxisymGrid grid(c.domain, c.domain, c.grid, c.grid);
  const FarField ff = c.far_field == "exact" ? far_field_from(b.field)
                                             : asymptotic_far_field(b.params.decay_constant(), n);
  Problem problem{grid, c.n, interior_q(c), boundary_p(c), ff};
  const auto exact = sample_on_grid(grid, b.field);
  auto guess = exact;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& v : guess) v *= 1.0 + c.perturbation * dist(rng);
  const auto res = newton_solve(problem, guess, newton_config(c));
  r.add_metric("converged", res.converged ? 1.0 : 0.0);
  r.add_metric("newton_iterations", res.newton_iterations);
  r.add_metric("final_residual_norm", res.final_residual_norm);
  r.add_metric("used_continuation", res.used_continuation ? 1.0 : 0.0);
  r.add_metric("h", grid.h_r());
  r.check("converged", res.converged);
  if (!res.converged) return;
  double err = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) err = std::max(err, std::abs(res.grid_values[k] - exact[k]));
  r.add_metric("error_vs_bubble", err);
  std::vector<Point> pts;
  const int stride = std::max(1, c.grid / 16);
  for (int j = 0; j < grid.m_z; j += stride)
    for (int i = 0; i < grid.m_r; i += stride) {
      Point x = Point::Zero(c.n);
      x[0] = grid.r(i);
      x[c.n - 1] = grid.z(j);
      pts.push_back(x);
    }
  const auto lifted = lift_to_field(res, grid, n);
  const auto fit = fit_bubble(lifted, n, pts);
  r.add_metric("fit_lambda", fit.params.lambda);
  r.add_metric("fit_amplitude", fit.params.amplitude);
  r.add_metric("fit_residual", fit.fit_residual);
  r.check("fit_lambda", std::abs(fit.params.lambda - c.lambda) < 0.02 * c.lambda);
  r.check("fit_amplitude", std::abs(fit.params.amplitude - b.params.amplitude) < 0.02 * b.params.amplitude);
  if (c.far_field == "exact") r.check("error_vs_bubble", err < 10.0 * grid.h_r() * grid.h_r());
  if (c.csv) write_grid_csv(output_path(c, ".csv"), grid, res.grid_values);
}

void convergence(const RunConfig& c, Report& r) {
  const Dimension n(c.n);
  const auto b = make_bubble(n, c.lambda);
  std::vector<AxisymGrid> grids;
  for (int m : c.grids) grids.emplace_back(c.domain, c.domain, m, m);
  const auto study = convergence_study(n, interior_q(c), boundary_p(c), b.field, grids, newton_config(c));
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const std::string tag = std::to_string(c.grids[i]);
    r.add_metric("error_" + tag, study.errors[i]);
    r.add_metric("iterations_" + tag, study.iterations[i]);
  }
  r.add_metric("observed_order", study.observed_order);
  r.check("observed_order", std::abs(study.observed_order - 2.0) <= 0.2);
  r.check("monotone_refinement", study.errors.back() < study.errors.front());
}

}  // namespace

void validate(const RunConfig& c) {
  require(std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) != kSubcommands.end(),
          "unknown subcommand '" + c.subcommand + "'");
  require(c.n >= 3, "--n must be at least 3");
  require(c.lambda > 0.0, "--lambda must be positive");
  require(c.center.empty() || static_cast<int>(c.center.size()) == c.n - 1, "--center needs n-1 entries");
  require(c.kelvin_center.empty() || static_cast<int>(c.kelvin_center.size()) == c.n - 1,
          "--kelvin-center needs n-1 entries");
  require(!c.q_exponent || *c.q_exponent > 1.0, "--q-exponent must exceed 1");
  require(!c.p_exponent || *c.p_exponent > 0.0, "--p-exponent must be positive");
  require(c.samples >= 1 && c.extent > 0.0 && c.tol > 0.0, "samples, extent and tol must be positive");
  require(c.plane_step > 0.0 && c.plane_hi >= c.plane_lo, "invalid plane grid");
  require(c.sigma_count >= 1 && c.radius_cap > 0.0 && c.exclusion >= 0.0, "invalid sigma sampling");
  require(c.radii.size() >= 2 && std::is_sorted(c.radii.begin(), c.radii.end()) && c.radii.front() > 0.0,
          "--radii must be >= 2 increasing positive values");
  require(c.directions >= 1, "--directions must be positive");
  require(c.s_lo.has_value() == c.s_hi.has_value(), "--s-lo and --s-hi go together");
  require(!c.s_lo || (*c.s_lo > 0.0 && *c.s_hi > *c.s_lo), "invalid scale bracket");
  require(c.c > 0.0 && c.step > 0.0, "--c and --step must be positive");
  require(!c.t_max || *c.t_max > 0.0, "--t-max must be positive");
  require(c.grid >= 2 && c.domain > 0.0, "invalid grid");
  require(c.grids.size() >= 2, "--grids needs at least two entries");
  for (int m : c.grids) require(m >= 2, "--grids entries must be >= 2");
  require(c.perturbation >= 0.0 && c.perturbation < 1.0, "--perturbation must lie in [0, 1)");
  require(c.far_field == "exact" || c.far_field == "asymptotic", "--far-field is exact or asymptotic");
  require(c.max_iter >= 1 && c.continuation_steps >= 0, "invalid Newton settings");
  require(c.threads >= 1, "--threads must be positive");
}

Report execute(const RunConfig& config) {
  validate(config);
  Report r;
  r.subcommand = config.subcommand;
  record_config(r, config);
  const std::string& s = config.subcommand;
  try {
    if (s == "verify-bubble") verify_bubble(config, r);
    else if (s == "kelvin-check") kelvin_check(config, r);
    else if (s == "moving-plane") moving_plane(config, r);
    else if (s == "detect-axis") detect_axis_cmd(config, r);
    else if (s == "decay") decay(config, r);
    else if (s == "find-scale") find_scale(config, r);
    else if (s == "shoot-ode") shoot_ode(config, r);
    else if (s == "boundary-profile") boundary_profile(config, r);
    else if (s == "solve") solve(config, r);
    else if (s == "convergence") convergence(config, r);
  } catch (const SweepFailure&) {
    r.check("sweep_planes", false);
  } catch (const FitFailure&) {
    r.check("fit", false);
  } catch (const StudyError&) {
    r.check("convergence_study", false);
  } catch (const BracketError&) {
    r.check("scale_bracket", false);
  } catch (const IntegrationError&) {
    r.check("integration", false);
  } catch (const PreconditionError&) {
    r.check("precondition", false);
  }
  return r;
}

int run(const RunConfig& config, std::ostream& out) {
  if (!config.output_dir.empty()) std::filesystem::create_directories(config.output_dir);
  const Report r = execute(config);
  const std::string body = to_json(r);
  out << body;
  if (!config.output_dir.empty()) {
    std::ofstream(output_path(config, ".json")) << body;
    std::ofstream(output_path(config, ".meta.json")) << metadata_json(r);
  }
  return r.pass() ? kExitPass : kExitCheckFailure;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Numerical checks for the critical semilinear half-space problem"};
  app.require_subcommand(0, 1);
  app.allow_config_extras(false);
  app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
  bool show_defaults = false;
  app.add_flag("--show-defaults", show_defaults, "Print every option with its default and exit");

  app.add_option("--n", cfg.n, "Space dimension")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "Bubble scale")->capture_default_str();
  app.add_option("--center", cfg.center, "Tangential bubble center y' (comma separated)")
      ->delimiter(',')->default_str("0");
  app.add_option("--kelvin-center", cfg.kelvin_center, "Tangential inversion center e'")
      ->delimiter(',')->default_str("0");
  app.add_option("--kelvin", cfg.kelvin, "Apply the Kelvin transform about the origin first")
      ->capture_default_str();
  app.add_option("--q-exponent", cfg.q_exponent, "Interior exponent")
      ->default_str("(n+2)/(n-2); shoot-ode: 2n/(n-2)");
  app.add_option("--p-exponent", cfg.p_exponent, "Boundary exponent")->default_str("n/(n-2)");
  app.add_option("--samples", cfg.samples, "Sample count")->capture_default_str();
  app.add_option("--extent", cfg.extent, "Half-width of the sample box")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Residual tolerance for verify-bubble")->capture_default_str();
  app.add_option("--plane-lo", cfg.plane_lo, "First plane of the sweep")->capture_default_str();
  app.add_option("--plane-hi", cfg.plane_hi, "Last plane of the sweep")->capture_default_str();
  app.add_option("--plane-step", cfg.plane_step, "Sweep spacing")->capture_default_str();
  app.add_option("--sigma-count", cfg.sigma_count, "Samples per plane")->capture_default_str();
  app.add_option("--radius-cap", cfg.radius_cap, "Slab size R of the plane samples")->capture_default_str();
  app.add_option("--exclusion", cfg.exclusion, "Radius excluded around the origin")->capture_default_str();
  app.add_option("--radii", cfg.radii, "Radii for the decay limits")->delimiter(',')->default_str("100,1000,10000");
  app.add_option("--directions", cfg.directions, "Ray count for the decay limits")->capture_default_str();
  app.add_option("--s-lo", cfg.s_lo, "Lower scale bracket")->default_str("1e-3 * lambda_guess");
  app.add_option("--s-hi", cfg.s_hi, "Upper scale bracket")->default_str("1e3 * lambda_guess");
  app.add_option("--c", cfg.c, "Initial height for shoot-ode")->capture_default_str();
  app.add_option("--step", cfg.step, "RK4 step")->capture_default_str();
  app.add_option("--t-max", cfg.t_max, "Integration horizon")->default_str("2 c^(1-p) + 1");
  app.add_option("--grid", cfg.grid, "Cells per direction for solve")->capture_default_str();
  app.add_option("--grids", cfg.grids, "Cells per direction for convergence")->delimiter(',')
      ->default_str("32,64,128");
  app.add_option("--domain", cfg.domain, "Radial and vertical extent of the grid")->capture_default_str();
  app.add_option("--perturbation", cfg.perturbation, "Relative random perturbation of the initial guess")
      ->capture_default_str();
  app.add_option("--far-field", cfg.far_field, "Dirichlet data: exact or asymptotic")->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter, "Newton iteration cap")->capture_default_str();
  app.add_option("--continuation-steps", cfg.continuation_steps, "Stages of the q continuation fallback")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for sampling and perturbations")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads for plane sweeps")->capture_default_str();
  app.add_option("--output-dir", cfg.output_dir, "Directory for report files")->default_str("(none)");
  app.add_flag("--csv", cfg.csv, "Also write a CSV dump");

  for (const auto& name : kSubcommands) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (show_defaults) {
    for (const CLI::Option* o : app.get_options()) {
      if (o->get_lnames().empty()) continue;
      const std::string& name = o->get_lnames().front();
      if (name == "help" || name == "config" || name == "show-defaults") continue;
      out << name << " = " << o->get_default_str() << "    # "
          << o->get_description() << "\n";
    }
    return kExitPass;
  }
  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    err << "error: a subcommand is required\n" << app.help();
    return kExitUsage;
  }
  cfg.subcommand = subs.front()->get_name();
  try {
    return run(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace halfspace::cli
