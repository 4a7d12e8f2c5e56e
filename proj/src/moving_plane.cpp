#include "halfspace/moving_plane.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "halfspace/sampling.hpp"

namespace halfspace {

Point reflect(const Point& x, PlaneParams plane) {
  Point r = x;
  r[0] = 2.0 * plane.lambda_plane - x[0];
  return r;
}

namespace {

class ReflectedModel final : public FieldModel {
 public:
  ReflectedModel(ScalarField f, PlaneParams plane) : f_(std::move(f)), plane_(plane) {}

  int dim() const override { return f_.dim(); }
  Provenance provenance() const override { return f_.provenance(); }
  double value(const Point& x) const override { return f_.value(reflect(x, plane_)); }
  Vector gradient(const Point& x) const override {
    Vector g = f_.gradient(reflect(x, plane_));
    g[0] = -g[0];
    return g;
  }
  double laplacian(const Point& x) const override { return f_.laplacian(reflect(x, plane_)); }

 private:
  ScalarField f_;
  PlaneParams plane_;
};

// Swaps coordinate 0 with coordinate `axis` (a tangential direction).
class PermutedModel final : public FieldModel {
 public:
  PermutedModel(ScalarField f, int axis) : f_(std::move(f)), axis_(axis) {}

  int dim() const override { return f_.dim(); }
  Provenance provenance() const override { return f_.provenance(); }
  double value(const Point& x) const override { return f_.value(permute(x)); }
  Vector gradient(const Point& x) const override { return permute(f_.gradient(permute(x))); }
  double laplacian(const Point& x) const override { return f_.laplacian(permute(x)); }

 private:
  Point permute(Point x) const {
    std::swap(x[0], x[axis_]);
    return x;
  }
  ScalarField f_;
  int axis_;
};

}  // namespace

ScalarField reflect_field(const ScalarField& f, PlaneParams plane) {
  return ScalarField(std::make_shared<ReflectedModel>(f, plane));
}

bool in_sigma(const Point& x, PlaneParams plane, double exclusion) {
  return x[0] >= plane.lambda_plane && x[x.size() - 1] >= 0.0 && x.norm() > exclusion;
}

SigmaSampling SigmaSampling::generate(int n, PlaneParams plane, const SigmaSamplingSpec& spec) {
  if (!(spec.radius_cap > 0.0)) throw DomainError("SigmaSampling: radius cap must be positive");
  const double r = spec.radius_cap;
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -r);
  Eigen::VectorXd span = Eigen::VectorXd::Constant(n, 2.0 * r);
  lo[0] = plane.lambda_plane;
  span[0] = r;
  lo[n - 1] = 0.0;
  span[n - 1] = r;

  SigmaSampling s;
  s.lambda_plane = plane.lambda_plane;
  s.radius_cap = r;
  s.exclusion_radius = spec.exclusion_radius;
  s.points.reserve(spec.count);
  HaltonSequence seq(n, spec.seed);
  for (std::uint64_t i = 0; s.points.size() < spec.count; ++i) {
    Point x = lo + span.cwiseProduct(seq.at(i));
    if (in_sigma(x, plane, spec.exclusion_radius)) s.points.push_back(std::move(x));
  }
  return s;
}

bool SigmaSampling::valid_for(PlaneParams plane) const {
  return std::all_of(points.begin(), points.end(), [&](const Point& x) {
    return in_sigma(x, plane, exclusion_radius);
  });
}

MovingPlaneReport compare_on_sigma(const ScalarField& v, PlaneParams plane,
                                   const SigmaSampling& sampling, double tol) {
  if (!sampling.valid_for(plane)) {
    throw PreconditionError("compare_on_sigma: sampling does not lie in Sigma_lambda");
  }
  MovingPlaneReport report;
  report.lambda_plane = plane.lambda_plane;
  report.min_difference = std::numeric_limits<double>::infinity();
  for (const Point& x : sampling.points) {
    double diff;
    try {
      diff = v.value(x) - v.value(reflect(x, plane));
    } catch (const SingularityError&) {
      ++report.skipped_singular;
      continue;
    }
    ++report.evaluated;
    report.max_abs_difference = std::max(report.max_abs_difference, std::abs(diff));
    if (diff < -tol) ++report.violation_count;
    if (diff < report.min_difference) {
      report.min_difference = diff;
      report.argmin = x;
    }
  }
  if (report.evaluated == 0) report.min_difference = 0.0;
  return report;
}

namespace {

MovingPlaneReport report_at(const ScalarField& v, double lambda, const SweepOptions& options) {
  const PlaneParams plane{lambda};
  const auto sampling = SigmaSampling::generate(v.dim(), plane, options.sampling);
  return compare_on_sigma(v, plane, sampling, options.tol);
}

}  // namespace

SweepResult sweep_planes(const ScalarField& v, std::span<const double> lambda_grid,
                         const SweepOptions& options) {
  if (lambda_grid.empty()) throw DomainError("sweep_planes: empty grid");
  if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end())) {
    throw DomainError("sweep_planes: grid must be ascending");
  }
  SweepResult result;
  result.reports.resize(lambda_grid.size());
  if (options.threads > 1) {
    std::vector<std::future<void>> jobs;
    const std::size_t workers = static_cast<std::size_t>(options.threads);
    for (std::size_t w = 0; w < workers; ++w) {
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t i = w; i < lambda_grid.size(); i += workers) {
          result.reports[i] = report_at(v, lambda_grid[i], options);
        }
      }));
    }
    for (auto& j : jobs) j.get();
  } else {
    for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
      result.reports[i] = report_at(v, lambda_grid[i], options);
    }
  }

  const auto first_violation =
      std::find_if(result.reports.begin(), result.reports.end(),
                   [](const MovingPlaneReport& r) { return r.violation_count > 0; });
  if (first_violation == result.reports.begin()) {
    throw SweepFailure("sweep_planes: no violation-free plane at the left end of the grid");
  }
  if (first_violation == result.reports.end()) {
    result.lambda0_estimate = lambda_grid.back();
    return result;
  }
  const auto idx = static_cast<std::size_t>(first_violation - result.reports.begin());
  double lo = lambda_grid[idx - 1];
  double hi = lambda_grid[idx];
  while (hi - lo > options.bisection_width) {
    const double mid = 0.5 * (lo + hi);
    if (report_at(v, mid, options).violation_count > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.lambda0_estimate = lo;
  result.refined = true;
  return result;
}

std::vector<double> plane_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw DomainError("plane_grid: invalid range");
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + step * static_cast<double>(i));
  return grid;
}

namespace {

// Minimizes sum_i (g(x_i) - g(x_i^lambda))^2 over lambda by Gauss-Newton.
double polish_plane(const ScalarField& g, double lambda, const std::vector<Point>& samples) {
  for (int iter = 0; iter < 30; ++iter) {
    double num = 0.0;
    double den = 0.0;
    for (const Point& x : samples) {
      const Point xr = reflect(x, PlaneParams{lambda});
      double d;
      double jac;
      try {
        d = g.value(x) - g.value(xr);
        jac = -2.0 * g.gradient(xr)[0];
      } catch (const SingularityError&) {
        continue;
      }
      num += d * jac;
      den += jac * jac;
    }
    if (den == 0.0) break;
    const double step = num / den;
    lambda -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(lambda))) break;
  }
  return lambda;
}

}  // namespace

AxisDetection detect_axis(const ScalarField& f, Dimension n, const AxisOptions& options) {
  if (f.dim() != n) throw DomainError("detect_axis: dimension mismatch");
  const auto grid = plane_grid(options.grid_lo, options.grid_hi, options.grid_step);
  AxisDetection out;
  out.axis_point = Vector::Zero(n - 1);
  for (int axis = 0; axis < n - 1; ++axis) {
    const ScalarField g =
        axis == 0 ? f : ScalarField(std::make_shared<PermutedModel>(f, axis));
    SweepResult sweep = sweep_planes(g, grid, options.sweep);
    double lambda0 = sweep.lambda0_estimate;
    if (options.polish) {
      const auto near = SigmaSampling::generate(n, PlaneParams{lambda0}, options.sweep.sampling);
      lambda0 = polish_plane(g, lambda0, near.points);
    }
    const PlaneParams plane{lambda0};
    const auto at_plane = compare_on_sigma(
        g, plane, SigmaSampling::generate(n, plane, options.sweep.sampling), options.sweep.tol);
    out.axis_point[axis] = lambda0;
    out.asymmetry_score = std::max(out.asymmetry_score, at_plane.max_abs_difference);
    out.sweeps.push_back(std::move(sweep));
  }
  return out;
}

std::vector<Vector> hemisphere_directions(int n, std::size_t count, std::uint64_t seed) {
  std::vector<Vector> dirs;
  dirs.reserve(count);
  if (count == 0) return dirs;
  Vector en = Vector::Zero(n);
  en[n - 1] = 1.0;
  dirs.push_back(en);
  HaltonSequence seq(n, seed);
  for (std::uint64_t i = 0; dirs.size() < count; ++i) {
    Vector d = 2.0 * seq.at(i).array() - 1.0;
    d[n - 1] = std::abs(d[n - 1]);
    const double len = d.norm();
    if (len < 0.2 || len > 1.0) continue;  // rejection keeps the directions spread
    dirs.push_back(d / len);
  }
  return dirs;
}

double extrapolate_to_zero(std::span<const double> h, std::span<const double> y) {
  if (h.size() != y.size() || h.empty()) throw DomainError("extrapolate_to_zero: bad input");
  std::vector<double> p(y.begin(), y.end());
  const std::size_t m = p.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      // Neville recurrence evaluated at 0
      p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i]);
    }
  }
  return p[0];
}

DecayReport decay_report(const ScalarField& f, Dimension n, std::span<const double> radii,
                         std::span<const Vector> directions) {
  if (radii.empty()) throw DomainError("decay_report: no radii");
  if (!std::is_sorted(radii.begin(), radii.end())) {
    throw DomainError("decay_report: radii must be increasing");
  }
  std::vector<Vector> default_dirs;
  if (directions.empty()) {
    default_dirs = hemisphere_directions(n, 10);
    directions = default_dirs;
  }

  std::vector<double> h;
  for (double r : radii) h.push_back(1.0 / r);

  DecayReport report;
  report.radii_used.assign(radii.begin(), radii.end());
  report.grad_limit_estimates = Vector::Zero(n);
  double radial_sum = 0.0;
  const double k = n - 2.0;
  for (const Vector& dir : directions) {
    if (dir.size() != n || dir[n - 1] < 0.0) {
      throw DomainError("decay_report: direction must have d_n >= 0");
    }
    const Vector d = dir.normalized();
    std::vector<double> mu_samples;
    std::vector<double> radial_samples;
    std::vector<std::vector<double>> grad_samples(n);
    for (double r : radii) {
      const Point x = r * d;
      const double weight = std::pow(r, k);
      const Vector g = f.gradient(x);
      mu_samples.push_back(weight * f.value(x));
      radial_samples.push_back(weight * x.dot(g));
      for (int i = 0; i < n; ++i) grad_samples[i].push_back(weight * g[i]);
    }
    const double mu = extrapolate_to_zero(h, mu_samples);
    report.mu_per_direction.push_back(mu);
    radial_sum += extrapolate_to_zero(h, radial_samples);
    for (int i = 0; i < n; ++i) {
      const double gl = extrapolate_to_zero(h, grad_samples[i]);
      if (std::abs(gl) > std::abs(report.grad_limit_estimates[i])) {
        report.grad_limit_estimates[i] = gl;
      }
    }
  }
  const auto [lo, hi] =
      std::minmax_element(report.mu_per_direction.begin(), report.mu_per_direction.end());
  report.mu_spread = *hi - *lo;
  double mu_sum = 0.0;
  for (double m : report.mu_per_direction) mu_sum += m;
  report.mu_estimate = mu_sum / static_cast<double>(report.mu_per_direction.size());
  report.radial_limit_estimate = radial_sum / static_cast<double>(directions.size());
  return report;
}

}  // namespace halfspace
