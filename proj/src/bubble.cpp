#include "halfspace/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace halfspace {

bool BubbleParams::boundary_compatible(double rel_tol) const {
  const double lhs = (n - 2) * (-center[n - 1]);
  const double rhs = std::pow(amplitude, 2.0 / (n - 2)) * lambda;
  return std::abs(lhs - rhs) <= rel_tol * std::max(std::abs(lhs), std::abs(rhs));
}

double BubbleParams::decay_constant() const { return amplitude * std::pow(lambda, 0.5 * (n - 2)); }

double derive_amplitude(Dimension n) {
  const int d = n.value();
  return std::pow(double(d) * (d - 2), 0.25 * (d - 2));
}

double derive_center_depth(Dimension n, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("derive_center_depth: lambda must be positive");
  const int d = n.value();
  return -lambda * std::sqrt(double(d) / (d - 2));
}

namespace {

class BubbleModel final : public FieldModel {
 public:
  explicit BubbleModel(BubbleParams p)
      : p_(std::move(p)), k_(0.5 * (p_.n - 2)), lambda_sq_(p_.lambda * p_.lambda) {}

  int dim() const override { return p_.n; }
  Provenance provenance() const override { return Provenance::closed_form; }

  double value(const Point& x) const override { return value_at(denominator(x)); }

  Vector gradient(const Point& x) const override {
    const double d = denominator(x);
    return (-(p_.n - 2) * value_at(d) / d) * (x - p_.center);
  }

  double laplacian(const Point& x) const override {
    const double d = denominator(x);
    return -p_.n * (p_.n - 2) * lambda_sq_ * value_at(d) / (d * d);
  }

 private:
  double denominator(const Point& x) const {
    if (x.size() != p_.n) throw DomainError("bubble: dimension mismatch");
    const double r2 = (x - p_.center).squaredNorm();
    if (r2 == 0.0) throw DomainError("bubble: evaluation at the center");
    return lambda_sq_ + r2;
  }
  double value_at(double d) const { return p_.amplitude * std::pow(p_.lambda / d, k_); }

  BubbleParams p_;
  double k_;
  double lambda_sq_;
};

}  // namespace

ScalarField bubble_field(const BubbleParams& params) {
  Dimension n(params.n);
  if (!(params.lambda > 0.0)) throw DomainError("bubble: lambda must be positive");
  if (!(params.amplitude > 0.0)) throw DomainError("bubble: amplitude must be positive");
  if (params.center.size() != n) throw DomainError("bubble: center has wrong dimension");
  if (!(params.center[n - 1] < 0.0)) {
    throw DomainError("bubble: center must lie in the lower half-space");
  }
  return ScalarField(std::make_shared<BubbleModel>(params));
}

Bubble make_bubble(Dimension n, double lambda, const Vector& y_prime) {
  if (y_prime.size() != n - 1) {
    throw DomainError("make_bubble: tangential center needs n-1 = " + std::to_string(n - 1) +
                      " entries");
  }
  BubbleParams p;
  p.n = n;
  p.lambda = lambda;
  p.center = Point(n.value());
  p.center.head(n - 1) = y_prime;
  p.center[n - 1] = derive_center_depth(n, lambda);
  p.amplitude = derive_amplitude(n);
  return {bubble_field(p), p};
}

Bubble make_bubble(Dimension n, double lambda) {
  return make_bubble(n, lambda, Vector::Zero(n - 1));
}

ResidualReport verify_interior(const ScalarField& f, double q, std::span<const Point> samples) {
  if (!(q > 1.0)) throw DomainError("verify_interior: exponent q must exceed 1");
  ResidualReport report;
  report.interior_exponent_used = q;
  report.sample_count = samples.size();
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = -std::numeric_limits<double>::infinity();
  for (const Point& x : samples) {
    require_admissible(x, f.dim(), "verify_interior");
    const double u = f.value(x);
    if (!(u > 0.0)) throw DomainError("verify_interior: field is not positive at a sample");
    const double source = std::pow(u, q);
    const double minus_lap = -f.laplacian(x);
    report.max_interior_residual = std::max(report.max_interior_residual,
                                            std::abs(minus_lap - source));
    const double ratio = minus_lap / source;
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  if (!samples.empty()) report.proportionality_defect = ratio_max - ratio_min;
  return report;
}

ResidualReport verify_boundary(const ScalarField& f, double p, std::span<const Point> samples) {
  ResidualReport report;
  report.sample_count = samples.size();
  const int n = f.dim();
  for (const Point& x : samples) {
    if (x.size() != n || x[n - 1] != 0.0) {
      throw DomainError("verify_boundary: sample is not on the boundary x_n = 0");
    }
    const double u = f.value(x);
    if (!(u > 0.0)) throw DomainError("verify_boundary: field is not positive at a sample");
    const double normal = f.gradient(x)[n - 1];
    report.max_boundary_residual =
        std::max(report.max_boundary_residual, std::abs(normal + std::pow(u, p)));
  }
  return report;
}

namespace {

class ScaledModel final : public FieldModel {
 public:
  ScaledModel(ScalarField f, double s)
      : f_(std::move(f)), s_(s), factor_(std::pow(s, 0.5 * (f_.dim() - 2))) {}

  int dim() const override { return f_.dim(); }
  Provenance provenance() const override { return f_.provenance(); }
  double value(const Point& x) const override { return factor_ * f_.value(s_ * x); }
  Vector gradient(const Point& x) const override {
    return (factor_ * s_) * f_.gradient(s_ * x);
  }
  double laplacian(const Point& x) const override {
    return factor_ * s_ * s_ * f_.laplacian(s_ * x);
  }

 private:
  ScalarField f_;
  double s_;
  double factor_;
};

}  // namespace

ScalarField scale_field(const ScalarField& f, double s) {
  if (!(s > 0.0)) throw DomainError("scale_field: s must be positive");
  return ScalarField(std::make_shared<ScaledModel>(f, s));
}

BubbleParams scaled_params(const BubbleParams& params, double s) {
  if (!(s > 0.0)) throw DomainError("scaled_params: s must be positive");
  BubbleParams out = params;
  out.lambda = params.lambda / s;
  out.center = params.center / s;
  return out;
}

}  // namespace halfspace
