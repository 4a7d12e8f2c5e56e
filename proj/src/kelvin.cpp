#include "halfspace/kelvin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace halfspace {

KelvinCenter::KelvinCenter(Point e) : e_(std::move(e)) {
  if (e_.size() < 3) throw DomainError("KelvinCenter: dimension must be at least 3");
  if (e_[e_.size() - 1] != 0.0) throw DomainError("KelvinCenter: e must lie on x_n = 0");
}

KelvinCenter KelvinCenter::origin(Dimension n) { return KelvinCenter(Point::Zero(n)); }

namespace {

double guarded_distance_sq(const Point& x, const Point& e) {
  const double r2 = (x - e).squaredNorm();
  if (r2 < kSingularityGuard * kSingularityGuard) {
    throw SingularityError("Kelvin transform evaluated at its inversion center");
  }
  return r2;
}

class KelvinModel final : public FieldModel {
 public:
  KelvinModel(ScalarField f, Point e)
      : f_(std::move(f)), e_(std::move(e)), n_(f_.dim()),
        chain_rule_(f_.provenance() == Provenance::closed_form) {}

  int dim() const override { return n_; }
  Provenance provenance() const override {
    return chain_rule_ ? Provenance::closed_form : Provenance::transformed;
  }

  double value(const Point& x) const override {
    const double r2 = guarded_distance_sq(x, e_);
    return std::pow(r2, 0.5 * (2 - n_)) * f_.value(e_ + (x - e_) / r2);
  }

  Vector gradient(const Point& x) const override {
    const double r2 = guarded_distance_sq(x, e_);
    if (!chain_rule_) return fd_gradient(value_fn(), x, kDefaultFdStep * r2);
    const Vector w = x - e_;
    const Point y = e_ + w / r2;
    const double u = f_.value(y);
    const Vector gu = f_.gradient(y);
    const double weight = std::pow(r2, 0.5 * (2 - n_));
    // dT_j/dx_i = delta_ij / r^2 - 2 w_i w_j / r^4
    const Vector through_inversion = gu / r2 - (2.0 * w.dot(gu) / (r2 * r2)) * w;
    return weight * ((2 - n_) * u / r2 * w + through_inversion);
  }

  double laplacian(const Point& x) const override {
    const double r2 = guarded_distance_sq(x, e_);
    if (!chain_rule_) return fd_laplacian(value_fn(), x, kDefaultFdStep * r2);
    // Δ[|w|^{2-n} f(T)] = |w|^{-n-2} (Δf)(T)
    return std::pow(r2, -0.5 * (n_ + 2)) * f_.laplacian(e_ + (x - e_) / r2);
  }

 private:
  ScalarField::ValueFn value_fn() const {
    return [this](const Point& p) { return value(p); };
  }

  ScalarField f_;
  Point e_;
  int n_;
  bool chain_rule_;
};

}  // namespace

Point invert_about(const Point& x, const Point& e) {
  const double r2 = guarded_distance_sq(x, e);
  return e + (x - e) / r2;
}

ScalarField kelvin_at(const ScalarField& f, const KelvinCenter& e, Dimension n) {
  if (f.dim() != n || e.point().size() != n) throw DomainError("kelvin_at: dimension mismatch");
  return ScalarField(std::make_shared<KelvinModel>(f, e.point()));
}

ScalarField kelvin_origin(const ScalarField& f, Dimension n) {
  return kelvin_at(f, KelvinCenter::origin(n), n);
}

double boundary_weight_exponent(Dimension n, double p) { return n - p * (n - 2); }

ResidualReport verify_transformed_system(const ScalarField& v, double p, double q,
                                         std::span<const Point> samples) {
  return verify_transformed_system(v, p, q, samples, KelvinCenter::origin(Dimension(v.dim())));
}

ResidualReport verify_transformed_system(const ScalarField& v, double p, double q,
                                         std::span<const Point> samples,
                                         const KelvinCenter& center) {
  const Dimension n(v.dim());
  const double weight_exp = boundary_weight_exponent(n, p);
  ResidualReport report;
  report.interior_exponent_used = q;
  report.sample_count = samples.size();
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = -std::numeric_limits<double>::infinity();
  for (const Point& x : samples) {
    require_admissible(x, n, "verify_transformed_system");
    const double r2 = guarded_distance_sq(x, center.point());
    const double u = v.value(x);
    if (!(u > 0.0)) throw DomainError("verify_transformed_system: field is not positive");

    const double source = std::pow(u, q);
    const double minus_lap = -v.laplacian(x);
    report.max_interior_residual =
        std::max(report.max_interior_residual, std::abs(minus_lap - source));
    ratio_min = std::min(ratio_min, minus_lap / source);
    ratio_max = std::max(ratio_max, minus_lap / source);

    if (x[n - 1] == 0.0) {
      // Exactly 1 when the exponent vanishes, so the check coincides with verify_boundary.
      const double weight = weight_exp == 0.0 ? 1.0 : std::pow(r2, -0.5 * weight_exp);
      const double normal = v.gradient(x)[n - 1];
      report.max_boundary_residual =
          std::max(report.max_boundary_residual, std::abs(normal + weight * std::pow(u, p)));
    }
  }
  if (!samples.empty()) report.proportionality_defect = ratio_max - ratio_min;
  return report;
}

}  // namespace halfspace
