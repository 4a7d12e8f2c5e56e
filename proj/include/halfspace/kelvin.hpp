#pragma once

#include <span>

#include "halfspace/bubble.hpp"

namespace halfspace {

/// Evaluations closer than this to an inversion center raise SingularityError.
inline constexpr double kSingularityGuard = 1e-8;

/// Boundary point e (e_n = 0) about which a Kelvin transform inverts.
class KelvinCenter {
 public:
  explicit KelvinCenter(Point e);
  static KelvinCenter origin(Dimension n);

  const Point& point() const { return e_; }

 private:
  Point e_;
};

/// e + (x - e) / |x - e|^2.
Point invert_about(const Point& x, const Point& e);

/// v(x) = |x|^{2-n} f(x / |x|^2).
ScalarField kelvin_origin(const ScalarField& f, Dimension n);

/// v(x) = |x - e|^{2-n} f(e + (x - e) / |x - e|^2).
///
/// Derivatives follow the chain rule when f is closed-form; otherwise they are
/// finite differences with a step proportional to |x - e|^2.
ScalarField kelvin_at(const ScalarField& f, const KelvinCenter& e, Dimension n);

/// Residuals of the transformed system
///   -Δv = v^q                                   at every sample,
///   D_{x_n} v = -|x - c|^{-(n - p(n-2))} v^p     at samples with x_n = 0,
/// where c is the inversion center (the origin by default).
ResidualReport verify_transformed_system(const ScalarField& v, double p, double q,
                                         std::span<const Point> samples);
ResidualReport verify_transformed_system(const ScalarField& v, double p, double q,
                                         std::span<const Point> samples,
                                         const KelvinCenter& center);

/// Exponent n - p(n-2) of the boundary weight; zero at p = n/(n-2).
double boundary_weight_exponent(Dimension n, double p);

}  // namespace halfspace
