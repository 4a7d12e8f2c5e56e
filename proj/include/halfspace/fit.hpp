#pragma once

#include <span>
#include <vector>

#include "halfspace/bubble.hpp"

namespace halfspace {

/// Parameters of a * (scale / (scale^2 + |x - center|^2))^k in any dimension m.
struct ProfileFit {
  double scale = 0.0;
  Eigen::VectorXd center;
  double amplitude = 0.0;
  /// RMS of log(data) - log(model) over the samples.
  double rms_log_residual = 0.0;
  int evaluations = 0;
};

/// Raised when the least-squares iteration gives up; carries the best iterate.
class FitFailure : public Error {
 public:
  FitFailure(const std::string& what, ProfileFit best) : Error(what), best_(std::move(best)) {}
  const ProfileFit& best() const { return best_; }

 private:
  ProfileFit best_;
};

/// Log-space Levenberg-Marquardt fit of the radial profile with exponent k.
///
/// The starting point comes from the observation that value^{-1/k} is an
/// isotropic quadratic in x for an exact profile, so a linear least-squares
/// solve recovers all parameters before any nonlinear iteration.
ProfileFit fit_radial_profile(std::span<const Eigen::VectorXd> points,
                              std::span<const double> values, double k, int max_evaluations = 4000);

struct BubbleFit {
  BubbleParams params;
  double fit_residual = 0.0;
};

/// Fits (lambda, y, a) of the n-dimensional bubble to f sampled at the given points.
BubbleFit fit_bubble(const ScalarField& f, Dimension n, std::span<const Point> samples);

}  // namespace halfspace
