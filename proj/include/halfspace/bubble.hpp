#pragma once

#include <span>

#include "halfspace/field.hpp"

namespace halfspace {

/// Parameters of u(x) = a * (lambda / (lambda^2 + |x - y|^2))^((n-2)/2).
///
/// `lambda` is the bubble scale; the moving-plane position is a separate type
/// (PlaneParams) even though both are conventionally written with the same letter.
struct BubbleParams {
  int n = 3;
  double lambda = 1.0;
  Point center;  // y, with y_n < 0
  double amplitude = 1.0;

  /// (n-2) * (-y_n) == a^{2/(n-2)} * lambda, to relative tolerance rel_tol.
  bool boundary_compatible(double rel_tol = 1e-12) const;
  /// Decay constant lim |x|^{n-2} u(x) = a * lambda^{(n-2)/2}.
  double decay_constant() const;
};

/// Amplitude for which the profile solves -Δu = u^{(n+2)/(n-2)}: (n(n-2))^{(n-2)/4}.
double derive_amplitude(Dimension n);

/// Depth y_n making D_{x_n} u = -u^{n/(n-2)} hold on x_n = 0: -lambda * sqrt(n/(n-2)).
double derive_center_depth(Dimension n, double lambda);

/// Closed-form field for arbitrary parameters (lambda > 0, a > 0, y_n < 0).
ScalarField bubble_field(const BubbleParams& params);

struct Bubble {
  ScalarField field;
  BubbleParams params;
};

/// Boundary-compatible bubble with tangential center y_prime (n-1 entries).
Bubble make_bubble(Dimension n, double lambda, const Vector& y_prime);
Bubble make_bubble(Dimension n, double lambda);

struct ResidualReport {
  double interior_exponent_used = 0.0;
  double max_interior_residual = 0.0;
  double max_boundary_residual = 0.0;
  std::size_t sample_count = 0;
  /// max - min of -Δf / f^q over the samples; zero iff -Δf is proportional to f^q there.
  double proportionality_defect = 0.0;
};

/// sup |-Δf - f^q| over admissible samples.
ResidualReport verify_interior(const ScalarField& f, double q, std::span<const Point> samples);

/// sup |D_{x_n} f + f^p| over samples on x_n = 0.
ResidualReport verify_boundary(const ScalarField& f, double p, std::span<const Point> samples);

/// u_s(x) = s^{(n-2)/2} u(s x).
ScalarField scale_field(const ScalarField& f, double s);

/// Parameters of the bubble obtained by scale_field(bubble_field(params), s).
BubbleParams scaled_params(const BubbleParams& params, double s);

}  // namespace halfspace
