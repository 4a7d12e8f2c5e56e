#pragma once

// Test-only reference computations. Nothing here calls into the closed forms
// of the library; each value is obtained by brute force (finite differences,
// bisection, direct evaluation of the defining formula).

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace oracle {

/// a * (lambda / (lambda^2 + |x - y|^2))^{(n-2)/2}, written out directly.
inline double profile(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double lambda, double a) {
  const double k = 0.5 * (x.size() - 2);
  return a * std::pow(lambda / (lambda * lambda + (x - y).squaredNorm()), k);
}

/// Root of f on [lo, hi] by plain bisection (f(lo), f(hi) of opposite sign).
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Radial Laplacian phi'' + (n-1)/rho phi' of a radial function by 4th-order central differences.
inline double radial_laplacian(const std::function<double(double)>& phi, double rho, int n,
                               double h = 1e-3) {
  const double f0 = phi(rho), f1 = phi(rho + h), fm1 = phi(rho - h), f2 = phi(rho + 2 * h),
               fm2 = phi(rho - 2 * h);
  const double d2 = (-f2 + 16 * f1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
  const double d1 = (-f2 + 8 * f1 - 8 * fm1 + fm2) / (12 * h);
  return d2 + (n - 1) / rho * d1;
}

/// Amplitude a making a * phi solve -Δu = u^q at radius rho, phi = (1/(1+rho^2))^{(n-2)/2}:
/// a^{q-1} = -Δphi / phi^q.
inline double amplitude_at_radius(int n, double rho) {
  const double k = 0.5 * (n - 2);
  const double q = double(n + 2) / (n - 2);
  auto phi = [k](double r) { return std::pow(1.0 / (1.0 + r * r), k); };
  const double ratio = -radial_laplacian(phi, rho, n) / std::pow(phi(rho), q);
  return std::pow(ratio, 1.0 / (q - 1.0));
}

/// Center depth y_n such that D_{x_n} u + u^p = 0 at x = 0, with the normal derivative
/// taken by central differences on the directly written profile.
inline double center_depth(int n, double lambda, double a) {
  const double p = double(n) / (n - 2);
  auto mismatch = [&](double yn) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    y[n - 1] = yn;
    Eigen::VectorXd xp = Eigen::VectorXd::Zero(n), xm = Eigen::VectorXd::Zero(n);
    const double h = 1e-5;
    xp[n - 1] = h;
    xm[n - 1] = -h;
    const double dn = (profile(xp, y, lambda, a) - profile(xm, y, lambda, a)) / (2 * h);
    return dn + std::pow(profile(Eigen::VectorXd::Zero(n), y, lambda, a), p);
  };
  return bisect(mismatch, -50.0 * lambda, -1e-3 * lambda);
}

}  // namespace oracle
