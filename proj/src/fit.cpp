#include "halfspace/fit.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/NonLinearOptimization>

namespace halfspace {

namespace {

// theta = (log scale, center[0..m), log amplitude)
struct LogProfileResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::span<const Eigen::VectorXd> points;
  Eigen::VectorXd log_values;
  double k;
  int m;

  int inputs() const { return m + 2; }
  int values() const { return static_cast<int>(points.size()); }

  int operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& fvec) const {
    const double scale = std::exp(theta[0]);
    const auto center = theta.segment(1, m);
    const double log_amp = theta[m + 1];
    for (int i = 0; i < values(); ++i) {
      const double d = scale * scale + (points[i] - center).squaredNorm();
      fvec[i] = log_values[i] - (log_amp + k * theta[0] - k * std::log(d));
    }
    return 0;
  }

  int df(const Eigen::VectorXd& theta, Eigen::MatrixXd& jac) const {
    const double scale = std::exp(theta[0]);
    const auto center = theta.segment(1, m);
    for (int i = 0; i < values(); ++i) {
      const Eigen::VectorXd diff = points[i] - center;
      const double d = scale * scale + diff.squaredNorm();
      jac(i, 0) = -(k - 2.0 * k * scale * scale / d);
      jac.row(i).segment(1, m) = (-2.0 * k / d) * diff.transpose();
      jac(i, m + 1) = -1.0;
    }
    return 0;
  }
};

Eigen::VectorXd linearized_start(std::span<const Eigen::VectorXd> points,
                                 std::span<const double> values, double k, int m) {
  // value^{-1/k} = alpha |x|^2 + beta . x + gamma for an exact profile.
  // Work in coordinates centered on the sample mean for conditioning.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());
  double spread = 0.0;
  for (const auto& p : points) spread = std::max(spread, (p - mean).norm());
  if (spread == 0.0) spread = 1.0;

  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(rows, m + 2);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Eigen::VectorXd z = (points[i] - mean) / spread;
    a(i, 0) = z.squaredNorm();
    a.row(i).segment(1, m) = z.transpose();
    a(i, m + 1) = 1.0;
    b[i] = std::pow(values[i], -1.0 / k);
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);

  // Undo the normalization: x = mean + spread * z.
  double alpha = c[0] / (spread * spread);
  Eigen::VectorXd center = mean;
  double scale_sq = 1.0;
  if (alpha > 0.0) {
    const Eigen::VectorXd zc = -c.segment(1, m) / (2.0 * c[0]);
    center = mean + spread * zc;
    const double gamma_z = c[m + 1] - c[0] * zc.squaredNorm();  // value at the vertex in z
    scale_sq = gamma_z / alpha;
  } else {
    alpha = 1.0;
  }
  if (!(scale_sq > 0.0) || !std::isfinite(scale_sq)) scale_sq = spread * spread;
  const double scale = std::sqrt(scale_sq);
  const double log_amp = -k * std::log(alpha * scale);

  Eigen::VectorXd theta(m + 2);
  theta[0] = std::log(scale);
  theta.segment(1, m) = center;
  theta[m + 1] = std::isfinite(log_amp) ? log_amp : 0.0;
  return theta;
}

ProfileFit unpack(const Eigen::VectorXd& theta, int m) {
  ProfileFit fit;
  fit.scale = std::exp(theta[0]);
  fit.center = theta.segment(1, m);
  fit.amplitude = std::exp(theta[m + 1]);
  return fit;
}

}  // namespace

ProfileFit fit_radial_profile(std::span<const Eigen::VectorXd> points,
                              std::span<const double> values, double k, int max_evaluations) {
  if (points.empty()) throw DomainError("fit_radial_profile: no samples");
  if (points.size() != values.size()) throw DomainError("fit_radial_profile: size mismatch");
  if (!(k > 0.0)) throw DomainError("fit_radial_profile: exponent must be positive");
  const int m = static_cast<int>(points.front().size());
  if (static_cast<int>(points.size()) < m + 2) {
    throw DomainError("fit_radial_profile: need at least m+2 = " + std::to_string(m + 2) +
                      " samples");
  }
  LogProfileResidual functor{points, Eigen::VectorXd(values.size()), k, m};
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("fit_radial_profile: non-positive sample value");
    functor.log_values[static_cast<Eigen::Index>(i)] = std::log(values[i]);
  }

  Eigen::VectorXd theta = linearized_start(points, values, k, m);
  Eigen::LevenbergMarquardt<LogProfileResidual> lm(functor);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.gtol = 0.0;
  lm.parameters.maxfev = max_evaluations;
  const auto status = lm.minimize(theta);

  Eigen::VectorXd residual(functor.values());
  functor(theta, residual);
  ProfileFit fit = unpack(theta, m);
  fit.rms_log_residual = std::sqrt(residual.squaredNorm() / residual.size());
  fit.evaluations = static_cast<int>(lm.nfev);

  using namespace Eigen::LevenbergMarquardtSpace;
  if (status == ImproperInputParameters || status == TooManyFunctionEvaluation ||
      !std::isfinite(fit.rms_log_residual)) {
    throw FitFailure("fit_radial_profile: Levenberg-Marquardt did not converge (status " +
                         std::to_string(static_cast<int>(status)) + ")",
                     fit);
  }
  return fit;
}

BubbleFit fit_bubble(const ScalarField& f, Dimension n, std::span<const Point> samples) {
  if (f.dim() != n) throw DomainError("fit_bubble: field dimension mismatch");
  std::vector<double> values;
  values.reserve(samples.size());
  for (const Point& x : samples) values.push_back(f.value(x));
  const ProfileFit fit = fit_radial_profile(samples, values, n.half_excess());

  BubbleFit out;
  out.params.n = n;
  out.params.lambda = fit.scale;
  out.params.center = fit.center;
  out.params.amplitude = fit.amplitude;
  out.fit_residual = fit.rms_log_residual;
  return out;
}

}  // namespace halfspace
