#include <cmath>

#include <gtest/gtest.h>

#include "halfspace/fit.hpp"
#include "halfspace/kelvin.hpp"
#include "halfspace/sampling.hpp"

namespace halfspace {
namespace {

TEST(FitBubble, RecoversItself) {
  const Dimension n(4);
  const auto b = make_bubble(n, 1.5, point({0.3, 0.0, 0.0}));
  const auto fit = fit_bubble(b.field, n, half_space_samples(4, 60, 3.0, 1));
  EXPECT_NEAR(fit.params.lambda, 1.5, 1e-8);
  EXPECT_NEAR((fit.params.center - b.params.center).norm(), 0.0, 1e-8);
  EXPECT_NEAR(fit.params.amplitude, std::sqrt(8.0), 1e-8);
  EXPECT_LT(fit.fit_residual, 1e-10);
}

TEST(FitBubble, PerturbationStudy) {
  const Dimension n(3);
  const auto b = make_bubble(n, 1.0, point({0.5, -0.2}));
  const double eps = 1e-3;
  const auto perturbed = ScalarField::from_values(
      n, [&](const Point& x) { return b.field.value(x) * (1.0 + eps * std::sin(3.0 * x[0] + 2.0 * x[1] - x[2])); },
      Provenance::sampled_grid);
  const auto fit = fit_bubble(perturbed, n, half_space_samples(3, 200, 4.0, 2));
  EXPECT_GT(fit.fit_residual, 1e-4);
  EXPECT_LT(fit.fit_residual, 1e-2);
  EXPECT_NEAR(fit.params.lambda, 1.0, 5e-3);
  EXPECT_NEAR(fit.params.amplitude, b.params.amplitude, 5e-3 * b.params.amplitude);
  EXPECT_NEAR((fit.params.center - b.params.center).norm(), 0.0, 5e-3);
}

TEST(FitBubble, KelvinFamilyClosure) {
  for (int n : {3, 4}) {
    const Dimension d(n);
    HaltonSequence params(n + 1, 11);
    HaltonSequence centers(n - 1, 12);
    for (int i = 0; i < 10; ++i) {
      const Eigen::VectorXd r = params.next();
      const Vector yp = (4.0 * r.head(n - 1).array() - 2.0).matrix();
      const auto b = make_bubble(d, 0.5 + 1.5 * r[n], yp);
      for (int j = 0; j < 5; ++j) {
        Point e = Point::Zero(n);
        e.head(n - 1) = (4.0 * centers.next().array() - 2.0).matrix();
        const auto v = kelvin_at(b.field, KelvinCenter(e), d);
        std::vector<Point> samples;
        for (const auto& x : half_space_samples(n, 80, 3.0, 100 + j))
          if ((x - e).norm() > 0.2) samples.push_back(x + e);
        const auto fit = fit_bubble(v, d, samples);
        EXPECT_LT(fit.fit_residual, 1e-8);
        EXPECT_NEAR(fit.params.amplitude, b.params.amplitude, 1e-6 * b.params.amplitude);
      }
    }
  }
}

TEST(FitRadialProfile, TooFewPointsFails) {
  std::vector<Eigen::VectorXd> pts = {point({0, 0}), point({1, 0})};
  std::vector<double> vals = {1.0, 0.5};
  EXPECT_THROW(fit_radial_profile(pts, vals, 0.5), Error);
}

TEST(FitRadialProfile, EvaluationBudgetCarriesBestIterate) {
  const auto b = make_bubble(Dimension(3), 1.0);
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> vals;
  for (const auto& x : half_space_samples(3, 50, 3.0, 3)) {
    pts.push_back(x);
    vals.push_back(b.field.value(x) * (1.0 + 0.2 * std::sin(5.0 * x[0])));
  }
  try {
    fit_radial_profile(pts, vals, 0.5, 3);
    FAIL() << "expected FitFailure";
  } catch (const FitFailure& f) {
    EXPECT_GT(f.best().scale, 0.0);
    EXPECT_TRUE(std::isfinite(f.best().rms_log_residual));
  }
}

}  // namespace
}  // namespace halfspace
