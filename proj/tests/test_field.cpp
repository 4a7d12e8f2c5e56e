#include <cmath>

#include <gtest/gtest.h>

#include "halfspace/bubble.hpp"
#include "halfspace/field.hpp"
#include "halfspace/sampling.hpp"

namespace halfspace {
namespace {

ScalarField linear_x1(int n) {
  return ScalarField::from_values(Dimension(n), [](const Point& x) { return x[0]; },
                                  Provenance::closed_form);
}

TEST(Dimension, RejectsBelowThree) {
  EXPECT_THROW(Dimension(2), DomainError);
  EXPECT_NO_THROW(Dimension(3));
  Dimension n(4);
  EXPECT_DOUBLE_EQ(n.critical_interior_exponent(), 3.0);
  EXPECT_DOUBLE_EQ(n.critical_boundary_exponent(), 2.0);
  EXPECT_DOUBLE_EQ(n.printed_interior_exponent(), 4.0);
}

TEST(FdGradient, LinearFunction) {
  const auto f = linear_x1(3);
  for (const Point& x : {point({0.3, -2.0, 5.0}), point({1.0, 1.0, 0.0})}) {
    const Vector g = fd_gradient(f, x, 1e-4);
    EXPECT_NEAR(g[0], 1.0, 1e-8);
    EXPECT_NEAR(g[1], 0.0, 1e-8);
    EXPECT_NEAR(g[2], 0.0, 1e-8);
  }
}

TEST(FdGradient, ConstantIsZero) {
  const auto f = ScalarField::from_values(Dimension(4), [](const Point&) { return 2.5; },
                                          Provenance::closed_form);
  const Vector g = fd_gradient(f, point({0.1, 0.2, 0.3, 0.0}), 1e-4);
  EXPECT_EQ(g.norm(), 0.0);
}

TEST(FdGradient, RejectsPointBelowBoundary) {
  EXPECT_THROW(fd_gradient(linear_x1(3), point({0, 0, -0.1})), DomainError);
  EXPECT_THROW(fd_laplacian(linear_x1(3), point({0, 0, -0.1})), DomainError);
  EXPECT_THROW(fd_gradient(linear_x1(3), point({0, 0, 1}), 0.0), DomainError);
}

TEST(FdGradient, SecondOrderOnBubbleAtBoundary) {
  const auto b = make_bubble(Dimension(3), 1.0);
  const Point x = point({0.0, 0.0, 0.0});  // one-sided in x_n
  const Vector exact = b.field.gradient(x);
  double prev = 0.0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const double err = (fd_gradient(b.field, x, h) - exact).norm();
    if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.4);
    prev = err;
  }
}

TEST(FdLaplacian, Quadratic) {
  const int n = 4;
  const auto f = ScalarField::from_values(Dimension(n), [](const Point& x) { return x.squaredNorm(); },
                                          Provenance::closed_form);
  EXPECT_NEAR(fd_laplacian(f, Point::Ones(n), 1e-3), 2.0 * n, 1e-6);
  // one-sided stencil is exact on quadratics too
  EXPECT_NEAR(fd_laplacian(f, point({1, 1, 1, 0}), 1e-3), 2.0 * n, 1e-6);
}

TEST(FdLaplacian, HarmonicMonomial) {
  const auto f = ScalarField::from_values(Dimension(3), [](const Point& x) { return x[0] * x[1]; },
                                          Provenance::closed_form);
  EXPECT_NEAR(fd_laplacian(f, point({0.7, -1.3, 0.4}), 1e-3), 0.0, 1e-6);
}

TEST(FdLaplacian, MatchesBubbleClosedForm) {
  const auto b = make_bubble(Dimension(4), 1.0);
  const Point x = point({0.3, 0.0, 0.0, 0.5});
  const double exact = b.field.laplacian(x);
  double prev = 0.0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const double err = std::abs(fd_laplacian(b.field, x, h) - exact);
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 2.0, 0.2);
    prev = err;
  }
}

// Observed order over h in {1e-2, 5e-3, 2.5e-3}: slope of log error against log h.
double observed_slope(const std::function<double(double)>& error_at) {
  const double hs[3] = {1e-2, 5e-3, 2.5e-3};
  double lx[3], ly[3], mx = 0, my = 0;
  for (int i = 0; i < 3; ++i) {
    lx[i] = std::log(hs[i]);
    ly[i] = std::log(error_at(hs[i]));
    mx += lx[i] / 3;
    my += ly[i] / 3;
  }
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

TEST(FdOperators, ObservedOrderTwoOnRandomPoints) {
  for (int n : {3, 5}) {
    const auto b = make_bubble(Dimension(n), 1.0);
    // Central stencils throughout (x_n >= h for every h), and one-sided throughout (x_n = 0).
    // A point with 0 < x_n < 1e-2 would switch stencils part way through the refinement.
    std::vector<Point> pts;
    for (auto x : half_space_samples(n, 100, 3.0, 11)) {
      x[n - 1] += 1e-2;
      pts.push_back(x);
    }
    for (const auto& x : boundary_samples(n, 100, 3.0, 11)) pts.push_back(x);
    auto lap_err = [&](double h) {
      double m = 0.0;
      for (const auto& x : pts) m = std::max(m, std::abs(fd_laplacian(b.field, x, h) - b.field.laplacian(x)));
      return m;
    };
    auto grad_err = [&](double h) {
      double m = 0.0;
      for (const auto& x : pts) m = std::max(m, (fd_gradient(b.field, x, h) - b.field.gradient(x)).norm());
      return m;
    };
    EXPECT_NEAR(observed_slope(lap_err), 2.0, 0.2) << "n=" << n;
    EXPECT_NEAR(observed_slope(grad_err), 2.0, 0.2) << "n=" << n;
    EXPECT_LT(lap_err(2.5e-3), lap_err(1e-2));
  }
}

TEST(ScalarField, FromValuesUsesFiniteDifferences) {
  const auto b = make_bubble(Dimension(3), 1.0);
  const auto sampled = ScalarField::from_values(Dimension(3), [&](const Point& x) { return b.field.value(x); },
                                                Provenance::sampled_grid, 1e-3);
  const Point x = point({0.2, 0.1, 0.4});
  EXPECT_EQ(sampled.provenance(), Provenance::sampled_grid);
  EXPECT_NEAR(sampled.laplacian(x), b.field.laplacian(x), 1e-4);
  EXPECT_NEAR((sampled.gradient(x) - b.field.gradient(x)).norm(), 0.0, 1e-5);
}

}  // namespace
}  // namespace halfspace
