#include <gtest/gtest.h>

#include "halfspace/sampling.hpp"

namespace halfspace {
namespace {

TEST(Halton, RadicalInverseBaseTwo) {
  EXPECT_DOUBLE_EQ(radical_inverse(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(radical_inverse(2, 2), 0.25);
  EXPECT_DOUBLE_EQ(radical_inverse(3, 2), 0.75);
  EXPECT_DOUBLE_EQ(radical_inverse(1, 3), 1.0 / 3.0);
}

TEST(Halton, SeedReproducesAndSeparates) {
  const auto a = half_space_samples(4, 50, 10.0, 3);
  const auto b = half_space_samples(4, 50, 10.0, 3);
  const auto c = half_space_samples(4, 50, 10.0, 4);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_NE(a[0], c[0]);
}

TEST(Halton, SamplesStayInBox) {
  for (const auto& x : half_space_samples(3, 500, 10.0)) {
    EXPECT_GE(x[2], 0.0);
    EXPECT_LE(x.cwiseAbs().maxCoeff(), 10.0);
  }
  for (const auto& x : boundary_samples(5, 100, 2.0)) {
    EXPECT_EQ(x.size(), 5);
    EXPECT_EQ(x[4], 0.0);
  }
}

}  // namespace
}  // namespace halfspace
