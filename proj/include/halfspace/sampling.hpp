#pragma once

#include <cstdint>
#include <vector>

#include "halfspace/field.hpp"

namespace halfspace {

/// Van der Corput radical inverse of index in the given prime base.
double radical_inverse(std::uint64_t index, unsigned base);

/// Deterministic Halton points in [0,1)^dim. The seed selects the starting
/// index, so a (seed, count) pair reproduces the same point set everywhere.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed = 0);

  Eigen::VectorXd at(std::uint64_t i) const;
  Eigen::VectorXd next() { return at(cursor_++); }

 private:
  int dim_;
  std::uint64_t start_;
  std::uint64_t cursor_ = 0;
};

/// count Halton points mapped affinely onto the box [lo, hi].
std::vector<Point> halton_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                              std::size_t count, std::uint64_t seed = 0);

/// Points in [-extent, extent]^{n-1} x [0, extent].
std::vector<Point> half_space_samples(int n, std::size_t count, double extent,
                                      std::uint64_t seed = 0);

/// Points in [-extent, extent]^{n-1} x {0}.
std::vector<Point> boundary_samples(int n, std::size_t count, double extent,
                                    std::uint64_t seed = 0);

}  // namespace halfspace
