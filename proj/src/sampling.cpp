#include "halfspace/sampling.hpp"

#include <array>

namespace halfspace {

namespace {

constexpr std::array<unsigned, 16> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19,
                                              23, 29, 31, 37, 41, 43, 47, 53};
// Stride between seeds; large and prime so distinct seeds give disjoint index ranges
// for any realistic sample count.
constexpr std::uint64_t kSeedStride = 1'000'003;

}  // namespace

double radical_inverse(std::uint64_t index, unsigned base) {
  const double inv_base = 1.0 / base;
  double scale = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed)
    : dim_(dim), start_(1 + seed * kSeedStride) {
  if (dim < 1 || dim > static_cast<int>(kPrimes.size())) {
    throw DomainError("HaltonSequence: dimension out of supported range");
  }
}

Eigen::VectorXd HaltonSequence::at(std::uint64_t i) const {
  Eigen::VectorXd u(dim_);
  for (int d = 0; d < dim_; ++d) u[d] = radical_inverse(start_ + i, kPrimes[d]);
  return u;
}

std::vector<Point> halton_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                              std::size_t count, std::uint64_t seed) {
  if (lo.size() != hi.size()) throw DomainError("halton_box: bound size mismatch");
  HaltonSequence seq(static_cast<int>(lo.size()), seed);
  std::vector<Point> out;
  out.reserve(count);
  const Eigen::VectorXd span = hi - lo;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(lo + span.cwiseProduct(seq.at(i)));
  }
  return out;
}

std::vector<Point> half_space_samples(int n, std::size_t count, double extent,
                                      std::uint64_t seed) {
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -extent);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, extent);
  lo[n - 1] = 0.0;
  return halton_box(lo, hi, count, seed);
}

std::vector<Point> boundary_samples(int n, std::size_t count, double extent,
                                    std::uint64_t seed) {
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(n - 1, -extent);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n - 1, extent);
  std::vector<Point> out;
  out.reserve(count);
  for (const auto& p : halton_box(lo, hi, count, seed)) {
    Point x = Point::Zero(n);
    x.head(n - 1) = p;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace halfspace
