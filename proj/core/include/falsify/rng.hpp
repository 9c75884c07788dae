#pragma once

#include <array>
#include <cstdint>

namespace falsify {

/// xoshiro256** seeded through splitmix64.
///
/// Every derived draw (uniform, normal) is computed here rather than through
/// <random> distributions, whose algorithms are implementation-defined, so a
/// given seed yields the same stream on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lower, upper]; returns `lower` for a degenerate interval.
  double uniform(double lower, double upper);
  /// Standard normal via the Box-Muller transform; consumes two uniforms.
  double normal();

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace falsify
