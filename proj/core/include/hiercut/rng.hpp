#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hiercut {

/// SplitMix64 generator. The exact recurrence is part of the reproducibility
/// contract: seeds written into file headers must regenerate the same draws on
/// any platform, which rules out the std:: distributions.
class Rng64 {
 public:
  explicit constexpr Rng64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1): the top 53 bits scaled by 2^-53, so the result is
  /// exactly representable and never rounds up to 1.
  constexpr double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive.
  constexpr std::uint64_t next_below(std::uint64_t bound) noexcept {
    return next_u64() % bound;
  }

  /// Standard normal draw (Box-Muller, one value per call).
  double next_gaussian() noexcept {
    double u1 = next_unit();
    const double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Independent stream seed for parallel or per-purpose generators.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return base ^ stream;
}

}  // namespace hiercut
