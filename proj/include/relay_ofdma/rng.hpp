#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>

namespace relay_ofdma {

/// SplitMix64 generator (Steele, Lea & Flood).
///
/// Every random draw in the library goes through this type so a given seed
/// produces the same numbers on every platform and in every language port.
///
/// Stream contract:
///  - `next_u64()` advances the state by the golden-ratio increment and
///    returns the mixed value.
///  - `uniform()` takes the top 53 bits of one `next_u64()` and maps them to
///    [0, 1).
///  - `split()` consumes one `next_u64()` from the parent and seeds a child
///    stream with it. Children are handed out in a documented order by the
///    callers (see `build_gain_table`).
///  - `gaussian_pair()` uses Box-Muller on two consecutive uniforms.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  /// Uniform integer in [0, n). Plain modulo; the bias is < n / 2^64.
  std::uint64_t below(std::uint64_t n) noexcept { return next_u64() % n; }

  /// Two independent standard normals.
  std::pair<double, double> gaussian_pair() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

  /// Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_gaussian(double variance) noexcept {
    const auto [re, im] = gaussian_pair();
    const double s = std::sqrt(variance / 2.0);
    return {s * re, s * im};
  }

  SplitMix64 split() noexcept { return SplitMix64(next_u64()); }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace relay_ofdma
