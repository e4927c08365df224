#pragma once

#include <cstdint>

#include "pgl/field.hpp"

namespace pgl {

inline constexpr const char* kRngAlgorithm = "splitmix64-counter";

/// SplitMix64 read as a counter-based generator: draw i is mix(seed + (i+1)*gamma).
/// Normals come from Box-Muller on consecutive uniform pairs.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  static std::uint64_t mix(std::uint64_t z);

  std::uint64_t next_u64();
  /// Uniform in (0, 1].
  double uniform();
  double normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Real band-limited random field: Gaussian Fourier coefficients with
/// amplitude |k|^(-slope) on 0 < |k| <= band, zero mean, no Nyquist content,
/// restricted to the 2/3 dealiasing band.
Field random_band_limited(const Torus& torus, int components, CounterRng& rng, double band, double slope);

}  // namespace pgl
