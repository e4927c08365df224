#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pgl/field.hpp"
#include "pgl/random.hpp"

namespace pgl::test {

inline constexpr double kPi = std::numbers::pi;

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// max |a - b| / max |b| over all values.
inline double field_rel_err(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    num = std::max(num, std::abs(va[i] - vb[i]));
    den = std::max(den, std::abs(vb[i]));
  }
  return den == 0.0 ? num : num / den;
}

inline Field random_field(const Torus& t, int comps, std::uint64_t seed, double band = 5.0, double slope = 1.0) {
  CounterRng rng(seed);
  return random_band_limited(t, comps, rng, band, slope);
}

}  // namespace pgl::test
