#include "pgl/random.hpp"

#include <cmath>
#include <numbers>

#include "pgl/errors.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() {
  // 53 random bits mapped to (0, 1].
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double CounterRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Field random_band_limited(const Torus& torus, int components, CounterRng& rng, double band, double slope) {
  if (!(band >= 1.0)) throw InvalidArgument("random field band must be >= 1");
  Spectrum s(torus, components);
  const double scale = static_cast<double>(torus.num_points());
  for (int c = 0; c < components; ++c) {
    auto coeffs = s.component(c);
    for (std::size_t m = 0; m < torus.num_modes(); ++m) {
      const auto k = torus.wavevector(m);
      double k2 = 0.0;
      for (int a = 0; a < torus.dim(); ++a) k2 += static_cast<double>(k[static_cast<std::size_t>(a)]) * k[static_cast<std::size_t>(a)];
      const double kn = std::sqrt(k2);
      // Draw for every mode so the stream position does not depend on the band.
      const double re = rng.normal();
      const double im = rng.normal();
      if (kn == 0.0 || kn > band || torus.is_nyquist(m) || !in_dealias_band(torus, k)) continue;
      coeffs[m] = std::complex<double>(re, im) * (scale * std::pow(kn, -slope));
    }
  }
  // c2r reads only the Hermitian half, so the result is a real field whose
  // spectrum is the Hermitian part of the draw.
  return inverse(s);
}

}  // namespace pgl
