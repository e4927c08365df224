#include "pgl/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "pgl/errors.hpp"

namespace pgl {

namespace {

// i * xi_a for the first derivative along axis a, zero on that axis' Nyquist index.
std::complex<double> derivative_symbol(const Torus& torus, const std::array<int, 3>& k, int axis) {
  const int ka = k[static_cast<std::size_t>(axis)];
  if (std::abs(ka) == torus.n() / 2) return {0.0, 0.0};
  return {0.0, torus.base_frequency() * ka};
}

double squared_frequency(const Torus& torus, const std::array<int, 3>& k) {
  const double w = torus.base_frequency();
  double s = 0.0;
  for (int a = 0; a < torus.dim(); ++a) {
    const double xi = w * k[static_cast<std::size_t>(a)];
    s += xi * xi;
  }
  return s;
}

}  // namespace

Spectrum spectral_gradient(const Spectrum& s) {
  const Torus& torus = s.torus();
  const int d = torus.dim();
  Spectrum out(torus, s.components() * d);
  for (std::size_t m = 0; m < torus.num_modes(); ++m) {
    const auto k = torus.wavevector(m);
    for (int j = 0; j < d; ++j) {
      const auto sym = derivative_symbol(torus, k, j);
      for (int c = 0; c < s.components(); ++c) out.component(c * d + j)[m] = sym * s.component(c)[m];
    }
  }
  return out;
}

Spectrum spectral_divergence(const Spectrum& s) {
  const Torus& torus = s.torus();
  const int d = torus.dim();
  if (s.components() != d) throw InvalidArgument("divergence needs a vector field with dim components");
  Spectrum out(torus, 1);
  auto dst = out.component(0);
  for (std::size_t m = 0; m < torus.num_modes(); ++m) {
    const auto k = torus.wavevector(m);
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < d; ++j) acc += derivative_symbol(torus, k, j) * s.component(j)[m];
    dst[m] = acc;
  }
  return out;
}

Spectrum spectral_laplacian(const Spectrum& s) {
  const Torus& torus = s.torus();
  Spectrum out(torus, s.components());
  for (std::size_t m = 0; m < torus.num_modes(); ++m) {
    const double xi2 = squared_frequency(torus, torus.wavevector(m));
    for (int c = 0; c < s.components(); ++c) out.component(c)[m] = -xi2 * s.component(c)[m];
  }
  return out;
}

void apply_heat_factor(Spectrum& s, double coefficient) {
  const Torus& torus = s.torus();
  for (std::size_t m = 0; m < torus.num_modes(); ++m) {
    const double f = std::exp(-coefficient * squared_frequency(torus, torus.wavevector(m)));
    for (int c = 0; c < s.components(); ++c) s.component(c)[m] *= f;
  }
}

bool in_dealias_band(const Torus& torus, const std::array<int, 3>& k) {
  // Keep |k_a| <= N/3 (integer division), the classical 2/3 truncation.
  const int kmax = torus.n() / 3;
  for (int a = 0; a < torus.dim(); ++a)
    if (std::abs(k[static_cast<std::size_t>(a)]) > kmax) return false;
  return true;
}

void dealias(Spectrum& s) {
  const Torus& torus = s.torus();
  for (std::size_t m = 0; m < torus.num_modes(); ++m) {
    if (in_dealias_band(torus, torus.wavevector(m))) continue;
    for (int c = 0; c < s.components(); ++c) s.component(c)[m] = 0.0;
  }
}

Field gradient(const Field& f) {
  f.require_finite("gradient");
  return inverse(spectral_gradient(forward(f)));
}

Field divergence(const Field& u) {
  u.require_finite("divergence");
  if (u.components() != u.torus().dim()) throw InvalidArgument("divergence needs a vector field with dim components");
  return inverse(spectral_divergence(forward(u)));
}

Field laplacian(const Field& f) {
  f.require_finite("laplacian");
  return inverse(spectral_laplacian(forward(f)));
}

double lp_norm(std::span<const double> magnitudes, double cell_volume, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm requires p >= 1 or p = infinity");
  double peak = 0.0;
  for (double v : magnitudes) peak = std::max(peak, std::abs(v));
  if (std::isinf(p) || peak == 0.0) return peak;
  double acc = 0.0;
  for (double v : magnitudes) acc += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(acc * cell_volume, 1.0 / p);
}

double lp_norm(const Field& f, double p) {
  const auto mag = f.magnitude();
  return lp_norm(mag, f.torus().cell_volume(), p);
}

double inner_product(const Field& a, const Field& b) {
  if (!(a.torus() == b.torus()) || a.components() != b.components())
    throw InvalidArgument("inner_product needs fields of equal shape");
  double acc = 0.0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) acc += va[i] * vb[i];
  return acc * a.torus().cell_volume();
}

}  // namespace pgl
