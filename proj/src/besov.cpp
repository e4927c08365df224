#include "pgl/besov.hpp"

#include <cmath>
#include <numbers>

#include "pgl/errors.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

double partition_weight(double xi, int j, PartitionProfile profile) {
  if (!(xi > 0.0)) return 0.0;
  const double x = std::log2(xi) - j;
  if (!(std::abs(x) < 1.0)) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * x);
  return profile == PartitionProfile::raised_cosine ? c * c : c;
}

std::pair<int, int> dyadic_range(const Torus& torus) {
  const double lo = torus.base_frequency();
  const double hi = std::sqrt(static_cast<double>(torus.dim())) * lo * (torus.n() / 2);
  return {static_cast<int>(std::floor(std::log2(lo))), static_cast<int>(std::ceil(std::log2(hi)))};
}

Field DyadicDecomposition::reconstruct() const {
  Field sum = blocks.front();
  for (std::size_t i = 1; i < blocks.size(); ++i) sum += blocks[i];
  return sum;
}

DyadicDecomposition decompose(const Field& f, PartitionProfile profile) {
  f.require_finite("decompose");
  const Torus& torus = f.torus();
  const Spectrum fs = forward(f);
  DyadicDecomposition d;
  d.profile = profile;
  d.zero_mode = f.mean();
  std::tie(d.j_min, d.j_max) = dyadic_range(torus);

  std::vector<double> xi(torus.num_modes());
  for (std::size_t m = 0; m < torus.num_modes(); ++m) {
    const auto k = torus.wavevector(m);
    double k2 = 0.0;
    for (int a = 0; a < torus.dim(); ++a) k2 += static_cast<double>(k[static_cast<std::size_t>(a)]) * k[static_cast<std::size_t>(a)];
    xi[m] = torus.base_frequency() * std::sqrt(k2);
  }
  for (int j = d.j_min; j <= d.j_max; ++j) {
    Spectrum bs(torus, f.components());
    for (int c = 0; c < f.components(); ++c) {
      auto src = fs.component(c);
      auto dst = bs.component(c);
      for (std::size_t m = 0; m < torus.num_modes(); ++m) {
        const double w = partition_weight(xi[m], j, profile);
        if (w != 0.0) dst[m] = w * src[m];
      }
    }
    d.blocks.push_back(inverse(bs));
  }
  return d;
}

double besov_norm(const DyadicDecomposition& d, double s, double p, double r) {
  if (!(s > -2.0 && s < 2.0)) throw InvalidArgument("Besov regularity s must lie in (-2, 2), got " + std::to_string(s));
  if (!(p >= 1.0) || !(r >= 1.0)) throw InvalidArgument("Besov exponents need p >= 1 and r >= 1");
  std::vector<double> terms;
  double peak = 0.0;
  for (int j = d.j_min; j <= d.j_max; ++j) {
    const double t = std::exp2(j * s) * lp_norm(d.block(j), p);
    terms.push_back(t);
    peak = std::max(peak, t);
  }
  if (std::isinf(r) || peak == 0.0) return peak;
  double acc = 0.0;
  for (double t : terms) acc += std::pow(t / peak, r);
  return peak * std::pow(acc, 1.0 / r);
}

double besov_norm(const Field& f, double s, double p, double r, PartitionProfile profile) {
  if (!(s > -2.0 && s < 2.0)) throw InvalidArgument("Besov regularity s must lie in (-2, 2), got " + std::to_string(s));
  return besov_norm(decompose(f, profile), s, p, r);
}

double gagliardo_nirenberg_2d(const Field& z) {
  if (z.torus().dim() != 2 || z.components() != 1) throw InvalidArgument("gagliardo_nirenberg_2d needs a 2D scalar");
  Field zc = z;
  const double mean = z.mean()[0];
  for (double& v : zc.values()) v -= mean;
  const Field g = gradient(zc);
  const double g4 = lp_norm(g, 4.0);
  const double g43 = lp_norm(g, 4.0 / 3.0);
  if (g4 == 0.0 || g43 == 0.0) throw InvalidArgument("gagliardo_nirenberg_2d: degenerate input (zero gradient)");
  return lp_norm(zc, kInfinity) / (std::sqrt(g4) * std::sqrt(g43));
}

double gagliardo_nirenberg_3d(const Field& u) {
  if (u.torus().dim() != 3) throw InvalidArgument("gagliardo_nirenberg_3d needs a 3D field");
  const Spectrum gs = spectral_gradient(forward(u));
  const Field g = inverse(gs);
  const Field h = inverse(spectral_gradient(gs));
  const double h103 = lp_norm(h, 10.0 / 3.0);
  const double h52 = lp_norm(h, 2.5);
  if (h103 == 0.0 || h52 == 0.0) throw InvalidArgument("gagliardo_nirenberg_3d: degenerate input (zero Hessian)");
  return lp_norm(g, kInfinity) / (std::pow(h103, 2.0 / 3.0) * std::pow(h52, 1.0 / 3.0));
}

}  // namespace pgl
