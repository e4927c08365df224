#include "pgl/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pgl/errors.hpp"

namespace pgl {

namespace {

std::string describe(const LorentzExponents& e) {
  return "(p,r)=(" + std::to_string(e.p) + "," + std::to_string(e.r) + ")";
}

double reciprocal(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

}  // namespace

bool is_admissible(const LorentzExponents& e) {
  if (std::isnan(e.p) || std::isnan(e.r)) return false;
  if (e.p == 1.0) return e.r == 1.0;
  if (std::isinf(e.p)) return std::isinf(e.r) && e.r > 0;
  return e.p > 1.0 && e.r >= 1.0;
}

void require_admissible(const LorentzExponents& e) {
  if (!is_admissible(e)) throw InvalidArgument("inadmissible Lorentz exponents " + describe(e));
}

double DistributionFunction::measure_above(double s) const {
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), s);
  if (it == thresholds.end()) return 0.0;
  return measures[static_cast<std::size_t>(it - thresholds.begin())];
}

DistributionFunction distribution(std::span<const double> values, std::span<const double> weights) {
  if (values.empty()) throw InvalidArgument("distribution of an empty input");
  if (values.size() != weights.size()) throw InvalidArgument("distribution needs one weight per value");
  std::vector<std::pair<double, double>> vw;
  vw.reserve(values.size());
  DistributionFunction d;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw InvalidArgument("distribution of a non-finite value");
    d.total_measure += weights[i];
    const double a = std::abs(values[i]);
    if (a > 0.0 && weights[i] > 0.0) vw.emplace_back(a, weights[i]);
  }
  std::sort(vw.begin(), vw.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  // Walk from the largest value down, accumulating |{|f| >= a}|.
  double acc = 0.0;
  for (std::size_t i = 0; i < vw.size();) {
    const double a = vw[i].first;
    while (i < vw.size() && vw[i].first == a) acc += vw[i++].second;
    d.thresholds.push_back(a);
    d.measures.push_back(acc);
  }
  std::reverse(d.thresholds.begin(), d.thresholds.end());
  std::reverse(d.measures.begin(), d.measures.end());
  return d;
}

DistributionFunction distribution(const Field& f) {
  const auto mag = f.magnitude();
  const std::vector<double> w(mag.size(), f.torus().cell_volume());
  return distribution(mag, w);
}

DistributionFunction distribution(const TimeSeries& s) {
  if (s.empty()) throw InvalidArgument("distribution of an empty time series");
  return distribution(s, s.start(), s.end());
}

DistributionFunction distribution(const TimeSeries& s, double a, double b) {
  if (s.empty()) throw InvalidArgument("distribution of an empty time series");
  const auto w = s.cell_weights(a, b);
  return distribution(s.samples(), w);
}

double lorentz_norm(const DistributionFunction& d, const LorentzExponents& e) {
  require_admissible(e);
  if (d.thresholds.empty()) return 0.0;
  const std::size_t k = d.thresholds.size();
  if (std::isinf(e.p)) return d.thresholds.back();
  if (std::isinf(e.r)) {
    double best = 0.0;
    for (std::size_t i = 0; i < k; ++i) best = std::max(best, d.thresholds[i] * std::pow(d.measures[i], 1.0 / e.p));
    return best;
  }
  // Normalize by the largest value so powers stay in range; the norm is 1-homogeneous.
  const double top = d.thresholds.back();
  long double acc = 0.0L;
  double prev = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double a = std::pow(d.thresholds[i] / top, e.r);
    acc += static_cast<long double>(std::pow(d.measures[i], e.r / e.p)) * static_cast<long double>(a - prev);
    prev = a;
  }
  return top * std::pow(e.p / e.r * static_cast<double>(acc), 1.0 / e.r);
}

double lorentz_norm(const Field& f, const LorentzExponents& e) {
  require_admissible(e);
  return lorentz_norm(distribution(f), e);
}

double lorentz_norm(const TimeSeries& s, const LorentzExponents& e) {
  require_admissible(e);
  return lorentz_norm(distribution(s), e);
}

double lorentz_norm(const TimeSeries& s, const LorentzExponents& e, double a, double b) {
  require_admissible(e);
  return lorentz_norm(distribution(s, a, b), e);
}

double holder_check(const Field& f, const Field& g, const LorentzExponents& e, const LorentzExponents& e1,
                    const LorentzExponents& e2) {
  require_admissible(e);
  require_admissible(e1);
  require_admissible(e2);
  if (std::abs(reciprocal(e.p) - reciprocal(e1.p) - reciprocal(e2.p)) > 1e-12)
    throw InvalidArgument("Holder exponents violate 1/p = 1/p1 + 1/p2");
  if (std::abs(reciprocal(e.r) - reciprocal(e1.r) - reciprocal(e2.r)) > 1e-12)
    throw InvalidArgument("Holder exponents violate 1/r = 1/r1 + 1/r2");
  if (!(f.torus() == g.torus())) throw InvalidArgument("holder_check needs fields on the same torus");
  const auto mf = f.magnitude();
  const auto mg = g.magnitude();
  std::vector<double> prod(mf.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = mf[i] * mg[i];
  const std::vector<double> w(prod.size(), f.torus().cell_volume());
  const double den = lorentz_norm(distribution(mf, w), e1) * lorentz_norm(distribution(mg, w), e2);
  if (den == 0.0) return 0.0;
  return lorentz_norm(distribution(prod, w), e) / den;
}

std::pair<double, double> power_identity_check(const Field& f, double alpha, const LorentzExponents& e) {
  if (!(alpha > 0.0)) throw InvalidArgument("power identity needs alpha > 0");
  if (f.components() != 1) throw InvalidArgument("power identity needs a scalar field");
  for (double v : f.values())
    if (v < 0.0) throw InvalidArgument("power identity needs a nonnegative field");
  const LorentzExponents scaled{e.p * alpha, e.r * alpha};
  require_admissible(e);
  require_admissible(scaled);
  Field fa = f;
  for (double& v : fa.values()) v = std::pow(v, alpha);
  return {lorentz_norm(fa, e), std::pow(lorentz_norm(f, scaled), alpha)};
}

}  // namespace pgl
