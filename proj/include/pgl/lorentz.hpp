#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pgl/field.hpp"
#include "pgl/time_series.hpp"

namespace pgl {

/// Exponent pair (p, r) of L_{p,r}. Admissible: 1 < p < inf with 1 <= r <= inf,
/// plus the boundary pairs (1, 1) and (inf, inf).
struct LorentzExponents {
  double p;
  double r;
};

bool is_admissible(const LorentzExponents& e);
void require_admissible(const LorentzExponents& e);

/// Empirical distribution of |f|: thresholds are the distinct nonzero values
/// a_1 < ... < a_K and measures[i] = |{|f| >= a_i}|, i.e. the value of
/// s -> |{|f| > s}| on [a_{i-1}, a_i) with a_0 = 0.
struct DistributionFunction {
  std::vector<double> thresholds;
  std::vector<double> measures;
  double total_measure = 0.0;

  /// |{|f| > s}| for s >= 0.
  double measure_above(double s) const;
};

/// Distribution of values carrying the given measures (weights >= 0).
DistributionFunction distribution(std::span<const double> values, std::span<const double> weights);
DistributionFunction distribution(const Field& f);
DistributionFunction distribution(const TimeSeries& s);
DistributionFunction distribution(const TimeSeries& s, double a, double b);

/// Layer-cake quasi-norm p^(1/r) (int_0^inf (s |{|f|>s}|^(1/p))^r ds/s)^(1/r),
/// evaluated exactly on the piecewise-constant distribution.
double lorentz_norm(const DistributionFunction& d, const LorentzExponents& e);
double lorentz_norm(const Field& f, const LorentzExponents& e);
/// Time series norms use the dual-cell step function of TimeSeries.
double lorentz_norm(const TimeSeries& s, const LorentzExponents& e);
/// Norm of the restriction to [a, b].
double lorentz_norm(const TimeSeries& s, const LorentzExponents& e, double a, double b);

/// ||f g||_{L_{p,r}} / (||f||_{L_{p1,r1}} ||g||_{L_{p2,r2}}); requires
/// 1/p = 1/p1 + 1/p2 and 1/r = 1/r1 + 1/r2 to 1e-12. Zero denominators give 0.
double holder_check(const Field& f, const Field& g, const LorentzExponents& e, const LorentzExponents& e1,
                    const LorentzExponents& e2);

/// (||f^alpha||_{L_{p,r}}, ||f||^alpha_{L_{p alpha, r alpha}}) for nonnegative f.
std::pair<double, double> power_identity_check(const Field& f, double alpha, const LorentzExponents& e);

}  // namespace pgl
