#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pgl/field.hpp"

namespace pgl {

/// u_t - mu Lap u - mu' grad div u = f on the torus, u(0) = u0.
/// The Lame part (mu') applies only to vector fields with dim components.
struct HeatProblem {
  Torus torus;
  double mu = 1.0;
  double mu_prime = 0.0;
  Field u0;
  /// Empty means f = 0.
  std::function<Field(double t)> forcing;
  double T = 1.0;
  double dt = 1e-2;

  int num_steps() const;
  void validate() const;
};

/// Called at t_n = n dt for n = 0..num_steps with the spectrum of u(t_n) and
/// the forcing sampled there (nullptr when f = 0).
using HeatObserver = std::function<void(int step, double t, const Spectrum& u_hat, const Field* f)>;

/// Exact per-mode exponential integrator. The forcing is replaced on each step
/// by its quadratic interpolant through t_n, t_n + dt/2, t_n + dt, and that
/// interpolant is integrated exactly against the semigroup.
void heat_solve(const HeatProblem& prob, const HeatObserver& observer);
std::vector<Field> heat_solve(const HeatProblem& prob);

/// phi_k(z) = int_0^1 e^((1-s) z) s^(k-1)/(k-1)! ds, with phi_0 = e^z.
double phi_function(int k, double z);

/// Exponents of the maximal regularity estimate and of its embedding.
struct MaxRegExponents {
  double p;
  double q;
  double r;
  double s;
  double m;
};

/// Time exponent s tied to (d, p, q, m) by d/(2m) + 1/s = 1/q + d/(2p) - 1.
/// Returns infinity when the right-hand side is zero.
double embedding_time_exponent(int d, double p, double q, double m);

/// Throws InvalidArgument naming the first violated condition among
/// 2/q + d/p > 2, q < s < inf, p <= m, 1 + d/2 (1/m - 1/p) > 0 and the
/// scaling relation (checked to 1e-12).
void check_exponents(int d, const MaxRegExponents& e);
bool exponents_admissible(int d, const MaxRegExponents& e);

/// Admissible (s, m) pairs for the given (d, p, q) with m drawn from `m_values`.
std::vector<std::pair<double, double>> admissible_pairs(int d, double p, double q, const std::vector<double>& m_values);

struct MaxRegReport {
  double lhs_sup_besov = 0.0;
  double lhs_ut_norm = 0.0;
  double lhs_hess_norm = 0.0;
  double lhs_embed_norm = 0.0;
  double rhs_data_norm = 0.0;
  double ratio = 0.0;
  /// Final-time trace norm over its supremum; above 1e-6 the report is truncated.
  double tail_fraction = 0.0;
  bool truncated = false;
};

/// Horizon T with exp(-mu lambda_min T) = 1e-8 for the lowest mode of the torus.
double maxreg_horizon(const Torus& torus, double mu);

/// Evaluates every term of the maximal regularity estimate and of the
/// embedding estimate on a solve of `prob`:
///   lhs_sup_besov  = mu^(1-1/q) sup_t ||u||_{B^(2-2/q)_{p,r}}
///   lhs_ut_norm    = ||u_t||_{L_{q,r}(L_p)}
///   lhs_hess_norm  = ||mu grad^2 u||_{L_{q,r}(L_p)}
///   lhs_embed_norm = mu^(1+1/s-1/q) ||u||_{L_{s,r}(L_m)}
///   rhs_data_norm  = mu^(1-1/q) ||u0||_{B^(2-2/q)_{p,r}} + ||f||_{L_{q,r}(L_p)}
///   ratio          = (sum of lhs) / rhs, 0 when rhs = 0.
/// The exponents are used as given; callers validate them with check_exponents.
MaxRegReport maxreg_ratio(const HeatProblem& prob, const MaxRegExponents& e);

}  // namespace pgl
