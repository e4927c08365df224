#include "pgl/heat.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "pgl/besov.hpp"
#include "pgl/errors.hpp"
#include "pgl/lorentz.hpp"
#include "pgl/spectral.hpp"
#include "pgl/time_series.hpp"

namespace pgl {

int HeatProblem::num_steps() const { return static_cast<int>(std::llround(T / dt)); }

void HeatProblem::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("heat problem needs mu > 0");
  if (!(mu + mu_prime > 0.0) || !std::isfinite(mu_prime)) throw InvalidArgument("heat problem needs mu + mu' > 0");
  if (!(dt > 0.0) || !(T > 0.0)) throw InvalidArgument("heat problem needs T > 0 and dt > 0");
  const double steps = T / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw InvalidArgument("heat problem needs T/dt to be an integer");
  if (!(u0.torus() == torus)) throw InvalidArgument("heat problem u0 lives on a different torus");
  u0.require_finite("heat initial data");
}

double phi_function(int k, double z) {
  if (k < 0) throw InvalidArgument("phi_function needs k >= 0");
  if (k == 0) return std::exp(z);
  if (std::abs(z) < 2.0) {
    // Taylor series sum_m z^m / (m + k)!
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    double term = 1.0 / fact;
    double sum = term;
    for (int m = 1; m < 60; ++m) {
      term *= z / (m + k);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  double phi = std::exp(z);
  double inv_fact = 1.0;
  for (int i = 1; i <= k; ++i) {
    phi = (phi - inv_fact) / z;
    inv_fact /= i;
  }
  return phi;
}

namespace {

struct StepWeights {
  double decay;
  double w0, w1, w2;
};

// Exact integral of e^(-z(1-tau)) against the quadratic Lagrange basis on
// tau = 0, 1/2, 1, times h.
StepWeights step_weights(double z) {
  const double i0 = phi_function(1, -z);
  const double i1 = phi_function(2, -z);
  const double i2 = 2.0 * phi_function(3, -z);
  return {std::exp(-z), i0 - 3.0 * i1 + 2.0 * i2, 4.0 * i1 - 4.0 * i2, -i1 + 2.0 * i2};
}

double squared_norm(const Torus& torus, const std::array<int, 3>& k) {
  double s = 0.0;
  for (int a = 0; a < torus.dim(); ++a) s += static_cast<double>(k[static_cast<std::size_t>(a)]) * k[static_cast<std::size_t>(a)];
  return s;
}

// Potential part k (k . v) / |k|^2 of a vector of spectral components at one mode.
void potential_part(const std::array<int, 3>& k, double k2, int dim, const std::complex<double>* v,
                    std::complex<double>* out) {
  std::complex<double> dot = 0.0;
  for (int a = 0; a < dim; ++a) dot += static_cast<double>(k[static_cast<std::size_t>(a)]) * v[a];
  for (int a = 0; a < dim; ++a) out[a] = k2 > 0.0 ? static_cast<double>(k[static_cast<std::size_t>(a)]) * dot / k2 : 0.0;
}

}  // namespace

void heat_solve(const HeatProblem& prob, const HeatObserver& observer) {
  prob.validate();
  const Torus& torus = prob.torus;
  const int comps = prob.u0.components();
  const int dim = torus.dim();
  const bool lame = prob.mu_prime != 0.0 && comps == dim;
  const int steps = prob.num_steps();
  const double h = prob.dt;
  const std::size_t modes = torus.num_modes();
  const double w2 = torus.base_frequency() * torus.base_frequency();

  std::vector<StepWeights> wp(modes), wq(lame ? modes : 0);
  for (std::size_t m = 0; m < modes; ++m) {
    const double xi2 = w2 * squared_norm(torus, torus.wavevector(m));
    wp[m] = step_weights(prob.mu * xi2 * h);
    if (lame) wq[m] = step_weights((prob.mu + prob.mu_prime) * xi2 * h);
  }

  auto sample_forcing = [&](double t) -> std::optional<Field> {
    if (!prob.forcing) return std::nullopt;
    Field f = prob.forcing(t);
    if (!(f.torus() == torus) || f.components() != comps)
      throw InvalidArgument("forcing shape does not match the initial data");
    f.require_finite("heat forcing at t=" + std::to_string(t));
    return f;
  };

  Spectrum u = forward(prob.u0);
  std::optional<Field> f0 = sample_forcing(0.0);
  if (observer) observer(0, 0.0, u, f0 ? &*f0 : nullptr);

  for (int n = 0; n < steps; ++n) {
    const double t0 = n * h;
    const double t1 = (n + 1) * h;
    std::optional<Field> fm = sample_forcing(t0 + 0.5 * h);
    std::optional<Field> f1 = sample_forcing(t1);
    std::optional<Spectrum> g0, gm, g1;
    if (f0) {
      g0 = forward(*f0);
      gm = forward(*fm);
      g1 = forward(*f1);
    }
    Spectrum next(torus, comps);
    for (std::size_t m = 0; m < modes; ++m) {
      const StepWeights& a = wp[m];
      for (int c = 0; c < comps; ++c) {
        std::complex<double> v = a.decay * u.component(c)[m];
        if (g0) v += h * (a.w0 * g0->component(c)[m] + a.w1 * gm->component(c)[m] + a.w2 * g1->component(c)[m]);
        next.component(c)[m] = v;
      }
      if (!lame) continue;
      // Correct the potential part from the mu rate to the mu + mu' rate.
      const auto k = torus.wavevector(m);
      const double k2 = squared_norm(torus, k);
      if (k2 == 0.0) continue;
      const StepWeights& b = wq[m];
      std::complex<double> vin[3], qout[3];
      auto add_potential = [&](const Spectrum& s, double coeff) {
        for (int c = 0; c < dim; ++c) vin[c] = s.component(c)[m];
        potential_part(k, k2, dim, vin, qout);
        for (int c = 0; c < dim; ++c) next.component(c)[m] += coeff * qout[c];
      };
      add_potential(u, b.decay - a.decay);
      if (g0) {
        add_potential(*g0, h * (b.w0 - a.w0));
        add_potential(*gm, h * (b.w1 - a.w1));
        add_potential(*g1, h * (b.w2 - a.w2));
      }
    }
    u = std::move(next);
    f0 = std::move(f1);
    if (observer) observer(n + 1, t1, u, f0 ? &*f0 : nullptr);
  }
}

std::vector<Field> heat_solve(const HeatProblem& prob) {
  std::vector<Field> out;
  heat_solve(prob, [&](int, double, const Spectrum& u, const Field*) { out.push_back(inverse(u)); });
  return out;
}

double embedding_time_exponent(int d, double p, double q, double m) {
  const double inv_s = 1.0 / q + d / (2.0 * p) - 1.0 - d / (2.0 * m);
  if (inv_s == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / inv_s;
}

void check_exponents(int d, const MaxRegExponents& e) {
  if (d != 2 && d != 3) throw InvalidArgument("exponent check needs d = 2 or 3");
  if (!(e.p > 1.0 && e.q > 1.0 && std::isfinite(e.p) && std::isfinite(e.q)))
    throw InvalidArgument("exponent check needs 1 < p, q < infinity");
  if (!(e.r >= 1.0)) throw InvalidArgument("exponent check needs r >= 1");
  if (!(2.0 / e.q + d / e.p > 2.0)) throw InvalidArgument("violated: 2/q + d/p > 2");
  if (!(e.s > e.q)) throw InvalidArgument("violated: q < s");
  if (!std::isfinite(e.s)) throw InvalidArgument("violated: s < infinity");
  if (!(e.p <= e.m)) throw InvalidArgument("violated: p <= m");
  if (!(1.0 + 0.5 * d * (1.0 / e.m - 1.0 / e.p) > 0.0)) throw InvalidArgument("violated: 1 + d/2 (1/m - 1/p) > 0");
  const double lhs = d / (2.0 * e.m) + 1.0 / e.s;
  const double rhs = 1.0 / e.q + d / (2.0 * e.p) - 1.0;
  if (std::abs(lhs - rhs) > 1e-12) throw InvalidArgument("violated: d/(2m) + 1/s = 1/q + d/(2p) - 1");
}

bool exponents_admissible(int d, const MaxRegExponents& e) {
  try {
    check_exponents(d, e);
    return true;
  } catch (const InvalidArgument&) {
    return false;
  }
}

std::vector<std::pair<double, double>> admissible_pairs(int d, double p, double q, const std::vector<double>& m_values) {
  std::vector<std::pair<double, double>> out;
  for (double m : m_values) {
    const double s = embedding_time_exponent(d, p, q, m);
    if (exponents_admissible(d, {p, q, 1.0, s, m})) out.emplace_back(s, m);
  }
  return out;
}

double maxreg_horizon(const Torus& torus, double mu) {
  const double lambda_min = torus.base_frequency() * torus.base_frequency();
  return std::log(1e8) / (mu * lambda_min);
}

MaxRegReport maxreg_ratio(const HeatProblem& prob, const MaxRegExponents& e) {
  const Torus& torus = prob.torus;
  const int dim = torus.dim();
  const int comps = prob.u0.components();
  const double trace_s = 2.0 - 2.0 / e.q;
  const double w2 = torus.base_frequency() * torus.base_frequency();

  TimeSeries ut_series, hess_series, embed_series, f_series;
  double sup_besov = 0.0;
  double last_besov = 0.0;
  double u0_besov = 0.0;

  heat_solve(prob, [&](int step, double t, const Spectrum& uh, const Field* f) {
    const Field u = inverse(uh);
    const double b = besov_norm(u, trace_s, e.p, e.r);
    if (step == 0) u0_besov = b;
    sup_besov = std::max(sup_besov, b);
    last_besov = b;

    // u_t = mu Lap u + mu' grad div u + f, evaluated spectrally.
    Spectrum lu(torus, comps);
    const bool lame = prob.mu_prime != 0.0 && comps == dim;
    for (std::size_t m = 0; m < torus.num_modes(); ++m) {
      const auto k = torus.wavevector(m);
      const double k2 = squared_norm(torus, k);
      for (int c = 0; c < comps; ++c) lu.component(c)[m] = -prob.mu * w2 * k2 * uh.component(c)[m];
      if (!lame) continue;
      std::complex<double> dot = 0.0;
      for (int a = 0; a < dim; ++a) dot += static_cast<double>(k[static_cast<std::size_t>(a)]) * uh.component(a)[m];
      for (int c = 0; c < dim; ++c)
        lu.component(c)[m] -= prob.mu_prime * w2 * static_cast<double>(k[static_cast<std::size_t>(c)]) * dot;
    }
    Field ut = inverse(lu);
    if (f) ut += *f;
    const Field hess = inverse(spectral_gradient(spectral_gradient(uh)));

    ut_series.push_back(t, lp_norm(ut, e.p));
    hess_series.push_back(t, prob.mu * lp_norm(hess, e.p));
    embed_series.push_back(t, lp_norm(u, e.m));
    f_series.push_back(t, f ? lp_norm(*f, e.p) : 0.0);
  });

  const double trace_weight = std::pow(prob.mu, 1.0 - 1.0 / e.q);
  MaxRegReport rep;
  rep.lhs_sup_besov = trace_weight * sup_besov;
  rep.lhs_ut_norm = lorentz_norm(ut_series, {e.q, e.r});
  rep.lhs_hess_norm = lorentz_norm(hess_series, {e.q, e.r});
  rep.lhs_embed_norm = std::pow(prob.mu, 1.0 + 1.0 / e.s - 1.0 / e.q) * lorentz_norm(embed_series, {e.s, e.r});
  rep.rhs_data_norm = trace_weight * u0_besov + lorentz_norm(f_series, {e.q, e.r});
  const double lhs = rep.lhs_sup_besov + rep.lhs_ut_norm + rep.lhs_hess_norm + rep.lhs_embed_norm;
  rep.ratio = rep.rhs_data_norm > 0.0 ? lhs / rep.rhs_data_norm : 0.0;
  rep.tail_fraction = sup_besov > 0.0 ? last_besov / sup_besov : 0.0;
  rep.truncated = rep.tail_fraction > 1e-6;
  return rep;
}

}  // namespace pgl
