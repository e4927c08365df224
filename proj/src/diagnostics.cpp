#include "pgl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pgl/errors.hpp"
#include "pgl/lagrangian.hpp"
#include "pgl/lorentz.hpp"

namespace pgl {

namespace {

double lorentz_on(const TimeSeries& s, double q, double r, double a, double b) {
  return lorentz_norm(s, LorentzExponents{q, r}, a, b);
}

double ratio(double lhs, double rhs) {
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

double sup(const TimeSeries& s) { return s.empty() ? 0.0 : s.max_abs(); }

double time_norm(const TimeSeries& s, double q) { return lorentz_norm(s, LorentzExponents{q, 1.0}); }

const char* kPuB0 = "Pu_Besov_s0.5_p1.33333_r1";
const char* kQuB0 = "Qu_Besov_s0.5_p1.33333_r1";
const char* kTPuB = "tPu_Besov_s1.5_p4_r1";
const char* kTQuB = "tQu_Besov_s1.5_p4_r1";

}  // namespace

SplitResult split_intervals(const TimeSeries& U, double eta, double q, double r) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("split_intervals needs eta > 0");
  require_admissible(LorentzExponents{q, r});
  if (U.size() < 2) throw InvalidArgument("split_intervals needs at least two samples");
  SplitResult out;
  out.eta = eta;
  const double end = U.end();
  double a = U.start();
  out.breakpoints.push_back(a);
  while (true) {
    const double rest = lorentz_on(U, q, r, a, end);
    if (rest <= eta * (1.0 + 1e-9)) {
      out.breakpoints.push_back(end);
      out.per_interval_norms.push_back(rest);
      break;
    }
    double lo = a, hi = end;
    while (true) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double v = lorentz_on(U, q, r, a, mid);
      if (std::abs(v - eta) <= 1e-12 * eta) {
        lo = hi = mid;
        break;
      }
      if (v < eta)
        lo = mid;
      else
        hi = mid;
    }
    // L_{q,r} norms are only Hoelder in the endpoint, so at float resolution
    // the norm can jump across eta; keep the side that stays below.
    const double b = lo;
    if (!(b > a)) throw InvariantViolation("split_intervals made no progress");
    out.breakpoints.push_back(b);
    out.per_interval_norms.push_back(lorentz_on(U, q, r, a, b));
    a = b;
  }
  out.K = static_cast<int>(out.per_interval_norms.size());
  return out;
}

int k_bounds(double grad_energy, double eta) {
  if (!(grad_energy >= 0.0) || !(eta > 0.0)) throw InvalidArgument("k_bounds needs grad_energy >= 0 and eta > 0");
  return std::max(1, static_cast<int>(std::ceil(grad_energy / (eta * eta))));
}

double k_L41(double Pu0_besov, double Qu0_besov, double u0_L2, double nu, double C) {
  if (Pu0_besov < 0 || Qu0_besov < 0 || u0_L2 < 0 || nu < 0 || C < 0) throw InvalidArgument("k_L41 needs nonnegative inputs");
  const double v = C * (std::pow(Pu0_besov, 4) + nu * std::pow(Qu0_besov, 4)) * std::exp(C * u0_L2 * u0_L2);
  return std::floor(v) + 1.0;
}

double gronwall_density_bound(double div_u_int, double a0_norm) {
  if (!(div_u_int >= 0.0) || !(a0_norm >= 0.0)) throw InvalidArgument("gronwall bound needs nonnegative inputs");
  const double e = std::exp(div_u_int);
  return a0_norm * e + e - 1.0;
}

Trajectory normalized(const Trajectory& tr) {
  Trajectory out = tr;
  const double mu = tr.mu;
  out.mu = 1.0;
  out.mu_prime = tr.mu_prime / mu;
  out.dt = tr.dt * mu;
  for (double& t : out.times) t *= mu;
  std::vector<double> f;
  for (const auto& n : tr.names) f.push_back(std::pow(mu, rescale_exponent(n)));
  for (auto& row : out.rows)
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= f[j];
  out.u0 *= 1.0 / mu;
  return out;
}

Functionals3D functionals_3d(const Trajectory& raw) {
  if (raw.dim != 3) throw InvalidArgument("functionals_3d needs a 3D trajectory");
  const Trajectory tr = normalized(raw);
  const double p5 = 2.5, p107 = 10.0 / 7.0, p103 = 10.0 / 3.0;
  const auto B_hi = tr.series("u_Besov_s1.2_p2.5_r1");
  const auto B_lo = tr.series("u_Besov_s0.6_p1.42857_r1");
  const auto B_t = tr.series("tu_Besov_s1.4_p3.33333_r1");
  const auto h5 = tr.series("hess_u_L2.5");
  const auto ut5 = tr.series("u_t_L2.5");
  const auto h107 = tr.series("hess_u_L1.42857");
  const auto ut107 = tr.series("u_t_L1.42857");
  const auto th = tr.series("t_hess_u_L3.33333");
  const auto tut = tr.series("tu_t_L3.33333");
  Functionals3D f;
  f.Xi0 = B_hi.samples().front();
  f.Psi0 = B_lo.samples().front();
  f.Xi = sup(B_hi) + time_norm(h5, p5) + time_norm(ut5, p5);
  f.Psi = sup(B_lo) + time_norm(h107, p107) + time_norm(ut107, p107);
  f.Pi = sup(B_t) + time_norm(th, p103) + time_norm(tut, p103);
  return f;
}

DiagnosticsReport diagnose(const Trajectory& raw, const DiagnosticsConfig& cfg) {
  if (raw.times.size() < 2) throw InvalidArgument("diagnostics need at least two samples");
  const Trajectory tr = normalized(raw);
  DiagnosticsReport r;
  r.dim = tr.dim;
  r.mu = tr.mu;
  r.mu_prime = tr.mu_prime;
  r.nu = tr.mu + tr.mu_prime;
  const double nu = r.nu;
  const double C = cfg.K_constant;

  const auto kin = tr.series("kinetic").samples();
  const auto cum_diss = cumulative_integral(tr.series("dissipation"));
  for (std::size_t i = 0; i < kin.size(); ++i) {
    const double res = std::abs(kin[i] + cum_diss[i] - kin[0]);
    r.energy_budget_residual = std::max(r.energy_budget_residual, kin[0] > 0.0 ? res / kin[0] : res);
  }
  const auto mass = tr.series("mass").samples();
  for (double m : mass) r.mass_drift = std::max(r.mass_drift, std::abs(m - mass[0]) / std::abs(mass[0]));

  const auto grad_sq = tr.series("grad_u_L2sq");
  r.grad_energy = integrate(grad_sq);
  const auto div_inf = tr.series("div_u_inf");
  const auto grad_inf = tr.series("grad_u_inf");
  r.div_u_L1Linf = integrate(div_inf);
  auto w = weighted_gradient_norms(grad_inf, {}, {});
  r.grad_u_L1Linf = w.I1;
  r.grad_u_weighted = w.I2;

  const auto dev = tr.series("rho_dev_inf").samples();
  r.rho0_deviation = dev.front();
  r.rho_deviation_max = *std::max_element(dev.begin(), dev.end());
  const auto cum_div = cumulative_integral(div_inf);
  r.gronwall_bound = gronwall_density_bound(r.div_u_L1Linf, r.rho0_deviation);
  r.gronwall_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dev.size(); ++i)
    r.gronwall_margin = std::min(r.gronwall_margin, gronwall_density_bound(cum_div[i], r.rho0_deviation) - dev[i]);

  // Step 2 splitting: ||grad u||_{L2} in L_2 time.
  const auto grad_L2 = grad_sq.map([](double, double v) { return std::sqrt(std::max(v, 0.0)); });
  const double grad_norm = lorentz_norm(grad_L2, LorentzExponents{2.0, 2.0});
  r.eta_grad = cfg.eta_grad > 0.0 ? cfg.eta_grad : grad_norm / std::sqrt(3.5);
  if (r.eta_grad > 0.0) {
    r.K_energy = k_bounds(grad_norm * grad_norm, r.eta_grad);
    r.split_grad = split_intervals(grad_L2, r.eta_grad, 2.0, 2.0);
    r.K_split_grad = r.split_grad.K;
  }

  // Step 3 splitting: U = ||u||_{L4} in L_{4,1} time.
  const auto U = tr.series("u_L4");
  const double U_total = lorentz_norm(U, LorentzExponents{4.0, 1.0});
  r.eta_L4 = cfg.eta_L4 > 0.0 ? cfg.eta_L4 : U_total / std::sqrt(2.0);
  if (r.eta_L4 > 0.0) {
    r.split_L4 = split_intervals(U, r.eta_L4, 4.0, 1.0);
    r.K_split_L4 = r.split_L4.K;
  }

  if (tr.dim == 2 && tr.has(kPuB0)) {
    const double q43 = 4.0 / 3.0;
    const auto PuB = tr.series(kPuB0), QuB = tr.series(kQuB0);
    const double Pu0 = PuB.samples().front(), Qu0 = QuB.samples().front();
    const double u0L2 = tr.series("u_L2").samples().front();
    r.K_L41 = k_L41(Pu0, Qu0, u0L2, nu, C);
    const double expo = C * (std::pow(Pu0, 4) + nu * std::pow(Qu0, 4)) * std::exp(C * u0L2 * u0L2);

    const double l41_lhs = sup(PuB) + std::pow(nu, 0.25) * sup(QuB) + time_norm(tr.series("Pu_L4"), 4.0) +
                           std::sqrt(nu) * time_norm(tr.series("Qu_L4"), 4.0) +
                           time_norm(tr.series("u_t_L1.33333"), q43) + time_norm(tr.series("hess_Pu_L1.33333"), q43) +
                           nu * time_norm(tr.series("grad_div_u_L1.33333"), q43);
    const double l41_rhs = C * (Pu0 + std::pow(nu, 0.25) * Qu0) * std::exp(C * u0L2 * u0L2);
    r.inequality_ratios["energy_L41"] = ratio(l41_lhs, l41_rhs);

    const auto tPu = tr.series(kTPuB), tQu = tr.series(kTQuB);
    const double weighted_lhs = sup(tPu) + std::pow(nu, 0.25) * sup(tQu) + time_norm(tr.series("t_hess_Pu_L4"), 4.0) +
                           time_norm(tr.series("tu_t_L4"), 4.0) + nu * time_norm(tr.series("t_grad_div_u_L4"), 4.0);
    r.inequality_ratios["weighted_energy"] = ratio(weighted_lhs, C * std::exp(expo));

    const double div_rhs = C * (std::sqrt(Pu0) + std::pow(nu, 0.125) * std::sqrt(Qu0)) * std::exp(expo);
    r.inequality_ratios["div_integral"] = ratio(nu * r.div_u_L1Linf, div_rhs);

    const auto wg = weighted_gradient_norms(grad_inf, tr.series("t_hess_u_L4"), tr.series("hess_u_L1.33333"));
    r.inequality_ratios["grad_integral"] = ratio(wg.I1, wg.rhs);

    if (r.eta_L4 > 0.0) {
      const auto& bp = r.split_L4.breakpoints;
      const double n34 = std::pow(nu, 0.75);
      for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
        double x = 0.0;
        for (std::size_t i = 0; i < tr.times.size(); ++i) {
          const double t = tr.times[i];
          if (t < bp[k] || t > bp[k + 1]) continue;
          x = std::max(x, tPu.samples()[i] + n34 * tQu.samples()[i]);
        }
        r.X_k.push_back(x);
      }
      for (std::size_t k = 0; k < r.X_k.size(); ++k) {
        const double denom = r.eta_L4 + (k == 0 ? 0.0 : r.X_k[k - 1]);
        r.X_fit_C = std::max(r.X_fit_C, r.X_k[k] / denom);
      }
    }
  }

  if (tr.dim == 3 && tr.has("u_Besov_s1.2_p2.5_r1")) {
    r.has_3d = true;
    r.functionals = functionals_3d(raw);
    const auto& f = r.functionals;
    r.smallness_product = std::cbrt(f.Xi0) * std::pow(f.Psi0, 2.0 / 3.0);
    r.inequality_ratios["xi_growth"] = ratio(f.Xi, f.Xi0);
    r.inequality_ratios["pi_decay"] = ratio(f.Pi, f.Psi0);
    r.inequality_ratios["grad_integral_3d"] = ratio(r.grad_u_L1Linf, r.smallness_product);
  }
  return r;
}

std::vector<std::pair<std::string, double>> report_entries(const DiagnosticsReport& r) {
  std::vector<std::pair<std::string, double>> e{
      {"dim", r.dim},
      {"mu", r.mu},
      {"mu_prime", r.mu_prime},
      {"nu", r.nu},
      {"energy_budget_residual", r.energy_budget_residual},
      {"mass_drift", r.mass_drift},
      {"grad_energy", r.grad_energy},
      {"div_u_L1Linf", r.div_u_L1Linf},
      {"grad_u_L1Linf", r.grad_u_L1Linf},
      {"grad_u_weighted", r.grad_u_weighted},
      {"rho0_deviation", r.rho0_deviation},
      {"rho_deviation_max", r.rho_deviation_max},
      {"gronwall_bound", r.gronwall_bound},
      {"gronwall_margin", r.gronwall_margin},
      {"eta_grad", r.eta_grad},
      {"eta_L4", r.eta_L4},
      {"K_energy", r.K_energy},
      {"K_split_grad", r.K_split_grad},
      {"K_split_L4", r.K_split_L4},
      {"K_L41", r.K_L41},
      {"X_fit_C", r.X_fit_C},
  };
  if (r.has_3d) {
    e.push_back({"Xi", r.functionals.Xi});
    e.push_back({"Psi", r.functionals.Psi});
    e.push_back({"Pi", r.functionals.Pi});
    e.push_back({"Xi0", r.functionals.Xi0});
    e.push_back({"Psi0", r.functionals.Psi0});
    e.push_back({"smallness_product", r.smallness_product});
  }
  for (const auto& [k, v] : r.inequality_ratios) e.push_back({"ratio_" + k, v});
  return e;
}

}  // namespace pgl
