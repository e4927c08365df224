#include <cmath>
#include <random>

#include "doctest.h"
#include "pgl/besov.hpp"
#include "pgl/diagnostics.hpp"
#include "pgl/errors.hpp"
#include "pgl/lorentz.hpp"
#include "pgl/spectral.hpp"
#include "support.hpp"

using namespace pgl;
using namespace pgl::test;

namespace {

TimeSeries sampled(double T, int n, const std::function<double(double)>& fn) {
  TimeSeries s;
  for (int i = 0; i <= n; ++i) {
    const double t = T * i / n;
    s.push_back(t, fn(t));
  }
  return s;
}

// Average of |sin|^p over a period.
double sin_power_mean(double p) { return std::tgamma((p + 1) / 2) / (std::sqrt(kPi) * std::tgamma(p / 2 + 1)); }

// L_{q,1}(0, inf) norm of c e^{-a t}.
double exp_lorentz(double c, double a, double q) { return q * c * std::pow(a, -1.0 / q) * std::tgamma(1.0 + 1.0 / q); }

Trajectory run_2d(double mu, double mu_prime, double amp, double T, double dt, std::uint64_t seed = 7) {
  const Torus t(2, 2 * kPi, 16);
  State s;
  s.u = random_field(t, 2, seed, 3.0);
  s.u *= amp / lp_norm(s.u, kInfinity);
  s.rho = random_field(t, 1, seed + 1, 2.0);
  s.rho *= 0.1 / lp_norm(s.rho, kInfinity);
  s.rho += Field::constant(t, 1, 1.0);
  s.mu = mu;
  s.mu_prime = mu_prime;
  RunOptions opt;
  opt.T = T;
  opt.dt = dt;
  opt.monitors = {"theorem2d"};
  return run(s, opt);
}

}  // namespace

TEST_CASE("split of a constant series") {
  auto one = sampled(32.0, 3200, [](double) { return 1.0; });
  auto s = split_intervals(one, 8.0, 4.0, 1.0);
  REQUIRE(s.K == 2);
  REQUIRE(s.breakpoints.size() == 3);
  CHECK(std::abs(s.breakpoints[0]) < 1e-12);
  CHECK(std::abs(s.breakpoints[1] - 16.0) < 1e-8);
  CHECK(std::abs(s.breakpoints[2] - 32.0) < 1e-12);
  CHECK(std::abs(s.per_interval_norms[0] - 8.0) < 1e-8);

  auto zero = sampled(32.0, 100, [](double) { return 0.0; });
  auto z = split_intervals(zero, 1.0, 4.0, 1.0);
  CHECK(z.K == 1);
  CHECK(z.breakpoints.size() == 2);

  CHECK_THROWS_AS(split_intervals(one, 0.0, 4.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(split_intervals(one, 1.0, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("split invariants on random steps") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> val(0.0, 3.0);
  for (int trial = 0; trial < 6; ++trial) {
    TimeSeries U;
    double t = 0.0;
    for (int i = 0; i < 400; ++i) {
      U.push_back(t, val(gen));
      t += 0.01 + 0.02 * val(gen);
    }
    const double parts = 1.0 + 4.0 * val(gen);
    for (auto [q, r] : {std::pair{2.0, 2.0}, std::pair{4.0, 1.0}}) {
      const double eta = lorentz_norm(U, {q, r}) / parts;
      auto s = split_intervals(U, eta, q, r);
      REQUIRE(s.breakpoints.size() == static_cast<std::size_t>(s.K) + 1);
      for (std::size_t k = 0; k + 1 < s.breakpoints.size(); ++k) CHECK(s.breakpoints[k] < s.breakpoints[k + 1]);
      for (int k = 0; k + 1 < s.K; ++k) {
        // Either eta is hit, or it falls between the norms at b and the next double.
        const double a = s.breakpoints[k], b = s.breakpoints[k + 1];
        const double below = s.per_interval_norms[k];
        const double above = lorentz_norm(U, {q, r}, a, std::nextafter(b, 1e300));
        const bool hit = std::abs(below - eta) < 1e-8 * eta;
        CHECK((hit || (below <= eta && eta <= above)));
      }
      CHECK(s.per_interval_norms.back() <= eta * (1 + 1e-9));
      if (q == 2.0) {
        const double energy = integrate(U.map([](double, double v) { return v * v; }));
        CHECK(s.K <= k_bounds(energy, eta));
      }
    }
  }
}

TEST_CASE("K formulas") {
  CHECK(k_bounds(10.0, 2.0) == 3);
  CHECK(k_bounds(8.0, 2.0) == 2);
  CHECK(k_bounds(0.0, 0.3) == 1);
  CHECK_THROWS_AS(k_bounds(1.0, 0.0), InvalidArgument);
  // C (1 + 2 * 16) e^{C} with C = 0.5: 16.5 * e^0.5 = 27.2...
  CHECK(k_L41(1.0, 2.0, 1.0, 2.0, 0.5) == 28);
  CHECK(k_L41(0.0, 0.0, 0.0, 1.0, 1.0) == 1);
}

TEST_CASE("Gronwall density bound") {
  CHECK(std::abs(gronwall_density_bound(std::log(1.1), 0.05) - 0.155) < 1e-14);
  CHECK(gronwall_density_bound(0.0, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  // With a0 = 0.1 the bound stays below 2 a0 while I < log(1.2 / 1.1).
  CHECK(gronwall_density_bound(std::log(1.2 / 1.1) * 0.999, 0.1) < 0.2);
  CHECK(gronwall_density_bound(std::log(1.2 / 1.1) * 1.001, 0.1) > 0.2);
  double prev = -1.0;
  for (double I = 0.0; I < 3.0; I += 0.1) {
    const double b = gronwall_density_bound(I, 0.2);
    CHECK(b > prev);
    prev = b;
  }
  CHECK_THROWS_AS(gronwall_density_bound(-1.0, 0.1), InvalidArgument);
}

TEST_CASE("3D functionals of a decaying shear") {
  const Torus t(3, 2 * kPi, 16);
  State s;
  s.rho = Field::constant(t, 1, 1.0);
  s.u = Field::sample(t, 3, [](const auto& x, int c) { return c == 0 ? std::sin(x[1]) : 0.0; });
  s.mu = 1.0;
  RunOptions opt;
  opt.T = 24.0;
  opt.dt = 0.02;
  opt.monitors = {"theorem3d"};
  const auto tr = run(s, opt);
  const auto f = functionals_3d(tr);

  const double vol = std::pow(2 * kPi, 3);
  const Field profile = Field::sample(t, 1, [](const auto& x, int) { return std::sin(x[1]); });
  // Grid quadrature of |sin|^p is only algebraically accurate for fractional p.
  auto sin_norm = [&](double p) { return lp_norm(profile, p); };
  CHECK(rel_err(sin_norm(2.5), std::pow(vol * sin_power_mean(2.5), 1 / 2.5)) < 3e-4);
  CHECK(rel_err(sin_norm(10.0 / 7.0), std::pow(vol * sin_power_mean(10.0 / 7.0), 0.7)) < 5e-3);
  CHECK(rel_err(f.Xi0, besov_norm(s.u, 1.2, 2.5, 1.0)) < 1e-12);
  CHECK(rel_err(f.Psi0, besov_norm(s.u, 0.6, 10.0 / 7.0, 1.0)) < 1e-12);
  // sup of the Besov part is attained at t = 0; Hessian and u_t both have |sin y| profiles.
  CHECK(rel_err(f.Xi - f.Xi0, 2 * exp_lorentz(sin_norm(2.5), 1.0, 2.5)) < 2e-3);
  CHECK(rel_err(f.Psi - f.Psi0, 2 * exp_lorentz(sin_norm(10.0 / 7.0), 1.0, 10.0 / 7.0)) < 2e-3);
  CHECK(f.Pi >= std::exp(-1.0) * besov_norm(s.u, 1.4, 10.0 / 3.0, 1.0) * (1 - 1e-9));

  auto zero = s;
  zero.u = Field(t, 3);
  opt.T = 0.1;
  const auto fz = functionals_3d(run(zero, opt));
  CHECK(fz.Xi == 0.0);
  CHECK(fz.Psi == 0.0);
  CHECK(fz.Pi == 0.0);
}

TEST_CASE("missing monitors are named") {
  const Torus t(3, 2 * kPi, 8);
  State s;
  s.rho = Field::constant(t, 1, 1.0);
  s.u = Field(t, 3);
  RunOptions opt;
  opt.T = 0.05;
  opt.dt = 0.01;
  const auto tr = run(s, opt);
  try {
    functionals_3d(tr);
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("u_Besov_s1.2_p2.5_r1") != std::string::npos);
  }
}

TEST_CASE("ratios are invariant under rescaling") {
  const double mu = 4.0, mu_prime = 2.0, T = 0.5, dt = 0.005;
  const auto a = run_2d(mu, mu_prime, 1.0, T, dt);
  const auto b = run_2d(1.0, mu_prime / mu, 1.0 / mu, T * mu, dt * mu);
  const auto ra = diagnose(a), rb = diagnose(b);
  CHECK(ra.nu == doctest::Approx(rb.nu).epsilon(1e-12));
  REQUIRE(ra.inequality_ratios.size() == 4);
  for (const auto& [k, v] : ra.inequality_ratios) {
    INFO(k);
    CHECK(rel_err(v, rb.inequality_ratios.at(k)) < 1e-6);
  }
  CHECK(rel_err(ra.grad_energy, rb.grad_energy) < 1e-6);
  CHECK(ra.K_split_grad == rb.K_split_grad);
  CHECK(ra.K_split_L4 == rb.K_split_L4);
}

TEST_CASE("report invariants on a compressible run") {
  const auto tr = run_2d(0.5, 0.5, 1.0, 1.0, 0.005, 3);
  DiagnosticsConfig cfg;
  cfg.K_constant = 0.05;
  const auto r = diagnose(tr, cfg);
  CHECK(r.energy_budget_residual < 1e-4);
  CHECK(r.mass_drift < 1e-10);
  CHECK(r.K_energy == 4);
  CHECK(r.K_split_grad <= r.K_energy);
  CHECK(r.K_split_grad > 1);
  CHECK(r.K_split_L4 > 1);
  CHECK(r.gronwall_margin >= 0.0);
  CHECK(r.rho_deviation_max <= r.gronwall_bound);
  CHECK(r.X_k.size() == static_cast<std::size_t>(r.K_split_L4));
  CHECK(r.X_fit_C > 0.0);
  CHECK(r.K_L41 >= 1);
  for (const auto& [k, v] : r.inequality_ratios) {
    INFO(k);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
  }
  // The double-exponential right-hand sides overflow for unit-size data, so
  // only the single-exponential ratios are informative here.
  CHECK(r.inequality_ratios.at("energy_L41") > 0.0);
  CHECK(r.inequality_ratios.at("grad_integral") > 0.0);
  const auto entries = report_entries(r);
  CHECK(entries.size() == 21 + r.inequality_ratios.size());
}
