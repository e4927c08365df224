#include "pgl/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "pgl/besov.hpp"
#include "pgl/diagnostics.hpp"
#include "pgl/errors.hpp"
#include "pgl/harness.hpp"
#include "pgl/heat.hpp"
#include "pgl/lagrangian.hpp"
#include "pgl/lorentz.hpp"
#include "pgl/random.hpp"
#include "pgl/solver.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

double field_rel(const Field& a, const Field& b) {
  double num = 0.0, den = 0.0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    num = std::max(num, std::abs(va[i] - vb[i]));
    den = std::max(den, std::abs(vb[i]));
  }
  return den == 0.0 ? num : num / den;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Collects named measurements; a failed check keeps the first message.
struct Checks {
  bool ok = true;
  std::vector<std::string> notes;

  void le(const std::string& what, double value, double bound) {
    notes.push_back(what + " " + fmt(value) + " <= " + fmt(bound));
    if (!(value <= bound)) fail(what + " " + fmt(value) + " > " + fmt(bound));
  }
  void ge(const std::string& what, double value, double bound) {
    notes.push_back(what + " " + fmt(value) + " >= " + fmt(bound));
    if (!(value >= bound)) fail(what + " " + fmt(value) + " < " + fmt(bound));
  }
  void truth(const std::string& what, bool cond) {
    if (!cond) fail(what);
  }
  void fail(const std::string& msg) {
    if (ok) first = msg;
    ok = false;
  }
  std::string detail() const {
    if (!ok) return first;
    std::string out;
    for (std::size_t i = 0; i < notes.size(); ++i) out += (i ? "; " : "") + notes[i];
    return out;
  }
  std::string first;
};

Field random_scalar(const Torus& t, CounterRng& rng, double band) { return random_band_limited(t, 1, rng, band, 1.0); }

State make_state(const Field& rho, const Field& u, double mu, double mu_prime) {
  State s;
  s.rho = rho;
  s.u = u;
  s.mu = mu;
  s.mu_prime = mu_prime;
  return s;
}

struct Recorded {
  VelocityHistory velocity;
  std::vector<Field> rho;
  Trajectory traj;
};

Recorded record(const Field& rho0, const Field& u0, double mu, double mu_prime, double T, double dt,
                std::vector<std::string> monitors = {"basic"}) {
  Recorded r;
  RunOptions opt;
  opt.T = T;
  opt.dt = dt;
  opt.monitors = std::move(monitors);
  opt.observer = [&](const Integrator& in) {
    r.velocity.times.push_back(in.time());
    r.velocity.u_hat.push_back(in.u_hat());
    r.rho.push_back(inverse(in.rho_hat()));
  };
  r.traj = run(make_state(rho0, u0, mu, mu_prime), opt);
  return r;
}

/// Runs keyed by scenario name, shared between criteria.
class Corpus {
 public:
  Corpus(const AcceptanceOptions& opts) : opts_(opts) {}

  bool full() const { return opts_.level == AcceptanceLevel::full; }

  struct Entry {
    Scenario scenario;
    std::optional<MemberResult> result;
    std::string error;
  };

  const Entry& get(const Scenario& s) {
    auto it = runs_.find(s.name);
    if (it != runs_.end()) return it->second;
    Entry e;
    e.scenario = s;
    try {
      e.result = run_member(s, generate_initial_data(s), (fs::path(opts_.output_root) / "corpus" / s.name).string());
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    return runs_.emplace(s.name, std::move(e)).first->second;
  }

  /// 2D runs with the theorem monitors.
  std::vector<Scenario> scenarios_2d() const {
    struct P {
      std::uint64_t seed;
      double mu_prime, u0, c;
    };
    std::vector<P> ps{{2024, 1.0, 1.0, 0.2}, {1, 0.0, 2.0, 0.1}, {2, 4.0, 2.0, 0.3},
                      {3, 1.0, 4.0, 0.2},    {4, 9.0, 1.0, 0.4}, {5, 0.5, 3.0, 0.1}};
    if (!full()) ps.resize(2);
    std::vector<Scenario> out;
    for (const auto& p : ps) {
      Scenario s = builtin_scenario("calibration-2d");
      s.seed = p.seed;
      s.mu_prime = p.mu_prime;
      s.u0_norm = p.u0;
      s.rho_amplitude = p.c;
      s.flow_stride = 0;
      s.name = "corpus2d-" + std::to_string(p.seed);
      out.push_back(s);
    }
    return out;
  }

  std::vector<Scenario> nu_sweep() const {
    const Scenario base = builtin_scenario("nu-sweep");
    std::vector<Scenario> out;
    for (double nu : base.nu_values) {
      Scenario m = base;
      m.kind = "single";
      m.mu = 1.0;
      m.mu_prime = nu - 1.0;
      m.name = "nusweep-" + std::to_string(static_cast<int>(nu));
      out.push_back(m);
    }
    return out;
  }

  /// Members share the data generated at the sweep's base viscosities.
  const Entry& get_sweep_member(const Scenario& m) {
    auto it = runs_.find(m.name);
    if (it != runs_.end()) return it->second;
    const InitialData data = generate_initial_data(builtin_scenario("nu-sweep"));
    Entry e;
    e.scenario = m;
    try {
      e.result = run_member(m, data, (fs::path(opts_.output_root) / "corpus" / m.name).string());
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
    return runs_.emplace(m.name, std::move(e)).first->second;
  }

  std::vector<std::uint64_t> seeds_3d() const {
    if (full()) return {33, 34, 35, 36, 37};
    return {33};
  }

  Scenario small_3d(std::uint64_t seed, double factor) const {
    Scenario s = builtin_scenario("small-data-3d");
    s.seed = seed;
    s.u0_norm = tolerance::small_data_threshold * factor;
    s.name = "small3d-" + std::to_string(seed) + (factor == 1.0 ? "" : "-x" + std::to_string(static_cast<int>(factor)));
    return s;
  }

  const AcceptanceOptions& options() const { return opts_; }

 private:
  const AcceptanceOptions& opts_;
  std::map<std::string, Entry> runs_;
};

// 1. Lorentz calculus.
Checks criterion_lorentz(Corpus&) {
  Checks c;
  CounterRng rng(101);
  std::vector<Field> corpus;
  for (int i = 0; i < 70; ++i) {
    const Torus t(2, 1.0 + 3.0 * rng.uniform(), 16);
    Field f(t, 1);
    auto v = f.component(0);
    for (double& x : v) x = rng.uniform() < 0.3 ? 1.0 : 0.0;
    v[static_cast<std::size_t>(i)] = 1.0;
    corpus.push_back(f);
  }
  for (int i = 0; i < 70; ++i) {
    const Torus t(2, 2.0, 16);
    const int k = 2 + i % 5;
    std::vector<double> levels;
    for (int j = 0; j < k; ++j) levels.push_back(5.0 * rng.uniform());
    Field f(t, 1);
    for (double& x : f.component(0)) {
      const auto pick = static_cast<std::size_t>(rng.next_u64() % static_cast<std::uint64_t>(k + 1));
      x = pick == static_cast<std::size_t>(k) ? 0.0 : levels[pick];
    }
    corpus.push_back(f);
  }
  for (int i = 0; i < 60; ++i) {
    const Torus t = i % 3 == 2 ? Torus(3, 2 * kPi, 8) : Torus(2, 2 * kPi, i % 3 == 0 ? 16 : 32);
    corpus.push_back(random_band_limited(t, 1 + i % 2, rng, 3.0 + i % 4, 1.0));
  }

  double worst_lp = 0.0;
  for (const auto& f : corpus)
    for (double p : {4.0 / 3.0, 2.0, 2.5, 10.0 / 3.0, 4.0})
      worst_lp = std::max(worst_lp, rel(lorentz_norm(f, LorentzExponents{p, p}), lp_norm(f, p)));
  c.le("L_{p,p} vs L_p on " + std::to_string(corpus.size()) + " functions", worst_lp, tolerance::lorentz_lp);

  double worst_pow = 0.0;
  for (const auto& f : corpus) {
    const auto mag = f.magnitude();
    for (double alpha : {0.5, 2.0, 3.0}) {
      Field fa(f.torus(), 1);
      auto dst = fa.component(0);
      for (std::size_t i = 0; i < mag.size(); ++i) dst[i] = std::pow(mag[i], alpha);
      for (auto [p, r] : {std::pair{2.0, 1.0}, {4.0, 2.0}, {4.0 / 3.0, 2.0}, {3.0, 3.0}}) {
        const LorentzExponents target{p * alpha, r * alpha};
        if (!is_admissible(target)) continue;
        worst_pow = std::max(worst_pow, rel(lorentz_norm(fa, LorentzExponents{p, r}),
                                            std::pow(lorentz_norm(f, target), alpha)));
      }
    }
  }
  c.le("power identity", worst_pow, tolerance::lorentz_power);

  // A set of measure 16: 64 cells of area 1/4.
  const Torus box(2, 8.0, 16);
  Field ind(box, 1);
  for (std::size_t i = 0; i < 64; ++i) ind.component(0)[i * 3] = 1.0;
  double worst_ind = std::abs(lorentz_norm(ind, LorentzExponents{4.0, 1.0}) - 8.0) / 8.0;
  for (auto [p, r] : {std::pair{2.0, 2.0}, {4.0 / 3.0, 1.0}, {4.0, 2.0}, {10.0 / 3.0, 1.0}, {2.5, 4.0}}) {
    const double closed = std::pow(p / r, 1.0 / r) * std::pow(16.0, 1.0 / p);
    worst_ind = std::max(worst_ind, rel(lorentz_norm(ind, LorentzExponents{p, r}), closed));
  }
  c.le("indicator closed forms", worst_ind, tolerance::lorentz_indicator);
  return c;
}

// 2. Spectral operators.
Checks criterion_spectral(Corpus& corpus) {
  Checks c;
  double worst_mode = 0.0;
  auto check_mode = [&](const Torus& t, const std::array<int, 3>& k) {
    const double w = t.base_frequency();
    auto phase = [&](const std::array<double, 3>& x) {
      double s = 0.3;
      for (int a = 0; a < t.dim(); ++a) s += w * k[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
      return s;
    };
    const Field f = Field::sample(t, 1, [&](const auto& x, int) { return std::cos(phase(x)); });
    double k2 = 0.0;
    for (int a = 0; a < t.dim(); ++a) k2 += w * w * k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(a)];
    const Field g = gradient(f);
    const Field expected_g = Field::sample(t, t.dim(), [&](const auto& x, int j) {
      return -w * k[static_cast<std::size_t>(j)] * std::sin(phase(x));
    });
    const Field expected_l = Field::sample(t, 1, [&](const auto& x, int) { return -k2 * std::cos(phase(x)); });
    worst_mode = std::max({worst_mode, field_rel(g, expected_g), field_rel(laplacian(f), expected_l)});
  };
  check_mode(Torus(2, 3.0, 16), {1, 2, 0});
  check_mode(Torus(2, 3.0, 16), {3, -4, 0});
  check_mode(Torus(2, 1.0, 32), {0, 5, 0});
  check_mode(Torus(3, 2.0, 8), {1, 2, 3});
  check_mode(Torus(3, 2 * kPi, 16), {-2, 0, 5});
  c.le("single-mode eigen-relations", worst_mode, tolerance::spectral_mode);

  CounterRng rng(202);
  double worst_dg = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Torus t = i % 2 ? Torus(3, 2.0, 16) : Torus(2, 3.0, 32);
    const Field f = random_scalar(t, rng, 5.0);
    worst_dg = std::max(worst_dg, field_rel(divergence(gradient(f)), laplacian(f)));
  }
  c.le("div grad vs laplacian on 50 fields", worst_dg, tolerance::spectral_div_grad);

  const auto profile =
      corpus.options().corrupted_partition ? PartitionProfile::corrupted : PartitionProfile::raised_cosine;
  double worst_rec = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Torus t = i % 2 ? Torus(3, 2 * kPi, 16) : Torus(2, 2 * kPi, 32);
    Field f = random_band_limited(t, 1 + i % 2, rng, 6.0, 0.5);
    worst_rec = std::max(worst_rec, field_rel(decompose(f, profile).reconstruct(), f));
  }
  c.le("dyadic reconstruction", worst_rec, tolerance::spectral_reconstruction);
  return c;
}

// 3. Heat solves.
Checks criterion_heat(Corpus& corpus) {
  Checks c;
  {
    const double L = 3.0, mu = 0.7;
    const Torus t(2, L, 16);
    const double w = 2 * kPi / L;
    const Field u0 = Field::sample(t, 1, [&](const auto& x, int) { return std::cos(w * (x[0] + 2 * x[1])); });
    const auto sol = heat_solve(HeatProblem{t, mu, 0.0, u0, {}, 0.5, 0.01});
    double worst = 0.0;
    for (std::size_t n = 0; n < sol.size(); ++n) {
      Field e = u0;
      e *= std::exp(-mu * w * w * 5.0 * 0.01 * static_cast<double>(n));
      worst = std::max(worst, field_rel(sol[n], e));
    }
    c.le("single-mode decay", worst, tolerance::heat_mode);
  }
  {
    // a' = -lam a + e^{-t}, a(0) = 1/2.
    const double L = 2.0, mu = 0.3;
    const Torus t(2, L, 16);
    const double w = 2 * kPi / L, lam = mu * w * w;
    const Field shape = Field::sample(t, 1, [&](const auto& x, int) { return std::sin(w * x[0]); });
    Field u0 = shape;
    u0 *= 0.5;
    HeatProblem prob{t, mu, 0.0, u0, [&](double s) {
                       Field f = shape;
                       f *= std::exp(-s);
                       return f;
                     },
                     1.0, 1e-3};
    double worst = 0.0;
    heat_solve(prob, [&](int, double time, const Spectrum& uh, const Field*) {
      const double a = 0.5 * std::exp(-lam * time) + (std::exp(-time) - std::exp(-lam * time)) / (lam - 1.0);
      Field e = shape;
      e *= a;
      worst = std::max(worst, field_rel(inverse(uh), e));
    });
    c.le("forced mode vs scalar ODE", worst, tolerance::heat_forced);
  }
  const MaxRegExponents e{4.0 / 3.0, 4.0 / 3.0, 1.0, 4.0, 4.0};
  const Torus t(2, 2 * kPi, 16);
  auto problem = [&](double mu, double amp, std::uint64_t seed, double gamma) {
    CounterRng rng(seed);
    Field u0 = random_band_limited(t, 2, rng, 6.0, 1.0);
    Field F = random_band_limited(t, 2, rng, 6.0, 1.0);
    u0 *= amp;
    F *= amp;
    const double lam = t.base_frequency() * t.base_frequency();
    const double T = std::ceil(std::log(1e8) / std::min(mu * lam, gamma) / 0.01) * 0.01;
    return HeatProblem{t, mu, 0.0, u0, [F, gamma](double s) {
                         Field f = F;
                         f *= std::exp(-gamma * s);
                         return f;
                       },
                       T, 0.01};
  };
  {
    const double a = maxreg_ratio(problem(1.0, 1.0, 5, 1.5), e).ratio;
    const double b = maxreg_ratio(problem(1.0, 37.5, 5, 1.5), e).ratio;
    c.le("maxreg ratio amplitude scaling", rel(a, b), tolerance::heat_amplitude);
  }
  {
    const int n = 30;
    double m1 = 0.0, m4 = 0.0;
    CounterRng rng(303);
    for (int i = 0; i < n; ++i) {
      const double gamma = 0.5 + 1.5 * rng.uniform();
      const auto seed = 1000 + static_cast<std::uint64_t>(i);
      m1 = std::max(m1, maxreg_ratio(problem(1.0, 1.0, seed, gamma), e).ratio);
      m4 = std::max(m4, maxreg_ratio(problem(4.0, 1.0, seed, gamma), e).ratio);
    }
    c.le("max ratio spread mu=1 vs mu=4 (" + fmt(m1) + ", " + fmt(m4) + ")", rel(m1, m4), tolerance::heat_mu_spread);
  }
  (void)corpus;
  return c;
}

// 4. Exponent admissibility.
Checks criterion_exponents(Corpus&) {
  Checks c;
  struct Triple {
    int d;
    double pq, sm;
  };
  double worst = 0.0;
  for (const auto& tr : {Triple{2, 4.0 / 3.0, 4.0}, Triple{3, 5.0 / 3.0, 5.0}, Triple{3, 10.0 / 7.0, 10.0 / 3.0}}) {
    const MaxRegExponents e{tr.pq, tr.pq, 1.0, tr.sm, tr.sm};
    const double lhs = tr.d / (2.0 * e.m) + 1.0 / e.s;
    const double rhs = 1.0 / e.q + tr.d / (2.0 * e.p) - 1.0;
    worst = std::max(worst, std::abs(lhs - rhs));
    try {
      check_exponents(tr.d, e);
    } catch (const std::exception& ex) {
      c.fail(std::string("triple rejected: ") + ex.what());
    }
    worst = std::max(worst, std::abs(embedding_time_exponent(tr.d, e.p, e.q, e.m) - e.s) / e.s);
  }
  c.le("scaling relation residual", worst, tolerance::exponent_relation);
  return c;
}

// 5. Solver conservation.
Checks criterion_conservation(Corpus& corpus) {
  Checks c;
  const bool full = corpus.full();
  for (int dim : {2, 3}) {
    Scenario s = builtin_scenario(dim == 2 ? "calibration-2d" : "small-data-3d");
    s.N = full ? 64 : 32;
    s.T = full ? 1.0 : 0.2;
    s.dt = 1e-3;
    s.mu_prime = dim == 2 ? 1.0 : 0.0;
    s.u0_norm = dim == 2 ? 4.0 : tolerance::small_data_threshold;
    s.rho_amplitude = 0.2;
    s.monitors = {"basic"};
    s.flow_stride = 0;
    s.name = "conservation-" + std::to_string(dim) + "d";
    const auto& e = corpus.get(s);
    if (!e.result) {
      c.fail(s.name + ": " + e.error);
      continue;
    }
    c.le(std::to_string(dim) + "D mass drift", e.result->report.mass_drift, tolerance::mass);
    c.le(std::to_string(dim) + "D energy budget", e.result->report.energy_budget_residual, tolerance::energy);
  }

  const double A = 1e-4, mu = 0.8, mu_prime = 1.7, T = 0.5, dt = 1e-3;
  for (int dim : {2, 3}) {
    const Torus t(dim, 2 * kPi, dim == 2 ? 32 : 16);
    const double xi = 2.0;
    for (int potential : {0, 1}) {
      if (dim == 3 && potential) continue;
      const double mp = dim == 2 ? mu_prime : 0.0;
      const int comp = potential ? 0 : 1;
      const Field u = Field::sample(t, dim, [&](const auto& x, int cc) { return cc == comp ? A * std::sin(xi * x[0]) : 0.0; });
      Integrator in(make_state(Field::constant(t, 1, 1.0), u, mu, mp));
      const long steps = std::lround(T / dt);
      for (long n = 0; n < steps; ++n) in.step(dt);
      const Field uT = in.state().u;
      double proj = 0.0;
      auto uc = uT.component(comp);
      for (std::size_t i = 0; i < t.num_points(); ++i) proj += uc[i] * std::sin(xi * t.point(i)[0]);
      const double amp = 2.0 * proj / static_cast<double>(t.num_points());
      const double rate = -std::log(amp / A) / T;
      const double expected = (potential ? mu + mp : mu) * xi * xi;
      c.le(std::to_string(dim) + "D " + (potential ? "Q" : "P") + "-mode decay rate", rel(rate, expected),
           tolerance::decay_rate);
    }
  }
  return c;
}

// 6. Scaling invariance.
Checks criterion_rescaling(Corpus& corpus) {
  Checks c;
  Scenario a = builtin_scenario("rescale-pair");
  a.kind = "single";
  a.N = corpus.full() ? 32 : 16;
  a.pair_mu = 4.0;
  Scenario b = a;
  b.mu = a.mu * a.pair_mu;
  b.mu_prime = a.mu_prime * a.pair_mu;
  b.T = a.T / a.pair_mu;
  b.dt = a.dt / a.pair_mu;
  const InitialData da = generate_initial_data(a);
  InitialData db = da;
  db.u0 *= a.pair_mu;
  const auto root = fs::path(corpus.options().output_root) / "rescale";
  const auto ra = run_member(a, da, (root / "mu1").string());
  const auto rb = run_member(b, db, (root / "mu4").string());
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, dev] : rescale_mismatch(ra.trajectory, rb.trajectory))
    if (dev >= worst) worst = dev, worst_name = name;
  c.le("monitor mismatch (" + worst_name + ")", worst, tolerance::rescale);
  for (const char* k : {"div_integral", "weighted_energy"}) {
    const double x = ra.report.inequality_ratios.at(k), y = rb.report.inequality_ratios.at(k);
    c.truth(std::string(k) + " ratio must be positive and finite", x > 0.0 && std::isfinite(x));
    c.le(std::string(k) + " ratio mismatch", rel(x, y), tolerance::rescale);
  }
  return c;
}

// 7. Splitting.
Checks criterion_splitting(Corpus& corpus) {
  Checks c;
  TimeSeries one;
  for (int i = 0; i <= 3200; ++i) one.push_back(32.0 * i / 3200.0, 1.0);
  const auto s = split_intervals(one, 8.0, 4.0, 1.0);
  double dev = s.K == 2 ? 0.0 : 1.0;
  if (s.K == 2)
    dev = std::max({std::abs(s.breakpoints[0]), std::abs(s.breakpoints[1] - 16.0), std::abs(s.breakpoints[2] - 32.0)});
  c.le("constant U split (K = " + std::to_string(s.K) + ")", dev, tolerance::split_closed_form);

  int runs = 0, worst_excess = -1000;
  for (const auto& sc : corpus.scenarios_2d()) {
    const auto& e = corpus.get(sc);
    if (!e.result) {
      c.fail(sc.name + ": " + e.error);
      continue;
    }
    const auto& tr = e.result->trajectory;
    const auto grad_L2 = tr.series("grad_u_L2sq").map([](double, double v) { return std::sqrt(std::max(v, 0.0)); });
    const double norm = lorentz_norm(grad_L2, LorentzExponents{2.0, 2.0});
    for (double parts : {1.5, 3.5, 7.3, 20.0}) {
      const double eta = norm / std::sqrt(parts);
      const int K = split_intervals(grad_L2, eta, 2.0, 2.0).K;
      worst_excess = std::max(worst_excess, K - k_bounds(norm * norm, eta));
      ++runs;
    }
  }
  c.le("max K - ceil(int |grad u|^2 / eta^2) over " + std::to_string(runs) + " splits", worst_excess, 0.0);
  return c;
}

// 8. Density control.
Checks criterion_density(Corpus& corpus) {
  Checks c;
  double worst = kInfinity;
  int runs = 0;
  auto consider = [&](const Corpus::Entry& e) {
    if (!e.result) {
      c.fail(e.scenario.name + ": " + e.error);
      return;
    }
    worst = std::min(worst, e.result->report.gronwall_margin);
    ++runs;
  };
  for (const auto& s : corpus.scenarios_2d()) consider(corpus.get(s));
  for (auto seed : corpus.seeds_3d()) consider(corpus.get(corpus.small_3d(seed, 1.0)));
  std::vector<double> integrals;
  for (const auto& m : corpus.nu_sweep()) {
    const auto& e = corpus.get_sweep_member(m);
    consider(e);
    if (e.result) integrals.push_back(e.result->report.div_u_L1Linf);
  }
  c.ge("min Gronwall margin over " + std::to_string(runs) + " runs", worst, -tolerance::gronwall_slack);
  bool monotone = integrals.size() == 4;
  std::string seq;
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    seq += (i ? " > " : "") + fmt(integrals[i]);
    if (i && integrals[i] > integrals[i - 1]) monotone = false;
  }
  c.truth("int |div u|_inf not nonincreasing in nu: " + seq, monotone);
  c.notes.push_back("nu-sweep " + seq);
  return c;
}

// 9. Lagrangian.
Checks criterion_lagrangian(Corpus&) {
  Checks c;
  double closed = 0.0;
  {
    const Torus t(2, 2.0, 16);
    const Field u = Field::sample(t, 2, [](const auto&, int cc) { return cc == 0 ? 0.3 : -1.1; });
    const auto flow = integrate_flow(VelocityHistory::steady(u, 1.0, 0.05), grid_labels(t, 4), 1.0, 0.05);
    for (std::size_t ti = 0; ti < flow.times.size(); ++ti)
      for (std::size_t l = 0; l < flow.num_labels(); ++l) {
        const auto x = flow.position(ti, l);
        const auto D = flow.jacobian(ti, l);
        closed = std::max({closed, std::abs(x[0] - (flow.labels[l][0] + 0.3 * flow.times[ti])),
                           std::abs(x[1] - (flow.labels[l][1] - 1.1 * flow.times[ti])),
                           std::abs(D[0] - 1) + std::abs(D[1]) + std::abs(D[2]) + std::abs(D[3] - 1),
                           std::abs(flow.det(ti, l) - 1.0)});
      }
  }
  {
    const double L = 2.0, w = 2 * kPi / L;
    const Torus t(2, L, 32);
    const Field u = Field::sample(t, 2, [&](const auto& x, int cc) { return cc == 0 ? std::sin(w * x[1]) : 0.0; });
    const auto flow = integrate_flow(VelocityHistory::steady(u, 1.0, 0.01), grid_labels(t, 2), 1.0, 0.01);
    for (std::size_t ti = 0; ti < flow.times.size(); ++ti)
      for (std::size_t l = 0; l < flow.num_labels(); ++l) {
        const double tt = flow.times[ti];
        const auto y = flow.labels[l];
        const auto x = flow.position(ti, l);
        const auto D = flow.jacobian(ti, l);
        closed = std::max({closed, std::abs(x[0] - (y[0] + tt * std::sin(w * y[1]))), std::abs(x[1] - y[1]),
                           std::abs(D[1] - tt * w * std::cos(w * y[1])), std::abs(D[0] - 1), std::abs(D[2]),
                           std::abs(D[3] - 1), std::abs(flow.det(ti, l) - 1.0)});
      }
  }
  c.le("translation and shear closed forms", closed, tolerance::flow_closed_form);

  {
    const Torus t(2, 2 * kPi, 32);
    const Field u0 = Field::sample(t, 2, [](const auto& x, int cc) {
      return cc == 0 ? 0.8 * (std::sin(x[1]) + 0.5 * std::cos(x[0] + x[1]))
                     : 0.8 * (0.7 * std::sin(x[0]) + 0.3 * std::sin(2 * x[0]));
    });
    const auto rec = record(Field::constant(t, 1, 1.0), u0, 0.5, 0.5, 0.5, 0.005);
    const auto labels = grid_labels(t, 4);
    const auto fwd = integrate_flow(rec.velocity, labels, 0.5, 0.005);
    std::vector<Point> ends;
    for (std::size_t l = 0; l < labels.size(); ++l) ends.push_back(fwd.position(fwd.times.size() - 1, l));
    const auto back = integrate_flow(rec.velocity.reversed(), ends, 0.5, 0.005);
    double worst = 0.0, adj = 0.0;
    for (std::size_t l = 0; l < labels.size(); ++l) {
      const auto x = back.position(back.times.size() - 1, l);
      for (std::size_t a = 0; a < 2; ++a) worst = std::max(worst, std::abs(x[a] - labels[l][a]));
    }
    for (std::size_t ti = 0; ti < fwd.times.size(); ++ti)
      for (std::size_t l = 0; l < labels.size(); ++l) {
        const auto A = fwd.inverse_jacobian(ti, l);
        const auto G = fwd.adjugate(ti, l);
        for (std::size_t i = 0; i < 4; ++i) adj = std::max(adj, std::abs(G[i] - fwd.det(ti, l) * A[i]));
      }
    c.le("forward-backward composition", worst, tolerance::flow_round_trip);
    c.le("adjugate identity", adj, tolerance::flow_adjugate);
  }

  auto residual = [](int n, double dt) {
    const Torus t(2, 2 * kPi, n);
    const Field u = Field::sample(t, 2, [](const auto& x, int cc) { return cc == 0 ? std::sin(x[0]) : 0.0; });
    const Field one = Field::constant(t, 1, 1.0);
    const auto r = record(one, u, 1.0, 0.0, 0.5, dt);
    const auto f = integrate_flow(r.velocity, grid_labels(t, n / 8), 0.5, dt);
    return mass_identity_check(f, r.rho, one);
  };
  const double coarse = residual(32, 2e-3), fine = residual(64, 1e-3);
  c.le("mass identity at baseline", coarse, tolerance::flow_mass_identity);
  c.le("refined / baseline mass identity", fine / coarse, 0.5);
  return c;
}

// 10. Uniqueness diagnostic.
Checks criterion_uniqueness(Corpus& corpus) {
  Checks c;
  const Torus t(2, 2 * kPi, 32);
  CounterRng rng(71);
  Field rho0 = random_scalar(t, rng, 3.0);
  rho0 *= 0.1 / lp_norm(rho0, kInfinity);
  rho0 += Field::constant(t, 1, 1.0);
  const Field u0 = Field::sample(t, 2, [](const auto& x, int cc) {
    return cc == 0 ? std::sin(x[1]) + 0.5 * std::cos(x[0] + x[1]) : 0.7 * std::sin(x[0]) + 0.3 * std::sin(2 * x[0]);
  });
  const double T = 0.4;
  const auto a = record(rho0, u0, 0.5, 0.5, T, 0.02);
  const auto a2 = record(rho0, u0, 0.5, 0.5, T, 0.02);
  const auto b = record(rho0, u0, 0.5, 0.5, T, 0.01);
  const auto d = record(rho0, u0, 0.5, 0.5, T, 0.005);
  const auto same = uniqueness_gap(a.velocity, rho0, a2.velocity, rho0, 4);
  c.le("identical-run gap", same.gap.max_abs() + same.grad_gap_integral, 0.0);
  const double g1 = uniqueness_gap(a.velocity, rho0, b.velocity, rho0, 4).gap.max_abs();
  const double g2 = uniqueness_gap(b.velocity, rho0, d.velocity, rho0, 4).gap.max_abs();
  c.ge("gap shrink factor under dt halving", g2 > 0.0 ? g1 / g2 : kInfinity, tolerance::gap_shrink);

  double worst = 0.0;
  int runs = 0;
  for (const auto& s : corpus.scenarios_2d()) {
    const auto& e = corpus.get(s);
    if (!e.result) {
      c.fail(s.name + ": " + e.error);
      continue;
    }
    const auto& r = e.result->report;
    c.truth(s.name + ": I1 or I2 not finite", std::isfinite(r.grad_u_L1Linf) && std::isfinite(r.grad_u_weighted));
    worst = std::max(worst, r.inequality_ratios.at("grad_integral"));
    ++runs;
  }
  c.le("max I1 / rhs over " + std::to_string(runs) + " runs", worst, tolerance::grad_integral_constant);
  return c;
}

// 11. 3D small-data regime.
Checks criterion_small_data(Corpus& corpus) {
  Checks c;
  double worst_small = 0.0, worst_xi = 0.0, worst_rho = 0.0, lo_pi = kInfinity, hi_pi = 0.0, lo_grad = kInfinity, hi_grad = 0.0;
  int degraded = 0, controls = 0;
  for (auto seed : corpus.seeds_3d()) {
    const auto& e = corpus.get(corpus.small_3d(seed, 1.0));
    if (!e.result) {
      c.fail(e.scenario.name + ": " + e.error);
      continue;
    }
    const auto& r = e.result->report;
    worst_small = std::max(worst_small, r.smallness_product);
    c.truth("run did not reach T = 5", std::abs(e.result->trajectory.times.back() - 5.0) < 1e-9);
    worst_xi = std::max(worst_xi, r.inequality_ratios.at("xi_growth"));
    worst_rho = std::max(worst_rho, r.rho_deviation_max / r.rho0_deviation);
    lo_pi = std::min(lo_pi, r.inequality_ratios.at("pi_decay"));
    hi_pi = std::max(hi_pi, r.inequality_ratios.at("pi_decay"));
    lo_grad = std::min(lo_grad, r.inequality_ratios.at("grad_integral_3d"));
    hi_grad = std::max(hi_grad, r.inequality_ratios.at("grad_integral_3d"));

    const auto& x = corpus.get(corpus.small_3d(seed, 4.0));
    ++controls;
    if (!x.result) {
      ++degraded;  // aborted or violated an invariant
      continue;
    }
    const auto& rx = x.result->report;
    if (rx.rho_deviation_max > 2.0 * rx.rho0_deviation || rx.inequality_ratios.at("xi_growth") > tolerance::xi_growth)
      ++degraded;
  }
  c.le("max smallness", worst_small, tolerance::small_data_threshold * (1 + 1e-9));
  c.le("max Xi / Xi0", worst_xi, tolerance::xi_growth);
  c.le("max |rho - 1|_inf / |rho0 - 1|_inf", worst_rho, 2.0);
  c.truth("Pi / Psi0 outside [" + fmt(tolerance::pi_band_lo) + ", " + fmt(tolerance::pi_band_hi) + "]",
          lo_pi >= tolerance::pi_band_lo && hi_pi <= tolerance::pi_band_hi);
  c.truth("I1 / (Psi0^(2/3) Xi0^(1/3)) outside [" + fmt(tolerance::grad_band_lo) + ", " + fmt(tolerance::grad_band_hi) + "]",
          lo_grad >= tolerance::grad_band_lo && hi_grad <= tolerance::grad_band_hi);
  c.truth("4x amplitude left the monitors intact on " + std::to_string(controls - degraded) + " seeds",
          degraded == controls);
  c.notes.push_back("Pi / Psi0 in [" + fmt(lo_pi) + ", " + fmt(hi_pi) + "]");
  c.notes.push_back("I1 ratio in [" + fmt(lo_grad) + ", " + fmt(hi_grad) + "]");
  c.notes.push_back("4x amplitude broke " + std::to_string(degraded) + "/" + std::to_string(controls));
  return c;
}

// 12. Determinism.
Checks criterion_determinism(Corpus& corpus) {
  Checks c;
  const Scenario s = builtin_scenario("calibration-2d");
  const auto root = fs::path(corpus.options().output_root) / "determinism";
  const auto a = run_scenario(s, (root / "a").string());
  const auto b = run_scenario(s, (root / "b").string());
  c.truth("run exit codes " + std::to_string(a.exit_code) + ", " + std::to_string(b.exit_code),
          a.exit_code == 0 && b.exit_code == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const char* file : {"monitors.csv", "summary.csv"}) {
    const auto x = slurp(fs::path(a.directory) / file), y = slurp(fs::path(b.directory) / file);
    c.truth(std::string(file) + " differs between runs", !x.empty() && x == y);
    c.notes.push_back(std::string(file) + " identical (" + std::to_string(x.size()) + " bytes)");
  }
  return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log) {
  using Fn = Checks (*)(Corpus&);
  const std::vector<std::pair<const char*, Fn>> table{
      {"lorentz-calculus", criterion_lorentz},       {"spectral-operators", criterion_spectral},
      {"heat-solves", criterion_heat},               {"exponent-admissibility", criterion_exponents},
      {"solver-conservation", criterion_conservation}, {"scaling-invariance", criterion_rescaling},
      {"splitting", criterion_splitting},            {"density-control", criterion_density},
      {"lagrangian", criterion_lagrangian},          {"uniqueness-diagnostic", criterion_uniqueness},
      {"small-data-3d", criterion_small_data},       {"determinism", criterion_determinism},
  };
  const std::map<int, double> budgets{{1, tolerance::lorentz_seconds},
                                      {2, tolerance::spectral_seconds},
                                      {3, tolerance::heat_seconds}};
  Corpus corpus(opts);
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!opts.criteria.empty() && std::find(opts.criteria.begin(), opts.criteria.end(), id) == opts.criteria.end())
      continue;
    CriterionResult r;
    r.id = id;
    r.name = table[i].first;
    const auto t0 = std::chrono::steady_clock::now();
    Checks c;
    try {
      c = table[i].second(corpus);
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (auto b = budgets.find(id); b != budgets.end() && r.seconds > b->second)
      c.fail("runtime " + fmt(r.seconds) + " s exceeds " + fmt(b->second) + " s");
    r.passed = c.ok;
    r.detail = c.detail();
    char head[96];
    std::snprintf(head, sizeof head, "%s %2d %-24s %7.1fs  ", r.passed ? "PASS" : "FAIL", id, r.name.c_str(), r.seconds);
    log << head << r.detail << std::endl;
    out.push_back(r);
  }
  std::size_t failed = 0;
  for (const auto& r : out) failed += r.passed ? 0 : 1;
  if (failed) {
    log << "failed criteria:";
    for (const auto& r : out)
      if (!r.passed) log << ' ' << r.id;
    log << std::endl;
  } else {
    log << "all " << out.size() << " criteria passed" << std::endl;
  }
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace pgl
