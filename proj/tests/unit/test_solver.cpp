#include <cmath>

#include "doctest.h"
#include "pgl/errors.hpp"
#include "pgl/solver.hpp"
#include "pgl/spectral.hpp"
#include "support.hpp"

using namespace pgl;
using namespace pgl::test;

namespace {

State make_state(const Field& rho, const Field& u, double mu, double mu_prime) {
  State s;
  s.rho = rho;
  s.u = u;
  s.mu = mu;
  s.mu_prime = mu_prime;
  return s;
}

Field ones(const Torus& t) { return Field::constant(t, 1, 1.0); }

Field density(const Torus& t, double amplitude, std::uint64_t seed) {
  Field r = random_field(t, 1, seed, 3.0, 1.0);
  double peak = 0.0;
  for (double v : r.values()) peak = std::max(peak, std::abs(v));
  r *= amplitude / peak;
  for (double& v : r.values()) v += 1.0;
  return r;
}

Field scaled_random(const Torus& t, double peak_target, std::uint64_t seed, double band = 4.0) {
  Field u = random_field(t, t.dim(), seed, band, 1.0);
  double peak = 0.0;
  for (double v : u.magnitude()) peak = std::max(peak, v);
  u *= peak_target / peak;
  return u;
}

double max_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("helmholtz: closed forms") {
  Torus t(2, 2 * kPi, 32);
  Field grad_phi = gradient(Field::sample(t, 1, [](const auto& x, int) { return std::sin(x[0]) * std::cos(2 * x[1]); }));
  auto hp = helmholtz(grad_phi);
  CHECK(max_abs(hp.P_part) < 1e-12);
  CHECK(field_rel_err(hp.Q_part, grad_phi) < 1e-12);

  Field shear = Field::sample(t, 2, [](const auto& x, int c) { return c == 0 ? std::sin(x[1]) : 0.0; });
  auto hs = helmholtz(shear);
  CHECK(max_abs(hs.Q_part) < 1e-12);
  CHECK(field_rel_err(hs.P_part, shear) < 1e-12);
}

TEST_CASE("helmholtz: projection properties on random fields") {
  for (int dim : {2, 3}) {
    Torus t(dim, 3.0, 16);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      Field u = random_field(t, dim, 40 + seed);
      for (double& v : u.component(0)) v += 0.3;  // nonzero mean goes to P
      auto h = helmholtz(u);
      CHECK(field_rel_err(h.P_part + h.Q_part, u) < 1e-12);
      CHECK(max_abs(helmholtz(h.P_part).Q_part) < 1e-12 * max_abs(u));
      CHECK(max_abs(helmholtz(h.Q_part).P_part) < 1e-12 * max_abs(u));
      CHECK(max_abs(divergence(h.P_part)) < 1e-10 * max_abs(gradient(u)));
      Field gq = gradient(h.Q_part);
      double curl = 0.0;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          auto ab = gq.component(a * dim + b);
          auto ba = gq.component(b * dim + a);
          for (std::size_t i = 0; i < t.num_points(); ++i) curl = std::max(curl, std::abs(ab[i] - ba[i]));
        }
      CHECK(curl < 1e-10 * max_abs(gq));
      const double pq = inner_product(h.P_part, h.Q_part);
      CHECK(std::abs(pq) < 1e-10 * lp_norm(h.P_part, 2) * lp_norm(h.Q_part, 2));
      CHECK(h.P_part.mean()[0] == doctest::Approx(u.mean()[0]).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy: zero and single-mode closed forms") {
  const double L = 3.0, A = 0.7, mu = 1.3, mu_prime = 0.4;
  Torus t(2, L, 16);
  auto zero = energy(make_state(ones(t), Field(t, 2), mu, mu_prime));
  CHECK(zero.first == 0.0);
  CHECK(zero.second == 0.0);
  const double xi = 2 * kPi * 2 / L;
  Field u = Field::sample(t, 2, [&](const auto& x, int c) { return c == 1 ? A * std::sin(xi * x[0]) : 0.0; });
  auto e = energy(make_state(ones(t), u, mu, mu_prime));
  const double kin = 0.25 * A * A * t.volume();
  CHECK(rel_err(e.first, kin) < 1e-12);
  CHECK(rel_err(e.second, mu * xi * xi * 2 * kin) < 1e-12);

  Torus t3(3, L, 8);
  Field u3 = Field::sample(t3, 3, [&](const auto& x, int c) { return c == 0 ? A * std::cos(xi * x[2]) : 0.0; });
  auto e3 = energy(make_state(ones(t3), u3, mu, 0.0));
  CHECK(rel_err(e3.first, 0.25 * A * A * t3.volume()) < 1e-12);
  CHECK(rel_err(e3.second, mu * xi * xi * 0.5 * A * A * t3.volume()) < 1e-12);
}

TEST_CASE("state validation") {
  Torus t(2, 1.0, 8);
  CHECK_THROWS_AS(make_state(Field::constant(t, 1, 0.0), Field(t, 2), 1, 0).validate(), InvalidArgument);
  CHECK_THROWS_AS(make_state(ones(t), Field(t, 2), 0.0, 0).validate(), InvalidArgument);
  CHECK_THROWS_AS(make_state(ones(t), Field(t, 2), 1.0, -1.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(make_state(ones(t), Field(t, 1), 1.0, 0).validate(), InvalidArgument);
  Torus t3(3, 1.0, 8);
  CHECK_THROWS_AS(make_state(ones(t3), Field(t3, 3), 1.0, 0.5).validate(), InvalidArgument);
}

TEST_CASE("zero velocity is a fixed point") {
  Torus t(2, 2.0, 16);
  auto s = make_state(density(t, 0.3, 3), Field(t, 2), 1.0, 0.5);
  State next = s;
  for (int n = 0; n < 10; ++n) next = step(next, 0.01);
  CHECK(max_abs(next.u) == 0.0);
  CHECK(field_rel_err(next.rho, s.rho) < 1e-15);
}

TEST_CASE("CFL violation is rejected") {
  Torus t(2, 2 * kPi, 16);
  Field u = Field::sample(t, 2, [](const auto& x, int c) { return c == 0 ? 2.0 * std::sin(x[1]) : 0.0; });
  auto s = make_state(ones(t), u, 1.0, 0.0);
  const double limit = cfl_limit(s);
  CHECK(limit == doctest::Approx(0.5 * t.spacing() / 2.0).epsilon(1e-12));
  CHECK_NOTHROW(step(s, 0.9 * limit));
  CHECK_THROWS_AS(step(s, 1.1 * limit), InvariantViolation);
}

TEST_CASE("linearized single-mode decay rates") {
  const double A = 1e-4, L = 2 * kPi, mu = 0.8, mu_prime = 1.7, T = 0.5, dt = 1e-3;
  Torus t(2, L, 32);
  const double xi = 2 * kPi * 2 / L;
  for (int potential : {0, 1}) {
    const int comp = potential ? 0 : 1;
    Field u = Field::sample(t, 2, [&](const auto& x, int c) { return c == comp ? A * std::sin(xi * x[0]) : 0.0; });
    Integrator in(make_state(ones(t), u, mu, mu_prime));
    const long steps = std::lround(T / dt);
    for (long n = 0; n < steps; ++n) in.step(dt);
    const Field uT = in.state().u;
    double proj = 0.0;
    auto uc = uT.component(comp);
    for (std::size_t i = 0; i < t.num_points(); ++i) proj += uc[i] * std::sin(xi * t.point(i)[0]);
    const double amp = 2.0 * proj / static_cast<double>(t.num_points());
    const double rate = -std::log(amp / A) / T;
    const double expected = (potential ? mu + mu_prime : mu) * xi * xi;
    CHECK(rel_err(rate, expected) < 1e-4);
  }
}

TEST_CASE("Taylor-Green data: spatial self-convergence") {
  auto solve = [](int n) {
    Torus t(2, 2 * kPi, n);
    Field u = Field::sample(t, 2, [](const auto& x, int c) {
      return c == 0 ? std::sin(x[0]) * std::cos(x[1]) : -std::cos(x[0]) * std::sin(x[1]);
    });
    RunOptions opt;
    opt.T = 1.0;
    opt.dt = 0.01;
    opt.monitors = {"kinetic"};
    std::vector<Field> snaps;
    opt.observer = [&](const Integrator& in) {
      if (std::lround(in.time() / 0.01) % 25 == 0) snaps.push_back(in.state().u);
    };
    run(make_state(ones(t), u, 1.0, 0.0), opt);
    return snaps;
  };
  auto coarse = solve(32);
  auto fine = solve(64);
  REQUIRE(coarse.size() == 5);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    // Fine grid restricted to every second point.
    Field restricted(coarse[k].torus(), 2);
    for (int c = 0; c < 2; ++c)
      for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
          restricted.component(c)[static_cast<std::size_t>(i * 32 + j)] =
              fine[k].component(c)[static_cast<std::size_t>((2 * i) * 64 + 2 * j)];
    CHECK(field_rel_err(coarse[k], restricted) < 1e-6);
  }
}

TEST_CASE("mass conservation and energy budget") {
  for (int dim : {2, 3}) {
    Torus t(dim, 2 * kPi, 32);
    const double mu = 0.5, mu_prime = dim == 2 ? 0.7 : 0.0;
    auto s = make_state(density(t, 0.2, 11), scaled_random(t, 0.5, 12), mu, mu_prime);
    RunOptions opt;
    opt.T = dim == 2 ? 0.5 : 0.2;
    opt.dt = 1e-3;
    opt.monitors = {"basic"};
    auto tr = run(s, opt);
    auto mass = tr.series("mass");
    for (double m : mass.samples()) CHECK(rel_err(m, mass.samples().front()) < 1e-8);
    auto kin = tr.series("kinetic").samples();
    auto cum = cumulative_integral(tr.series("dissipation"));
    double worst = 0.0;
    for (std::size_t i = 0; i < kin.size(); ++i) worst = std::max(worst, std::abs(kin[i] + cum[i] - kin[0]) / kin[0]);
    CHECK(worst < 1e-6);
    CHECK(kin.back() < kin.front());
  }
}

TEST_CASE("zero initial velocity: monitors constant") {
  Torus t(2, 1.0, 16);
  RunOptions opt;
  opt.T = 0.1;
  opt.dt = 0.01;
  opt.monitors = {"theorem2d"};
  auto tr = run(make_state(density(t, 0.1, 5), Field(t, 2), 1.0, 1.0), opt);
  REQUIRE(tr.rows.size() == 11);
  for (std::size_t j = 0; j < tr.names.size(); ++j)
    for (const auto& row : tr.rows) CHECK(row[j] == tr.rows.front()[j]);
  CHECK(tr.rows.front()[tr.index("kinetic")] == 0.0);
  CHECK(tr.rows.front()[tr.index("rho_dev_inf")] > 0.0);
}

TEST_CASE("monitor names") {
  CHECK(format_exponent(4.0 / 3.0) == "1.33333");
  CHECK(format_exponent(10.0 / 7.0) == "1.42857");
  auto names = expand_monitors({"basic", "u_L4", "hess_u_L2.5", "tu_Besov_s1.4_p3.33333_r1"});
  CHECK(names.size() == monitor_set("basic").size() + 2);
  CHECK_THROWS_AS(expand_monitors({"vorticity"}), InvalidArgument);
  CHECK_THROWS_AS(expand_monitors({"hess_w_L2"}), InvalidArgument);
  CHECK(rescale_exponent("u_t_L1.33333") == -2);
  CHECK(rescale_exponent("t_hess_u_L4") == 0);
  CHECK(rescale_exponent("tPu_Besov_s1.5_p4_r1") == 0);
  CHECK(rescale_exponent("Qu_Besov_s0.5_p1.33333_r1") == -1);
  Trajectory tr;
  CHECK_THROWS_WITH_AS(tr.series("kinetic"), doctest::Contains("kinetic"), InvalidArgument);
}

TEST_CASE("t-weighted and exponent-parsed monitors agree with direct evaluation") {
  Torus t(2, 2.0, 16);
  auto s = make_state(density(t, 0.1, 8), scaled_random(t, 0.3, 9), 1.0, 0.5);
  Integrator in(s);
  for (int n = 0; n < 5; ++n) in.step(0.01);
  auto v = evaluate_monitors(in, {"hess_u_L1.33333", "t_hess_u_L1.33333", "u_L4", "Pu_L4", "Qu_L4"});
  CHECK(rel_err(v[1], in.time() * v[0]) < 1e-14);
  const State st = in.state();
  CHECK(rel_err(v[2], lp_norm(st.u, 4.0)) < 1e-12);
  auto h = helmholtz(st.u);
  CHECK(rel_err(v[3], lp_norm(h.P_part, 4.0)) < 1e-12);
  CHECK(rel_err(v[4], lp_norm(h.Q_part, 4.0)) < 1e-12);
  auto direct = evaluate_monitors(in, {"hess_u_L1.33333"});
  Field hess = gradient(gradient(st.u));
  CHECK(rel_err(direct[0], lp_norm(hess, 4.0 / 3.0)) < 1e-10);
}

TEST_CASE("mu rescaling: paired runs agree") {
  const double mu = 4.0, mu_prime = 2.0, dt = 2e-3;
  Torus t(2, 2 * kPi, 16);
  Field rho0 = density(t, 0.1, 21);
  Field u0 = scaled_random(t, 0.8, 22);
  RunOptions a;
  a.T = 100 * dt;
  a.dt = dt;
  a.monitors = {"theorem2d"};
  auto ta = run(make_state(rho0, u0, mu, mu_prime), a);
  RunOptions b = a;
  b.T = mu * a.T;
  b.dt = mu * dt;
  auto tb = run(make_state(rho0, (1.0 / mu) * u0, 1.0, mu_prime / mu), b);
  REQUIRE(ta.rows.size() == tb.rows.size());
  for (std::size_t j = 0; j < ta.names.size(); ++j) {
    const double f = std::pow(mu, rescale_exponent(ta.names[j]));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
      num = std::max(num, std::abs(tb.rows[i][j] - f * ta.rows[i][j]));
      den = std::max(den, std::abs(f * ta.rows[i][j]));
    }
    INFO(ta.names[j]);
    CHECK(num <= 1e-6 * den);
  }
}

TEST_CASE("small density deviation stays small at large nu") {
  Torus t(2, 2 * kPi, 16);
  const double c = 0.05;
  RunOptions opt;
  opt.T = 2.0;
  opt.dt = 5e-3;
  opt.monitors = {"rho_dev_inf"};
  auto tr = run(make_state(density(t, c, 31), scaled_random(t, 0.5, 32), 1.0, 63.0), opt);
  CHECK(tr.series("rho_dev_inf").max_abs() <= 2 * c);
}

TEST_CASE("compression integral decreases with nu") {
  Torus t(2, 2 * kPi, 16);
  Field rho0 = density(t, 0.1, 41);
  Field u0 = scaled_random(t, 0.5, 42);
  REQUIRE(max_abs(helmholtz(u0).Q_part) > 0.1);
  double previous = kInfinity;
  for (double nu : {1.0, 4.0, 16.0, 64.0}) {
    RunOptions opt;
    opt.T = 2.0;
    opt.dt = 2.5e-3;
    opt.monitors = {"div_u_inf"};
    auto tr = run(make_state(rho0, u0, 1.0, nu - 1.0), opt);
    const double integral = integrate(tr.series("div_u_inf"));
    CHECK(integral <= previous);
    previous = integral;
  }
}

TEST_CASE("under-resolved compression aborts with a named diagnostic") {
  Torus t(2, 2 * kPi, 16);
  Field u = Field::sample(t, 2, [](const auto& x, int c) { return c == 0 ? -std::sin(x[0]) : 0.0; });
  RunOptions opt;
  opt.T = 10.0;
  opt.dt = 0.01;
  opt.monitors = {"mass"};
  CHECK_THROWS_WITH_AS(run(make_state(ones(t), u, 0.01, 0.0), opt), doctest::Contains("rho <= 0 (step"),
                       NumericalAbort);
}
