#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pgl/errors.hpp"
#include "pgl/snapshot.hpp"
#include "pgl/spectral.hpp"
#include "support.hpp"

using namespace pgl;
using namespace pgl::test;

TEST_CASE("torus validation") {
  CHECK_THROWS_AS(Torus(1, 1.0, 16), InvalidArgument);
  CHECK_THROWS_AS(Torus(2, 0.0, 16), InvalidArgument);
  CHECK_THROWS_AS(Torus(2, 1.0, 12), InvalidArgument);
  CHECK_THROWS_AS(Torus(2, 1.0, 4), InvalidArgument);
  Torus t(3, 2.0, 8);
  CHECK(t.num_points() == 512);
  CHECK(t.num_modes() == 8 * 8 * 5);
  CHECK(t.spacing() == doctest::Approx(0.25));
}

TEST_CASE("gradient of a single mode") {
  const double L = 3.0;
  Torus t(2, L, 32);
  const double w = 2 * kPi / L;
  Field f = Field::sample(t, 1, [&](const auto& x, int) { return std::sin(w * x[0]); });
  Field g = gradient(f);
  REQUIRE(g.components() == 2);
  Field expect = Field::sample(t, 2, [&](const auto& x, int c) { return c == 0 ? w * std::cos(w * x[0]) : 0.0; });
  CHECK(field_rel_err(g, expect) < 1e-12);
}

TEST_CASE("gradient of a constant vanishes") {
  Torus t(3, 1.0, 8);
  Field g = gradient(Field::constant(t, 1, 4.5));
  CHECK(lp_norm(g, kInfinity) < 1e-12);
}

TEST_CASE("mixed product rule") {
  const double L = 2.0;
  Torus t(2, L, 32);
  const double w = 2 * kPi / L;
  Field f = Field::sample(t, 1, [&](const auto& x, int) { return std::sin(w * x[0]) * std::sin(w * x[1]); });
  Field g = gradient(f);
  Field expect = Field::sample(t, 2, [&](const auto& x, int c) {
    return c == 0 ? w * std::cos(w * x[0]) * std::sin(w * x[1]) : w * std::sin(w * x[0]) * std::cos(w * x[1]);
  });
  CHECK(field_rel_err(g, expect) < 1e-10);
}

TEST_CASE("vector gradient is component-major") {
  Torus t(2, 2 * kPi, 16);
  Field u = Field::sample(t, 2, [](const auto& x, int c) { return c == 0 ? std::sin(x[1]) : std::cos(2 * x[0]); });
  Field g = gradient(u);
  REQUIRE(g.components() == 4);
  Field expect = Field::sample(t, 4, [](const auto& x, int c) {
    switch (c) {
      case 1: return std::cos(x[1]);
      case 2: return -2 * std::sin(2 * x[0]);
      default: return 0.0;
    }
  });
  CHECK(field_rel_err(g, expect) < 1e-12);
}

TEST_CASE("shear is divergence-free and modes are Laplacian eigenfunctions") {
  const double L = 5.0;
  Torus t(2, L, 16);
  const double w = 2 * kPi / L;
  Field u = Field::sample(t, 2, [&](const auto& x, int c) { return c == 0 ? std::sin(w * x[1]) : 0.0; });
  CHECK(lp_norm(divergence(u), kInfinity) < 1e-12);

  Torus t3(3, L, 16);
  Field f = Field::sample(t3, 1, [&](const auto& x, int) { return std::cos(w * (2 * x[0] - x[1] + 3 * x[2])); });
  Field lap = laplacian(f);
  CHECK(field_rel_err(lap, -(w * w * 14.0) * f) < 1e-12);
}

TEST_CASE("divergence of gradient equals laplacian on random fields") {
  for (int dim : {2, 3}) {
    Torus t(dim, 2 * kPi, dim == 2 ? 32 : 16);
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      Field phi = random_field(t, 1, seed);
      CHECK(field_rel_err(divergence(gradient(phi)), laplacian(phi)) < 1e-10);
    }
  }
}

TEST_CASE("non-finite input is rejected naming the component") {
  Torus t(2, 1.0, 8);
  Field u(t, 2);
  u.component(1)[3] = std::nan("");
  try {
    gradient(u);
    FAIL("expected rejection");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("component 1") != std::string::npos);
  }
}

TEST_CASE("lp_norm closed forms") {
  // Torus of side 8: a 4x4 sub-box has measure 16.
  Torus t(2, 8.0, 32);
  Field ind = Field::sample(t, 1, [](const auto& x, int) { return (x[0] < 4.0 && x[1] < 4.0) ? 1.0 : 0.0; });
  CHECK(lp_norm(ind, 4.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lp_norm(Field(t, 1), 2.0) == 0.0);
  CHECK(lp_norm(Field::constant(t, 1, 3.0), 2.0) == doctest::Approx(3.0 * std::sqrt(64.0)).epsilon(1e-14));
  CHECK(lp_norm(ind, kInfinity) == 1.0);
  CHECK_THROWS_AS(lp_norm(ind, 0.5), InvalidArgument);
}

TEST_CASE("round trip, homogeneity, triangle inequality") {
  Torus t(3, 2 * kPi, 16);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Field f = random_field(t, 3, seed);
    Field g = random_field(t, 3, seed + 100);
    CHECK(field_rel_err(inverse(forward(f)), f) < 1e-12);
    for (double p : {1.0, 4.0 / 3.0, 2.0, 4.0, kInfinity}) {
      CHECK(rel_err(lp_norm(-2.5 * f, p), 2.5 * lp_norm(f, p)) < 1e-12);
    }
    for (double p : {1.0, 2.0, 4.0, kInfinity}) {
      const double lhs = lp_norm(f + g, p);
      CHECK(lhs <= (lp_norm(f, p) + lp_norm(g, p)) * (1 + 1e-12));
    }
  }
}

TEST_CASE("dealias mask keeps the 2/3 band") {
  Torus t(2, 2 * kPi, 16);
  Field f = Field::sample(t, 1, [](const auto& x, int) { return std::cos(6 * x[0]) + std::cos(5 * x[1]); });
  Spectrum s = forward(f);
  dealias(s);
  Field kept = inverse(s);
  Field expect = Field::sample(t, 1, [](const auto& x, int) { return std::cos(5 * x[1]); });
  CHECK(field_rel_err(kept, expect) < 1e-13);
}

TEST_CASE("snapshot round trip") {
  Torus t(3, 1.5, 8);
  Field f = random_field(t, 3, 7, 3.0);
  std::stringstream buf;
  write_field(buf, f);
  CHECK(buf.str().substr(0, 4) == "PGLF");
  CHECK(buf.str().size() == 4 + 4 * 3 + 8 + 4 + 8 * 3 * 512);
  Field g = read_field(buf);
  CHECK(g.torus() == f.torus());
  CHECK(g.components() == 3);
  CHECK(std::equal(g.values().begin(), g.values().end(), f.values().begin()));
  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_field(bad), Error);
}
