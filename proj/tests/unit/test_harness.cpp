#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pgl/besov.hpp"
#include "pgl/errors.hpp"
#include "pgl/harness.hpp"
#include "pgl/spectral.hpp"
#include "support.hpp"

using namespace pgl;
using namespace pgl::test;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "pglab_unit_harness" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Scenario parse(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scenario parsing") {
  const auto s = parse("# comment\nname = probe\n dim=3 \nN = 8\nmu = 0.5  # trailing\nmonitors = basic, theorem3d\nseed = 42\n");
  CHECK(s.name == "probe");
  CHECK(s.dim == 3);
  CHECK(s.N == 8);
  CHECK(s.mu == 0.5);
  CHECK(s.seed == 42);
  CHECK(s.monitors == std::vector<std::string>{"basic", "theorem3d"});

  CHECK(error_of("colour = red\n").find("'colour'") != std::string::npos);
  CHECK(error_of("N = 16\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(error_of("mu = fast\n").find("'mu'") != std::string::npos);
  CHECK(error_of("mu = 1.5x\n").find("'mu'") != std::string::npos);
  CHECK(error_of("seed = -3\n").find("'seed'") != std::string::npos);
  CHECK(error_of("just words\n").find("no '='") != std::string::npos);
  CHECK(error_of("mu = -1\n").find("'mu'") != std::string::npos);
  CHECK(error_of("dt = 0\n").find("'dt'") != std::string::npos);
  CHECK(error_of("kind = pairwise\n").find("'kind'") != std::string::npos);
  CHECK(error_of("monitors = nonsense\n").find("'monitors'") != std::string::npos);
}

TEST_CASE("format_scenario round-trips") {
  for (const auto& name : builtin_scenarios()) {
    const Scenario s = builtin_scenario(name);
    CHECK_NOTHROW(s.validate());
    const Scenario back = parse(format_scenario(s));
    CHECK(format_scenario(back) == format_scenario(s));
    CHECK(back.name == name);
  }
  CHECK_THROWS_AS(builtin_scenario("nope"), InvalidArgument);
}

TEST_CASE("initial data meets its prescribed norms") {
  Scenario s = builtin_scenario("calibration-2d");
  s.mu_prime = 3.0;  // nu / mu = 4
  const auto d = generate_initial_data(s);
  const double weight = std::pow(4.0, 0.25);
  CHECK(rel_err(d.Pu0_besov + weight * d.Qu0_besov, s.u0_norm) < 1e-12);
  CHECK(rel_err(weight * d.Qu0_besov, s.q_fraction * s.u0_norm) < 1e-12);
  const auto hp = helmholtz(d.u0);
  CHECK(rel_err(besov_norm(hp.P_part, 0.5, 4.0 / 3.0, 1.0), d.Pu0_besov) < 1e-12);
  Field dev = d.rho0;
  dev -= Field::constant(dev.torus(), 1, 1.0);
  CHECK(rel_err(lp_norm(dev, kInfinity), s.rho_amplitude) < 1e-12);

  const auto again = generate_initial_data(s);
  CHECK(field_rel_err(again.u0, d.u0) == 0.0);
  CHECK(field_rel_err(again.rho0, d.rho0) == 0.0);

  const auto d3 = generate_initial_data(builtin_scenario("small-data-3d"));
  CHECK(rel_err(d3.smallness, 4.0) < 1e-12);
}

TEST_CASE("run_scenario writes a self-describing, reproducible output tree") {
  const auto root = scratch("tree");
  Scenario s = builtin_scenario("calibration-2d");
  s.N = 16;
  s.T = 0.2;
  const auto a = run_scenario(s, (root / "a").string());
  const auto b = run_scenario(s, (root / "b").string());
  REQUIRE(a.exit_code == kExitOk);
  REQUIRE(b.exit_code == kExitOk);
  for (const char* f : {"monitors.csv", "summary.csv", "report.json", "schema.json"}) {
    CHECK(fs::exists(fs::path(a.directory) / f));
    CHECK(slurp(fs::path(a.directory) / f) == slurp(fs::path(b.directory) / f));
  }
  for (const char* f : {"rho0.pglf", "u0.pglf", "rho_final.pglf", "u_final.pglf", "flow.pglflow"})
    CHECK(fs::exists(fs::path(a.directory) / f));

  const auto schema = nlohmann::json::parse(slurp(fs::path(a.directory) / "schema.json"));
  CHECK(schema["rng_algorithm"] == "splitmix64-counter");
  std::set<std::string> described;
  for (const auto& c : schema["files"]["monitors.csv"]["columns"]) {
    CHECK(!c["description"].get<std::string>().empty());
    described.insert(c["name"]);
  }
  std::istringstream csv(slurp(fs::path(a.directory) / "monitors.csv"));
  std::string header;
  std::getline(csv, header);
  std::istringstream cols(header);
  std::string col;
  int n = 0;
  while (std::getline(cols, col, ',')) {
    CHECK_MESSAGE(described.count(col) == 1, col);
    ++n;
  }
  CHECK(n == static_cast<int>(described.size()));

  std::set<std::string> keys;
  for (const auto& k : schema["files"]["summary.csv"]["keys"]) {
    CHECK(k["description"].get<std::string>() != k["name"].get<std::string>());
    keys.insert(k["name"]);
  }
  std::istringstream summary(slurp(fs::path(a.directory) / "summary.csv"));
  std::string line;
  std::getline(summary, line);
  while (std::getline(summary, line)) CHECK_MESSAGE(keys.count(line.substr(0, line.find(','))) == 1, line);

  const auto status = nlohmann::json::parse(slurp(fs::path(a.directory) / "status.json"));
  CHECK(status["status"] == "ok");
}

TEST_CASE("null scenario reports zeros") {
  const auto root = scratch("null");
  const auto out = run_scenario(builtin_scenario("null"), root.string());
  REQUIRE(out.exit_code == kExitOk);
  std::istringstream summary(slurp(fs::path(out.directory) / "summary.csv"));
  std::string line;
  std::getline(summary, line);
  int rows = 0;
  while (std::getline(summary, line)) {
    const double v = std::stod(line.substr(line.find(',') + 1));
    const std::string key = line.substr(0, line.find(','));
    if (key.rfind("K_", 0) == 0 || key == "dim" || key == "mu" || key == "nu") continue;
    CHECK_MESSAGE(v == 0.0, line);
    ++rows;
  }
  CHECK(rows > 10);
}

TEST_CASE("exit codes") {
  const auto root = scratch("codes");
  Scenario bad = builtin_scenario("null");
  bad.N = 3;
  CHECK(run_scenario(bad, root.string()).exit_code == kExitUsage);

  Scenario cfl = builtin_scenario("calibration-2d");
  cfl.name = "cfl";
  cfl.u0_norm = 50.0;
  cfl.dt = 0.2;
  const auto c = run_scenario(cfl, root.string());
  CHECK(c.exit_code == kExitInvariant);
  CHECK(c.message.find("CFL") != std::string::npos);
  const auto status = nlohmann::json::parse(slurp(fs::path(c.directory) / "status.json"));
  CHECK(status["status"] == "invariant_violation");

  Scenario pair = builtin_scenario("rescale-pair");
  pair.pair_tolerance = 1e-16;
  pair.pair_mu = 3.0;
  const auto p = run_scenario(pair, root.string());
  CHECK(p.exit_code == kExitInvariant);

  Scenario crash = builtin_scenario("null");
  crash.name = "crash";
  crash.N = 32;
  crash.mu = 0.01;
  crash.T = 3.0;
  crash.dt = 0.002;
  crash.u0_norm = 60.0;
  crash.q_fraction = 1.0;
  crash.rho_amplitude = 0.5;
  const auto a = run_scenario(crash, root.string());
  CHECK(a.exit_code == kExitAbort);
  CHECK(a.message.find("positivity") != std::string::npos);
}

TEST_CASE("composite scenarios") {
  const auto root = scratch("composite");
  const auto pair = run_scenario(builtin_scenario("rescale-pair"), root.string());
  REQUIRE(pair.exit_code == kExitOk);
  const auto report = nlohmann::json::parse(slurp(fs::path(pair.directory) / "report.json"));
  CHECK(report["status"] == "ok");
  CHECK(report["mismatch"].size() > 10);

  Scenario sweep = builtin_scenario("nu-sweep");
  sweep.N = 16;
  sweep.T = 0.3;
  const auto s = run_scenario(sweep, root.string());
  REQUIRE(s.exit_code == kExitOk);
  const auto sr = nlohmann::json::parse(slurp(fs::path(s.directory) / "report.json"));
  REQUIRE(sr["sweep"].size() == 4);
  for (std::size_t i = 1; i < 4; ++i)
    CHECK(sr["sweep"][i]["div_u_L1Linf"].get<double>() <= sr["sweep"][i - 1]["div_u_L1Linf"].get<double>());
}

TEST_CASE("output root and number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  ::setenv("PGL_OUTPUT_DIR", "/tmp/elsewhere", 1);
  CHECK(output_root("x") == "/tmp/elsewhere");
  ::setenv("PGL_OUTPUT_DIR", "", 1);
  CHECK(output_root("x") == "x");
  ::unsetenv("PGL_OUTPUT_DIR");
}
