#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pgl/diagnostics.hpp"
#include "pgl/field.hpp"
#include "pgl/lagrangian.hpp"
#include "pgl/solver.hpp"

namespace pgl {

/// Process exit codes of the harness.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvariant = 2, kExitAbort = 3 };

/// Plain-text `key = value` scenario, one key per line, `#` comments.
///
/// u0 is a seeded band-limited field split by the Helmholtz projection and
/// rescaled so that, in 2D, ||P u0||_B + (nu/mu)^(1/4) ||Q u0||_B = u0_norm with
/// B = B^(1/2)_(4/3,1) and a share q_fraction carried by the Q term. In 3D the
/// target is the product ||u0||^(1/3)_(B^(6/5)_(5/2,1)) ||u0||^(2/3)_(B^(3/5)_(10/7,1)).
/// rho0 = 1 + rho_amplitude * g / ||g||_inf for a seeded band-limited g.
struct Scenario {
  std::string name = "scenario";
  std::string kind = "single";  ///< single | rescale-pair | nu-sweep
  int dim = 2;
  int N = 32;
  double L = 6.283185307179586;
  double mu = 1.0;
  double mu_prime = 0.0;
  double T = 1.0;
  double dt = 1e-2;
  std::uint64_t seed = 1;
  double u0_norm = 0.5;
  double q_fraction = 0.5;
  double u0_band = 4.0;
  double u0_slope = 1.0;
  double rho_amplitude = 0.1;
  double rho_band = 3.0;
  std::vector<std::string> monitors{"basic"};
  int flow_stride = 0;  ///< 0 disables the Lagrangian post-processing
  double K_constant = 1.0;
  double eta_grad = 0.0;
  double eta_L4 = 0.0;
  double pair_mu = 4.0;                        ///< rescale-pair: viscosity of the second run
  std::vector<double> nu_values{1, 4, 16, 64};  ///< nu-sweep: mu = 1, mu' = nu - 1
  double pair_tolerance = 1e-6;

  /// Throws InvalidArgument naming the offending key.
  void validate() const;
};

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);
std::string format_scenario(const Scenario& s);

std::vector<std::string> builtin_scenarios();
/// Throws InvalidArgument for unknown names.
Scenario builtin_scenario(const std::string& name);

struct InitialData {
  Field rho0;
  Field u0;
  double Pu0_besov = 0.0;  ///< 2D: B^(1/2)_(4/3,1)
  double Qu0_besov = 0.0;
  double smallness = 0.0;  ///< 3D product; 0 in 2D
};

/// Deterministic in the scenario; viscosities enter only through the nu/mu weight.
InitialData generate_initial_data(const Scenario& s);

struct LagrangianSummary {
  double mass_identity = 0.0;
  double liouville = 0.0;
  double neumann_ratio = 0.0;
  double min_jacobian = 0.0;
  std::size_t labels = 0;
};

struct MemberResult {
  Trajectory trajectory;
  DiagnosticsReport report;
  bool has_flow = false;
  LagrangianSummary flow;
};

/// Runs one member from given data and writes monitors.csv, summary.csv,
/// report.json, schema.json and snapshots into `dir` (created if needed).
/// Solver errors propagate; after the run, mass drift above 1e-8 and a negative
/// Gronwall margin below -1e-6 raise InvariantViolation.
MemberResult run_member(const Scenario& s, const InitialData& data, const std::string& dir);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  std::string directory;
};

/// Generates data, runs every member of the scenario and writes artifacts under
/// output_root/name. Errors become exit codes with a message naming the violated
/// invariant; report.json records the status either way.
RunOutcome run_scenario(const Scenario& s, const std::string& output_root);

/// PGL_OUTPUT_DIR when set and nonempty, otherwise `fallback`.
std::string output_root(const std::string& fallback = "pgl_output");

/// %.17g
std::string format_double(double v);

/// Column-scaled deviation max_i |a_i - b_i| / max_i |b_i| per monitor of two
/// trajectories with equal names and row counts; both are normalized to mu = 1.
std::vector<std::pair<std::string, double>> rescale_mismatch(const Trajectory& a, const Trajectory& b);

void write_monitors_csv(std::ostream& out, const Trajectory& tr);
std::string describe_monitor(const std::string& name);

}  // namespace pgl
