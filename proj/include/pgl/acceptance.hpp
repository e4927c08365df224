#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pgl {

enum class AcceptanceLevel { quick, full };

struct AcceptanceOptions {
  AcceptanceLevel level = AcceptanceLevel::quick;
  /// Negative control: decompose with the corrupted dyadic partition.
  bool corrupted_partition = false;
  /// Empty runs all twelve.
  std::vector<int> criteria;
  /// Scratch directory for scenario artifacts.
  std::string output_root = "pglab_verify";
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Pinned thresholds of the suite.
namespace tolerance {
inline constexpr double lorentz_lp = 1e-10;
inline constexpr double lorentz_power = 1e-10;
inline constexpr double lorentz_indicator = 1e-12;
inline constexpr double lorentz_seconds = 10.0;
inline constexpr double spectral_mode = 1e-12;
inline constexpr double spectral_div_grad = 1e-10;
inline constexpr double spectral_reconstruction = 1e-12;
inline constexpr double spectral_seconds = 5.0;
inline constexpr double heat_mode = 1e-12;
inline constexpr double heat_forced = 1e-8;
inline constexpr double heat_amplitude = 1e-12;
inline constexpr double heat_mu_spread = 0.10;
inline constexpr double heat_seconds = 120.0;
inline constexpr double exponent_relation = 1e-12;
inline constexpr double mass = 1e-8;
inline constexpr double energy = 1e-6;
inline constexpr double decay_rate = 1e-4;
inline constexpr double rescale = 1e-6;
inline constexpr double split_closed_form = 1e-8;
inline constexpr double gronwall_slack = 1e-6;
inline constexpr double flow_closed_form = 1e-8;
inline constexpr double flow_round_trip = 1e-7;
inline constexpr double flow_mass_identity = 1e-3;
inline constexpr double flow_adjugate = 1e-10;
inline constexpr double gap_shrink = 2.0;
/// I1 <= grad_integral_constant * rhs on the 2D corpus.
inline constexpr double grad_integral_constant = 0.5;
/// Smallness threshold and Xi / Xi0 bound of the 3D regime.
inline constexpr double small_data_threshold = 4.0;
inline constexpr double xi_growth = 5.0;
inline constexpr double pi_band_lo = 0.15, pi_band_hi = 0.25;
inline constexpr double grad_band_lo = 0.01, grad_band_hi = 0.03;
}  // namespace tolerance

/// Runs the selected criteria, printing one PASS/FAIL line per criterion.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace pgl
