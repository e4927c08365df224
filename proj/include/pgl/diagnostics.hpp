#pragma once

#include <map>
#include <string>
#include <vector>

#include "pgl/solver.hpp"
#include "pgl/time_series.hpp"

namespace pgl {

struct SplitResult {
  std::vector<double> breakpoints;  ///< T_0 < T_1 < ... < T_K
  std::vector<double> per_interval_norms;
  double eta = 0.0;
  int K = 1;
};

/// Greedy left-to-right split of [t_0, t_last] so the L_{q,r} norm of U equals
/// eta on every interval but the last (bisection to 1e-12 relative, or to the
/// last double below the crossing); the last interval has norm <= eta. A total norm below eta gives K = 1.
SplitResult split_intervals(const TimeSeries& U, double eta, double q, double r);

/// ceil(grad_energy / eta^2), at least 1.
int k_bounds(double grad_energy, double eta);
/// [C (||P u0||^4 + nu ||Q u0||^4) exp(C ||u0||_{L2}^2)] + 1 with the Besov
/// norms of the projected data and an empirical constant C; may be +inf.
double k_L41(double Pu0_besov, double Qu0_besov, double u0_L2, double nu, double C);

/// a0 e^I + e^I - 1.
double gronwall_density_bound(double div_u_int, double a0_norm);

struct Functionals3D {
  double Xi = 0.0, Psi = 0.0, Pi = 0.0;
  double Xi0 = 0.0, Psi0 = 0.0;
};

/// Xi, Psi, Pi from a 3D trajectory normalized to mu = 1. Throws
/// InvalidArgument naming the first missing monitor.
Functionals3D functionals_3d(const Trajectory& tr);

/// The run seen through (rho, u/mu)(t/mu): mu = 1, mu' -> mu'/mu, times scaled
/// by mu and every monitor by mu^rescale_exponent.
Trajectory normalized(const Trajectory& tr);

struct DiagnosticsConfig {
  double K_constant = 1.0;  ///< empirical C in the K formula and the ratios
  double eta_grad = 0.0;    ///< 0 selects ||grad u||_{L2(L2)} / sqrt(3.5), so K = 4
  double eta_L4 = 0.0;      ///< 0 selects ||u||_{L_{4,1}(L4)} / 4^(1/4)
};

struct DiagnosticsReport {
  int dim = 2;
  double mu = 1.0, mu_prime = 0.0, nu = 1.0;  ///< normalized coefficients
  double energy_budget_residual = 0.0;
  double mass_drift = 0.0;
  double grad_energy = 0.0;  ///< int ||grad u||_{L2}^2 dt
  double div_u_L1Linf = 0.0;
  double grad_u_L1Linf = 0.0;
  double grad_u_weighted = 0.0;  ///< int t ||grad u||_inf^2 dt
  double rho0_deviation = 0.0;
  double rho_deviation_max = 0.0;
  double gronwall_bound = 0.0;
  double gronwall_margin = 0.0;  ///< min over t of bound(t) - ||rho(t) - 1||_inf
  double eta_grad = 0.0, eta_L4 = 0.0;
  int K_energy = 1;      ///< k_bounds(||grad u||_{L_{2,2}(L2)}^2, eta_grad)
  int K_split_grad = 1;  ///< split of ||grad u||_{L2} in L_2 time
  int K_split_L4 = 1;    ///< split of ||u||_{L4} in L_{4,1} time
  double K_L41 = 0;      ///< K formula, 2D with theorem monitors only
  SplitResult split_grad, split_L4;
  std::vector<double> X_k;
  double X_fit_C = 0.0;
  bool has_3d = false;
  Functionals3D functionals;
  double smallness_product = 0.0;  ///< Xi0^{1/3} Psi0^{2/3}
  std::map<std::string, double> inequality_ratios;
};

DiagnosticsReport diagnose(const Trajectory& tr, const DiagnosticsConfig& cfg = {});

/// Ordered names of the numeric report entries, and their values.
std::vector<std::pair<std::string, double>> report_entries(const DiagnosticsReport& r);

}  // namespace pgl
