#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgl/field.hpp"
#include "pgl/time_series.hpp"

namespace pgl {

struct HelmholtzPair {
  Field P_part;  ///< divergence-free part, carries the mean
  Field Q_part;  ///< potential (gradient) part
};

/// Spectral Helmholtz split: Q(k) = k (k . u(k)) / |k|^2, P = u - Q.
HelmholtzPair helmholtz(const Field& u);

/// Pressureless viscous gas on the torus:
///   rho_t + div(rho u) = 0,  rho (u_t + u . grad u) = mu Lap u + mu' grad div u.
/// In 3D mu' is 0.
struct State {
  double t = 0.0;
  Field rho;
  Field u;
  double mu = 1.0;
  double mu_prime = 0.0;

  double nu() const { return mu + mu_prime; }
  /// Throws InvalidArgument unless rho > 0, u has dim components, mu > 0, mu + mu' > 0.
  void validate() const;
};

/// (kinetic = 1/2 int rho |u|^2, dissipation = int mu |grad u|^2 + mu' (div u)^2).
std::pair<double, double> energy(const State& s);

/// Largest admissible step under dt <= 0.5 h / max|u| (infinity for u = 0).
double cfl_limit(const State& s);

/// One step of size dt. Throws InvariantViolation when dt breaks the CFL
/// bound and NumericalAbort when rho <= 0 or a value is not finite.
State step(const State& s, double dt);

/// Advances (rho, u) in spectral form. The viscous part is integrated exactly
/// per mode on the Helmholtz split (P modes at rate mu |xi|^2, Q modes at
/// (mu + mu') |xi|^2) inside a four-stage Lawson Runge-Kutta scheme; the rest
///   N(u, rho) = -u . grad u + (1/rho - 1)(mu Lap u + mu' grad div u)
/// and the mass flux -div(rho u) are explicit and dealiased.
class Integrator {
 public:
  explicit Integrator(const State& s);

  void step(double dt);

  double time() const { return t_; }
  const Torus& torus() const { return torus_; }
  double mu() const { return mu_; }
  double mu_prime() const { return mu_prime_; }
  const Spectrum& u_hat() const { return u_; }
  const Spectrum& rho_hat() const { return rho_; }
  State state() const;

  /// Spectrum of mu Lap u + mu' grad div u.
  Spectrum viscous(const Spectrum& u) const;
  /// Right-hand side of the velocity equation, u_t = L u + N(u, rho).
  Spectrum velocity_rate(const Spectrum& u, const Spectrum& rho) const;

 private:
  struct Rates {
    Spectrum velocity;  ///< dealiased N(u, rho)
    Spectrum density;   ///< -div of the dealiased mass flux
    double peak_speed;  ///< max |u|, filled when checking
  };
  Rates rates(const Spectrum& u, const Spectrum& rho, bool check) const;
  void apply_semigroup(Spectrum& s, int which) const;
  void prepare(double dt);
  void check_state(const Field& u_phys, const Field& rho_phys) const;

  Torus torus_;
  double mu_, mu_prime_;
  double t_;
  long steps_ = 0;
  Spectrum u_, rho_;
  double cached_dt_ = -1.0;
  // Per mode decay factors for P and Q parts at dt/2 and dt.
  std::vector<double> p_half_, p_full_, q_half_, q_full_;
};

/// Named per-step scalar quantities. Names:
///   kinetic, dissipation, mass, rho_dev_inf, div_u_inf, grad_u_inf,
///   grad_u_L2sq, div_u_L2sq,
///   {u,Pu,Qu,u_t,hess_u,hess_Pu,grad_div_u,tu_t,t_hess_u,t_hess_Pu,t_grad_div_u}_L{p}
///   {u,Pu,Qu,tu,tPu,tQu}_Besov_s{s}_p{p}_r{r}
/// Exponents are printed with %.6g (4/3 -> 1.33333). Sets: basic, theorem2d, theorem3d.
std::vector<std::string> monitor_set(const std::string& name);
/// Expands sets and validates names; throws InvalidArgument naming an unknown monitor.
std::vector<std::string> expand_monitors(const std::vector<std::string>& names);
/// Power e with value(mu = 1 rescaled run) = mu^e value(original run).
int rescale_exponent(const std::string& monitor);
std::string format_exponent(double x);

/// Per-step monitor table of a run.
struct Trajectory {
  int dim = 2;
  double mu = 1.0;
  double mu_prime = 0.0;
  double dt = 0.0;
  Field rho0;
  Field u0;
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<std::vector<double>> rows;

  bool has(const std::string& name) const;
  /// Throws InvalidArgument naming the missing monitor.
  TimeSeries series(const std::string& name) const;
  std::size_t index(const std::string& name) const;
};

struct RunOptions {
  double T = 1.0;
  double dt = 1e-3;
  std::vector<std::string> monitors{"basic"};
  /// Called after every step (and once at t = 0) with the integrator state.
  std::function<void(const Integrator&)> observer;
};

/// Evaluates the requested monitors on the current integrator state.
std::vector<double> evaluate_monitors(const Integrator& in, const std::vector<std::string>& names);

Trajectory run(const State& initial, const RunOptions& opts);

}  // namespace pgl
