#include "pgl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <regex>
#include <tuple>

#include "pgl/besov.hpp"
#include "pgl/errors.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

namespace {

using cplx = std::complex<double>;

// Derivative symbols (Nyquist index of each axis zeroed) and |xi|^2 per mode.
struct ModeTable {
  std::vector<std::array<double, 3>> k;
  std::vector<double> xi2;
  std::vector<char> band;

  explicit ModeTable(const Torus& torus) {
    const std::size_t modes = torus.num_modes();
    const double w = torus.base_frequency();
    k.resize(modes);
    xi2.resize(modes);
    band.resize(modes);
    for (std::size_t m = 0; m < modes; ++m) {
      const auto kv = torus.wavevector(m);
      double s = 0.0;
      for (int a = 0; a < torus.dim(); ++a) {
        const auto ka = kv[static_cast<std::size_t>(a)];
        const double xi = w * ka;
        s += xi * xi;
        k[m][static_cast<std::size_t>(a)] = std::abs(ka) == torus.n() / 2 ? 0.0 : xi;
      }
      xi2[m] = s;
      band[m] = in_dealias_band(torus, kv) ? 1 : 0;
    }
  }

  static const ModeTable& get(const Torus& torus) {
    static std::mutex lock;
    std::lock_guard<std::mutex> g(lock);
    static std::map<std::tuple<int, int, double>, std::unique_ptr<ModeTable>> by_side;
    auto& slot = by_side[{torus.dim(), torus.n(), torus.side_length()}];
    if (!slot) slot = std::make_unique<ModeTable>(torus);
    return *slot;
  }
};

double k_squared(const std::array<double, 3>& k, int d) {
  double s = 0.0;
  for (int a = 0; a < d; ++a) s += k[static_cast<std::size_t>(a)] * k[static_cast<std::size_t>(a)];
  return s;
}

// Potential part of a vector spectrum.
Spectrum potential_part(const Spectrum& u, const ModeTable& mt) {
  const int d = u.torus().dim();
  Spectrum q(u.torus(), d);
  for (std::size_t m = 0; m < mt.k.size(); ++m) {
    const double kk = k_squared(mt.k[m], d);
    if (kk == 0.0) continue;
    cplx dot{0.0, 0.0};
    for (int a = 0; a < d; ++a) dot += mt.k[m][static_cast<std::size_t>(a)] * u.component(a)[m];
    dot /= kk;
    for (int a = 0; a < d; ++a) q.component(a)[m] = mt.k[m][static_cast<std::size_t>(a)] * dot;
  }
  return q;
}

Spectrum gradient_of(const Spectrum& s, const ModeTable& mt) {
  const int d = s.torus().dim();
  Spectrum out(s.torus(), s.components() * d);
  for (int c = 0; c < s.components(); ++c) {
    auto src = s.component(c);
    for (int j = 0; j < d; ++j) {
      auto dst = out.component(c * d + j);
      for (std::size_t m = 0; m < mt.k.size(); ++m) dst[m] = cplx{0.0, mt.k[m][static_cast<std::size_t>(j)]} * src[m];
    }
  }
  return out;
}

Spectrum divergence_of(const Spectrum& u, const ModeTable& mt) {
  const int d = u.torus().dim();
  Spectrum out(u.torus(), 1);
  auto dst = out.component(0);
  for (int j = 0; j < d; ++j) {
    auto src = u.component(j);
    for (std::size_t m = 0; m < mt.k.size(); ++m) dst[m] += cplx{0.0, mt.k[m][static_cast<std::size_t>(j)]} * src[m];
  }
  return out;
}

void dealias_with(Spectrum& s, const ModeTable& mt) {
  for (int c = 0; c < s.components(); ++c) {
    auto v = s.component(c);
    for (std::size_t m = 0; m < mt.band.size(); ++m)
      if (!mt.band[m]) v[m] = 0.0;
  }
}

bool spectrum_finite(const Spectrum& s) {
  for (int c = 0; c < s.components(); ++c)
    for (const auto& z : s.component(c))
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

std::string at_time(long step, double t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " (step %ld, t = %.17g)", step, t);
  return buf;
}

}  // namespace

HelmholtzPair helmholtz(const Field& u) {
  if (u.components() != u.torus().dim()) throw InvalidArgument("helmholtz needs a vector field with dim components");
  u.require_finite("helmholtz");
  const auto& mt = ModeTable::get(u.torus());
  const Spectrum uh = forward(u);
  Spectrum q = potential_part(uh, mt);
  Spectrum p = uh;
  p.add_scaled(q, -1.0);
  return {inverse(p), inverse(q)};
}

void State::validate() const {
  const Torus& torus = u.torus();
  if (u.components() != torus.dim()) throw InvalidArgument("state velocity needs dim components");
  if (rho.components() != 1 || !(rho.torus() == torus)) throw InvalidArgument("state density must be a scalar on the velocity torus");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("state needs mu > 0");
  if (!std::isfinite(mu_prime) || !(mu + mu_prime > 0.0)) throw InvalidArgument("state needs mu + mu' > 0");
  if (torus.dim() == 3 && mu_prime != 0.0) throw InvalidArgument("3D state needs mu' = 0");
  u.require_finite("state velocity");
  rho.require_finite("state density");
  for (double r : rho.values())
    if (!(r > 0.0)) throw InvalidArgument("state density must be positive everywhere");
}

std::pair<double, double> energy(const State& s) {
  s.validate();
  const Torus& torus = s.u.torus();
  const int d = torus.dim();
  const auto& mt = ModeTable::get(torus);
  const Spectrum uh = forward(s.u);
  const Field g = inverse(gradient_of(uh, mt));
  const Field div = inverse(divergence_of(uh, mt));
  double kin = 0.0, grad2 = 0.0, div2 = 0.0;
  const auto rho = s.rho.component(0);
  for (std::size_t i = 0; i < torus.num_points(); ++i) {
    double u2 = 0.0;
    for (int c = 0; c < d; ++c) u2 += s.u.component(c)[i] * s.u.component(c)[i];
    kin += rho[i] * u2;
  }
  for (double v : g.values()) grad2 += v * v;
  for (double v : div.values()) div2 += v * v;
  const double h = torus.cell_volume();
  return {0.5 * kin * h, (s.mu * grad2 + s.mu_prime * div2) * h};
}

double cfl_limit(const State& s) {
  double peak = 0.0;
  for (double v : s.u.magnitude()) peak = std::max(peak, v);
  return peak == 0.0 ? kInfinity : 0.5 * s.u.torus().spacing() / peak;
}

State step(const State& s, double dt) {
  Integrator in(s);
  in.step(dt);
  return in.state();
}

Integrator::Integrator(const State& s)
    : torus_(s.u.torus()), mu_(s.mu), mu_prime_(s.mu_prime), t_(s.t), u_(forward(s.u)), rho_(forward(s.rho)) {
  s.validate();
}

State Integrator::state() const {
  State s;
  s.t = t_;
  s.u = inverse(u_);
  s.rho = inverse(rho_);
  s.mu = mu_;
  s.mu_prime = mu_prime_;
  return s;
}

Spectrum Integrator::viscous(const Spectrum& u) const {
  const auto& mt = ModeTable::get(torus_);
  const int d = torus_.dim();
  Spectrum out(torus_, d);
  for (std::size_t m = 0; m < mt.k.size(); ++m) {
    cplx dot{0.0, 0.0};
    for (int a = 0; a < d; ++a) dot += mt.k[m][static_cast<std::size_t>(a)] * u.component(a)[m];
    for (int a = 0; a < d; ++a)
      out.component(a)[m] = -mu_ * mt.xi2[m] * u.component(a)[m] - mu_prime_ * mt.k[m][static_cast<std::size_t>(a)] * dot;
  }
  return out;
}

Integrator::Rates Integrator::rates(const Spectrum& uh, const Spectrum& rh, bool check) const {
  const auto& mt = ModeTable::get(torus_);
  const int d = torus_.dim();
  const std::size_t np = torus_.num_points();
  Field u = inverse(uh);
  const Field rho = inverse(rh);
  const auto r = rho.component(0);
  Rates out{Spectrum(torus_, d), Spectrum(torus_, 1), 0.0};
  if (check) {
    check_state(u, rho);
    for (double v : u.magnitude()) out.peak_speed = std::max(out.peak_speed, v);
  }
  {
    const Field g = inverse(gradient_of(uh, mt));
    Field n = inverse(viscous(uh));
    for (int c = 0; c < d; ++c) {
      auto dst = n.component(c);
      for (std::size_t i = 0; i < np; ++i) dst[i] *= 1.0 / r[i] - 1.0;
      for (int j = 0; j < d; ++j) {
        const auto uj = u.component(j);
        const auto gcj = g.component(c * d + j);
        for (std::size_t i = 0; i < np; ++i) dst[i] -= uj[i] * gcj[i];
      }
    }
    out.velocity = forward(n);
    dealias_with(out.velocity, mt);
  }
  for (int c = 0; c < d; ++c) {
    auto v = u.component(c);
    for (std::size_t i = 0; i < np; ++i) v[i] *= r[i];
  }
  Spectrum fh = forward(u);
  dealias_with(fh, mt);
  out.density = divergence_of(fh, mt);
  out.density *= -1.0;
  return out;
}

Spectrum Integrator::velocity_rate(const Spectrum& u, const Spectrum& rho) const {
  Spectrum out = viscous(u);
  out += rates(u, rho, false).velocity;
  return out;
}

void Integrator::prepare(double dt) {
  if (dt == cached_dt_) return;
  const auto& mt = ModeTable::get(torus_);
  const std::size_t modes = mt.xi2.size();
  p_half_.resize(modes);
  p_full_.resize(modes);
  q_half_.resize(modes);
  q_full_.resize(modes);
  const double nu = mu_ + mu_prime_;
  for (std::size_t m = 0; m < modes; ++m) {
    p_half_[m] = std::exp(-mu_ * mt.xi2[m] * 0.5 * dt);
    p_full_[m] = std::exp(-mu_ * mt.xi2[m] * dt);
    q_half_[m] = std::exp(-nu * mt.xi2[m] * 0.5 * dt);
    q_full_[m] = std::exp(-nu * mt.xi2[m] * dt);
  }
  cached_dt_ = dt;
}

void Integrator::apply_semigroup(Spectrum& s, int which) const {
  const auto& mt = ModeTable::get(torus_);
  const int d = torus_.dim();
  const auto& pf = which == 1 ? p_half_ : p_full_;
  const auto& qf = which == 1 ? q_half_ : q_full_;
  for (std::size_t m = 0; m < mt.k.size(); ++m) {
    const double kk = k_squared(mt.k[m], d);
    if (kk == 0.0 || pf[m] == qf[m]) {
      for (int a = 0; a < d; ++a) s.component(a)[m] *= pf[m];
      continue;
    }
    cplx dot{0.0, 0.0};
    for (int a = 0; a < d; ++a) dot += mt.k[m][static_cast<std::size_t>(a)] * s.component(a)[m];
    dot /= kk;
    for (int a = 0; a < d; ++a) {
      const cplx q = mt.k[m][static_cast<std::size_t>(a)] * dot;
      s.component(a)[m] = pf[m] * (s.component(a)[m] - q) + qf[m] * q;
    }
  }
}

void Integrator::check_state(const Field& u_phys, const Field& rho_phys) const {
  for (double r : rho_phys.values()) {
    if (!std::isfinite(r)) throw NumericalAbort("non-finite density" + at_time(steps_, t_));
    if (!(r > 0.0)) throw NumericalAbort("density positivity violated: rho <= 0" + at_time(steps_, t_));
  }
  if (!u_phys.is_finite()) throw NumericalAbort("non-finite velocity" + at_time(steps_, t_));
}

void Integrator::step(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive and finite");
  const double h = dt;
  const Rates a = rates(u_, rho_, true);
  if (a.peak_speed > 0.0 && dt > 0.5 * torus_.spacing() / a.peak_speed) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "CFL violated: dt = %.6g > 0.5 h / max|u| = %.6g", dt,
                  0.5 * torus_.spacing() / a.peak_speed);
    throw InvariantViolation(buf + at_time(steps_, t_));
  }
  prepare(dt);

  Spectrum ua = u_;
  ua.add_scaled(a.velocity, 0.5 * h);
  apply_semigroup(ua, 1);
  Spectrum rho_a = rho_;
  rho_a.add_scaled(a.density, 0.5 * h);
  const Rates b = rates(ua, rho_a, false);

  Spectrum e_half_u = u_;
  apply_semigroup(e_half_u, 1);
  Spectrum ub = e_half_u;
  ub.add_scaled(b.velocity, 0.5 * h);
  Spectrum rho_b = rho_;
  rho_b.add_scaled(b.density, 0.5 * h);
  const Rates c = rates(ub, rho_b, false);

  Spectrum e_full_u = u_;
  apply_semigroup(e_full_u, 2);
  Spectrum e_half_c = c.velocity;
  apply_semigroup(e_half_c, 1);
  Spectrum uc = e_full_u;
  uc.add_scaled(e_half_c, h);
  Spectrum rho_c = rho_;
  rho_c.add_scaled(c.density, h);
  const Rates dd = rates(uc, rho_c, false);

  Spectrum ea = a.velocity;
  apply_semigroup(ea, 2);
  Spectrum bc = b.velocity;
  bc += c.velocity;
  apply_semigroup(bc, 1);
  Spectrum next = e_full_u;
  next.add_scaled(ea, h / 6.0);
  next.add_scaled(bc, h / 3.0);
  next.add_scaled(dd.velocity, h / 6.0);

  Spectrum rho_next = rho_;
  rho_next.add_scaled(a.density, h / 6.0);
  rho_next.add_scaled(b.density, h / 3.0);
  rho_next.add_scaled(c.density, h / 3.0);
  rho_next.add_scaled(dd.density, h / 6.0);

  ++steps_;
  t_ += h;
  if (!spectrum_finite(next) || !spectrum_finite(rho_next))
    throw NumericalAbort("non-finite state after step" + at_time(steps_, t_));
  u_ = std::move(next);
  rho_ = std::move(rho_next);
  const Field rho_phys = inverse(rho_);
  for (double r : rho_phys.values())
    if (!(r > 0.0)) throw NumericalAbort("density positivity violated: rho <= 0" + at_time(steps_, t_));
}

// ---------------------------------------------------------------- monitors

std::string format_exponent(double x) {
  if (std::isinf(x)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

namespace {

double parse_exponent(const std::string& s) {
  if (s == "inf") return kInfinity;
  const double x = std::stod(s);
  for (int q = 1; q <= 16; ++q) {
    const double cand = std::round(x * q) / q;
    if (format_exponent(cand) == s) return cand;
  }
  return x;
}

const std::vector<std::string>& scalar_monitors() {
  static const std::vector<std::string> names{"kinetic",     "dissipation", "mass",        "rho_dev_inf",
                                              "div_u_inf",   "grad_u_inf",  "grad_u_L2sq", "div_u_L2sq"};
  return names;
}

const std::regex& lp_pattern() {
  static const std::regex re(
      "^(u|Pu|Qu|u_t|hess_u|hess_Pu|grad_div_u|tu_t|t_hess_u|t_hess_Pu|t_grad_div_u)_L([0-9.]+|inf)$");
  return re;
}

const std::regex& besov_pattern() {
  static const std::regex re("^(u|Pu|Qu|tu|tPu|tQu)_Besov_s(-?[0-9.]+)_p([0-9.]+|inf)_r([0-9.]+|inf)$");
  return re;
}

std::string lp_name(const std::string& q, double p) { return q + "_L" + format_exponent(p); }

std::string besov_name(const std::string& f, double s, double p, double r) {
  return f + "_Besov_s" + format_exponent(s) + "_p" + format_exponent(p) + "_r" + format_exponent(r);
}

}  // namespace

std::vector<std::string> monitor_set(const std::string& name) {
  std::vector<std::string> out{"kinetic",     "dissipation", "mass",      "u_L2",
                               "u_L4",        "rho_dev_inf", "div_u_inf", "grad_u_inf",
                               "grad_u_L2sq", "div_u_L2sq"};
  if (name == "basic") return out;
  if (name == "theorem2d") {
    const double p = 4.0 / 3.0;
    for (const char* q : {"Pu", "Qu"}) out.push_back(lp_name(q, 4.0));
    for (const char* q : {"u_t", "hess_u", "hess_Pu", "grad_div_u"}) out.push_back(lp_name(q, p));
    for (const char* q : {"tu_t", "t_hess_u", "t_hess_Pu", "t_grad_div_u"}) out.push_back(lp_name(q, 4.0));
    for (const char* f : {"Pu", "Qu"}) out.push_back(besov_name(f, 0.5, p, 1.0));
    for (const char* f : {"tPu", "tQu"}) out.push_back(besov_name(f, 1.5, 4.0, 1.0));
    return out;
  }
  if (name == "theorem3d") {
    for (double p : {2.5, 10.0 / 7.0})
      for (const char* q : {"u_t", "hess_u"}) out.push_back(lp_name(q, p));
    for (const char* q : {"tu_t", "t_hess_u"}) out.push_back(lp_name(q, 10.0 / 3.0));
    out.push_back(besov_name("u", 1.2, 2.5, 1.0));
    out.push_back(besov_name("u", 0.6, 10.0 / 7.0, 1.0));
    out.push_back(besov_name("tu", 1.4, 10.0 / 3.0, 1.0));
    return out;
  }
  throw InvalidArgument("unknown monitor set '" + name + "'");
}

std::vector<std::string> expand_monitors(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  auto add = [&](const std::string& n) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  for (const auto& n : names) {
    if (n == "basic" || n == "theorem2d" || n == "theorem3d") {
      for (const auto& m : monitor_set(n)) add(m);
      continue;
    }
    std::smatch mm;
    const bool known = std::find(scalar_monitors().begin(), scalar_monitors().end(), n) != scalar_monitors().end();
    if (!known && !std::regex_match(n, mm, lp_pattern()) && !std::regex_match(n, mm, besov_pattern()))
      throw InvalidArgument("unknown monitor '" + n + "'");
    add(n);
  }
  return out;
}

int rescale_exponent(const std::string& n) {
  static const std::map<std::string, int> fixed{{"kinetic", -2},    {"dissipation", -3}, {"mass", 0},
                                                {"rho_dev_inf", 0}, {"div_u_inf", -1},   {"grad_u_inf", -1},
                                                {"grad_u_L2sq", -2}, {"div_u_L2sq", -2}};
  if (auto it = fixed.find(n); it != fixed.end()) return it->second;
  std::smatch m;
  if (std::regex_match(n, m, lp_pattern())) {
    const std::string q = m[1];
    if (q == "u_t") return -2;
    if (q.rfind("t_", 0) == 0) return 0;
    return -1;
  }
  if (std::regex_match(n, m, besov_pattern())) return m[1].str()[0] == 't' ? 0 : -1;
  throw InvalidArgument("unknown monitor '" + n + "'");
}

namespace {

// Lazily computed fields of one integrator state.
class MonitorContext {
 public:
  explicit MonitorContext(const Integrator& in)
      : in_(in), torus_(in.torus()), mt_(ModeTable::get(torus_)), d_(torus_.dim()) {}

  double value(const std::string& n) {
    const double t = in_.time();
    if (n == "kinetic" || n == "dissipation") {
      const auto e = energies();
      return n == "kinetic" ? e.first : e.second;
    }
    if (n == "mass") return in_.rho_hat().component(0)[0].real() * torus_.cell_volume();
    if (n == "rho_dev_inf") {
      double peak = 0.0;
      for (double r : rho().values()) peak = std::max(peak, std::abs(r - 1.0));
      return peak;
    }
    if (n == "div_u_inf") return lp_norm(div(), kInfinity);
    if (n == "grad_u_inf") return lp_norm(grad(), kInfinity);
    if (n == "grad_u_L2sq") return square_integral(grad());
    if (n == "div_u_L2sq") return square_integral(div());
    std::smatch m;
    if (std::regex_match(n, m, lp_pattern())) {
      const std::string q = m[1];
      const double p = parse_exponent(m[2]);
      if (q == "u") return lp_norm(u(), p);
      if (q == "Pu") return lp_norm(pu(), p);
      if (q == "Qu") return lp_norm(qu(), p);
      if (q == "u_t") return lp_norm(ut(), p);
      if (q == "hess_u") return lp_norm(hess(), p);
      if (q == "hess_Pu") return lp_norm(hess_p(), p);
      if (q == "grad_div_u") return lp_norm(grad_div(), p);
      if (q == "t_hess_u") return t * lp_norm(hess(), p);
      if (q == "t_hess_Pu") return t * lp_norm(hess_p(), p);
      if (q == "t_grad_div_u") return t * lp_norm(grad_div(), p);
      if (q == "tu_t") {
        Field w = ut();
        w *= t;
        w += u();
        return lp_norm(w, p);
      }
    }
    if (std::regex_match(n, m, besov_pattern())) {
      std::string f = m[1];
      double weight = 1.0;
      if (f[0] == 't') {
        weight = t;
        f = f.substr(1);
      }
      const double s = parse_exponent(m[2]), p = parse_exponent(m[3]), r = parse_exponent(m[4]);
      return weight * besov_norm(decomposition(f), s, p, r);
    }
    throw InvalidArgument("unknown monitor '" + n + "'");
  }

 private:
  static double square_integral(const Field& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += v * v;
    return acc * f.torus().cell_volume();
  }

  std::pair<double, double> energies() {
    const auto& uu = u();
    const auto r = rho().component(0);
    double kin = 0.0;
    for (std::size_t i = 0; i < torus_.num_points(); ++i) {
      double u2 = 0.0;
      for (int c = 0; c < d_; ++c) u2 += uu.component(c)[i] * uu.component(c)[i];
      kin += r[i] * u2;
    }
    kin *= 0.5 * torus_.cell_volume();
    const double diss = in_.mu() * square_integral(grad()) + in_.mu_prime() * square_integral(div());
    return {kin, diss};
  }

  const Field& u() { return cached(u_, [&] { return inverse(in_.u_hat()); }); }
  const Field& rho() { return cached(rho_, [&] { return inverse(in_.rho_hat()); }); }
  const Field& grad() { return cached(grad_, [&] { return inverse(gradient_of(in_.u_hat(), mt_)); }); }
  const Field& div() { return cached(div_, [&] { return inverse(divergence_of(in_.u_hat(), mt_)); }); }
  const Spectrum& q_hat() { return cached(q_hat_, [&] { return potential_part(in_.u_hat(), mt_); }); }
  const Spectrum& p_hat() {
    return cached(p_hat_, [&] {
      Spectrum p = in_.u_hat();
      p.add_scaled(q_hat(), -1.0);
      return p;
    });
  }
  const Field& pu() { return cached(pu_, [&] { return inverse(p_hat()); }); }
  const Field& qu() { return cached(qu_, [&] { return inverse(q_hat()); }); }
  const Field& ut() { return cached(ut_, [&] { return inverse(in_.velocity_rate(in_.u_hat(), in_.rho_hat())); }); }
  const Field& hess() {
    return cached(hess_, [&] { return inverse(gradient_of(gradient_of(in_.u_hat(), mt_), mt_)); });
  }
  const Field& hess_p() {
    return cached(hess_p_, [&] { return inverse(gradient_of(gradient_of(p_hat(), mt_), mt_)); });
  }
  const Field& grad_div() {
    return cached(grad_div_, [&] { return inverse(gradient_of(divergence_of(in_.u_hat(), mt_), mt_)); });
  }
  const DyadicDecomposition& decomposition(const std::string& f) {
    auto it = decomps_.find(f);
    if (it == decomps_.end()) {
      const Field& src = f == "u" ? u() : f == "Pu" ? pu() : qu();
      it = decomps_.emplace(f, decompose(src)).first;
    }
    return it->second;
  }

  template <class T, class F>
  static const T& cached(std::optional<T>& slot, F&& make) {
    if (!slot) slot.emplace(make());
    return *slot;
  }

  const Integrator& in_;
  Torus torus_;
  const ModeTable& mt_;
  int d_;
  std::optional<Field> u_, rho_, grad_, div_, pu_, qu_, ut_, hess_, hess_p_, grad_div_;
  std::optional<Spectrum> q_hat_, p_hat_;
  std::map<std::string, DyadicDecomposition> decomps_;
};

}  // namespace

std::vector<double> evaluate_monitors(const Integrator& in, const std::vector<std::string>& names) {
  MonitorContext ctx(in);
  std::vector<double> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(ctx.value(n));
  return out;
}

bool Trajectory::has(const std::string& name) const {
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::size_t Trajectory::index(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InvalidArgument("trajectory is missing monitor '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

TimeSeries Trajectory::series(const std::string& name) const {
  const std::size_t j = index(name);
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& row : rows) v.push_back(row[j]);
  return TimeSeries(times, std::move(v));
}

Trajectory run(const State& initial, const RunOptions& opts) {
  if (!(opts.dt > 0.0) || !(opts.T > 0.0)) throw InvalidArgument("run needs T > 0 and dt > 0");
  const double ratio = opts.T / opts.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("run needs T/dt to be an integer");
  const long steps = std::lround(ratio);

  Trajectory tr;
  tr.names = expand_monitors(opts.monitors);
  tr.dim = initial.u.torus().dim();
  tr.mu = initial.mu;
  tr.mu_prime = initial.mu_prime;
  tr.dt = opts.dt;
  tr.rho0 = initial.rho;
  tr.u0 = initial.u;

  Integrator in(initial);
  auto record = [&] {
    tr.times.push_back(in.time());
    tr.rows.push_back(evaluate_monitors(in, tr.names));
    if (opts.observer) opts.observer(in);
  };
  record();
  for (long n = 0; n < steps; ++n) {
    in.step(opts.dt);
    record();
  }
  return tr;
}

}  // namespace pgl
