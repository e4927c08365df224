#include "pgl/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "pgl/besov.hpp"
#include "pgl/errors.hpp"
#include "pgl/random.hpp"
#include "pgl/snapshot.hpp"
#include "pgl/spectral.hpp"

namespace pgl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("scenario key '" + key + "' needs a number, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("scenario key '" + key + "' needs an integer, got '" + v + "'");
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

double besov_2d(const Field& f) { return besov_norm(f, 0.5, 4.0 / 3.0, 1.0); }

double smallness_3d(const Field& f) {
  return std::cbrt(besov_norm(f, 1.2, 2.5, 1.0)) * std::pow(besov_norm(f, 0.6, 10.0 / 7.0, 1.0), 2.0 / 3.0);
}

void require_key(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw InvalidArgument("scenario key '" + key + "' " + what);
}

struct SummaryKey {
  const char* name;
  const char* description;
};

const std::vector<SummaryKey>& summary_keys() {
  static const std::vector<SummaryKey> keys{
      {"dim", "spatial dimension"},
      {"mu", "shear viscosity after normalization (always 1)"},
      {"mu_prime", "normalized second viscosity mu'/mu"},
      {"nu", "normalized mu + mu'"},
      {"energy_budget_residual", "max_t |E(t) + int_0^t D - E(0)| / E(0)"},
      {"mass_drift", "max_t |M(t) - M(0)| / M(0)"},
      {"grad_energy", "int ||grad u||_L2^2 dt"},
      {"div_u_L1Linf", "int ||div u||_inf dt"},
      {"grad_u_L1Linf", "I1 = int ||grad u||_inf dt"},
      {"grad_u_weighted", "I2 = int t ||grad u||_inf^2 dt"},
      {"rho0_deviation", "||rho0 - 1||_inf"},
      {"rho_deviation_max", "max_t ||rho - 1||_inf"},
      {"gronwall_bound", "a0 e^I + e^I - 1 with I = int ||div u||_inf"},
      {"gronwall_margin", "min_t of the running Gronwall bound minus ||rho - 1||_inf"},
      {"eta_grad", "threshold of the ||grad u||_L2 split in L_2 time"},
      {"eta_L4", "threshold of the ||u||_L4 split in L_{4,1} time"},
      {"K_energy", "ceil(||grad u||^2 / eta_grad^2)"},
      {"K_split_grad", "intervals of the ||grad u||_L2 split"},
      {"K_split_L4", "intervals of the ||u||_L4 split"},
      {"K_L41", "K formula from the Besov norms of the projected data; may be inf"},
      {"X_fit_C", "max_k X_k / (eta_L4 + X_{k-1})"},
      {"Xi", "3D: sup B^{6/5}_{5/2,1} + L_{5/2,1}(L_{5/2}) norms of grad^2 u and u_t"},
      {"Psi", "3D: sup B^{3/5}_{10/7,1} + L_{10/7,1}(L_{10/7}) norms of grad^2 u and u_t"},
      {"Pi", "3D: t-weighted functional at B^{7/5}_{10/3,1}, L_{10/3,1}(L_{10/3})"},
      {"Xi0", "3D: ||u0||_{B^{6/5}_{5/2,1}}"},
      {"Psi0", "3D: ||u0||_{B^{3/5}_{10/7,1}}"},
      {"smallness_product", "3D: Xi0^{1/3} Psi0^{2/3}"},
      {"ratio_energy_L41", "2D: L_{4,1}-type energy functional over its data bound"},
      {"ratio_weighted_energy", "2D: t-weighted functional over its double-exponential bound"},
      {"ratio_div_integral", "2D: nu int ||div u||_inf over its bound"},
      {"ratio_grad_integral", "2D: I1 over ||t grad^2 u||_{L_{4,1}(L4)}^{1/2} ||grad^2 u||_{L_{4/3,1}(L_{4/3})}^{1/2}"},
      {"ratio_xi_growth", "3D: Xi / Xi0"},
      {"ratio_pi_decay", "3D: Pi / Psi0"},
      {"ratio_grad_integral_3d", "3D: I1 / (Psi0^{2/3} Xi0^{1/3})"},
      {"data_Pu0_besov", "2D: ||P u0||_{B^{1/2}_{4/3,1}}"},
      {"data_Qu0_besov", "2D: ||Q u0||_{B^{1/2}_{4/3,1}}"},
      {"data_smallness", "3D: measured smallness product of u0"},
      {"flow_mass_identity", "max |rho(X) J - rho0| / ||rho0||_inf over labels and times"},
      {"flow_liouville", "relative residual of dJ/dt = div u(X) J"},
      {"flow_neumann_ratio", "max |Id - A| / int ||grad u||_inf"},
      {"flow_min_jacobian", "min J over labels and times"},
      {"flow_labels", "number of Lagrangian labels"},
      {"max_mismatch", "largest column-scaled deviation between the paired runs"},
      {"nu_monotone", "1 when int ||div u||_inf is nonincreasing along the sweep"},
  };
  return keys;
}

void write_summary(const std::string& path, const std::vector<std::pair<std::string, double>>& entries) {
  std::ofstream out(path);
  out << "key,value\n";
  for (const auto& [k, v] : entries) out << k << ',' << format_double(v) << '\n';
  if (!out) throw InvalidArgument("cannot write " + path);
}

json schema_json(const Trajectory* tr, const std::vector<std::pair<std::string, double>>& summary) {
  json monitors = json::array();
  if (tr) {
    monitors.push_back({{"name", "t"}, {"description", "time"}});
    for (const auto& n : tr->names)
      monitors.push_back({{"name", n}, {"description", describe_monitor(n)}, {"rescale_exponent", rescale_exponent(n)}});
  }
  json keys = json::array();
  for (const auto& [k, v] : summary) {
    std::string d = k;
    if (k.rfind("deviation_ratio_", 0) == 0) d = "relative difference of " + k.substr(10) + " across the pair";
    if (k.rfind("div_u_L1Linf_nu", 0) == 0) d = "int ||div u||_inf dt at nu = " + k.substr(15);
    for (const auto& sk : summary_keys())
      if (k == sk.name) d = sk.description;
    keys.push_back({{"name", k}, {"description", d}});
  }
  json files = json::object();
  if (tr) files["monitors.csv"] = {{"columns", monitors}, {"format", "%.17g"}};
  files["summary.csv"] = {{"columns", json::array({{{"name", "key"}, {"description", "quantity name"}},
                                                   {{"name", "value"}, {"description", "quantity value"}}})},
                          {"keys", keys},
                          {"format", "%.17g"}};
  return {{"format_version", 1}, {"rng_algorithm", kRngAlgorithm}, {"files", files},
          {"snapshots", {{"field", "PGLF v1, little-endian"}, {"flow", "PGLF field followed by FLOW block"}}}};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw InvalidArgument("cannot write " + path);
}

json scenario_json(const Scenario& s) {
  return {{"name", s.name},         {"kind", s.kind},
          {"dim", s.dim},           {"N", s.N},
          {"L", s.L},               {"mu", s.mu},
          {"mu_prime", s.mu_prime}, {"T", s.T},
          {"dt", s.dt},             {"seed", s.seed},
          {"u0_norm", s.u0_norm},   {"q_fraction", s.q_fraction},
          {"u0_band", s.u0_band},   {"u0_slope", s.u0_slope},
          {"rho_amplitude", s.rho_amplitude}, {"rho_band", s.rho_band},
          {"monitors", s.monitors}, {"flow_stride", s.flow_stride},
          {"K_constant", s.K_constant}, {"eta_grad", s.eta_grad},
          {"eta_L4", s.eta_L4},     {"pair_mu", s.pair_mu},
          {"nu_values", s.nu_values}, {"pair_tolerance", s.pair_tolerance}};
}

std::vector<std::pair<std::string, double>> data_entries(const Scenario& s, const InitialData& d) {
  if (s.dim == 2) return {{"data_Pu0_besov", d.Pu0_besov}, {"data_Qu0_besov", d.Qu0_besov}};
  return {{"data_smallness", d.smallness}};
}

}  // namespace

void Scenario::validate() const {
  require_key(kind == "single" || kind == "rescale-pair" || kind == "nu-sweep", "kind",
              "must be single, rescale-pair or nu-sweep");
  require_key(!name.empty() && name.find('/') == std::string::npos, "name", "must be a plain nonempty name");
  require_key(dim == 2 || dim == 3, "dim", "must be 2 or 3");
  require_key(N >= 8 && (N & (N - 1)) == 0, "N", "must be a power of two >= 8");
  require_key(L > 0 && std::isfinite(L), "L", "must be positive");
  require_key(mu > 0 && std::isfinite(mu), "mu", "must be positive");
  require_key(std::isfinite(mu_prime) && mu + mu_prime > 0, "mu_prime", "needs mu + mu_prime > 0");
  require_key(dim == 2 || mu_prime == 0.0, "mu_prime", "must be 0 in 3D");
  require_key(T > 0 && std::isfinite(T), "T", "must be positive");
  require_key(dt > 0 && dt <= T, "dt", "must lie in (0, T]");
  const double steps = T / dt;
  require_key(std::abs(steps - std::round(steps)) <= 1e-9 * steps, "dt", "must divide T");
  require_key(u0_norm >= 0 && std::isfinite(u0_norm), "u0_norm", "must be >= 0");
  require_key(q_fraction >= 0 && q_fraction <= 1, "q_fraction", "must lie in [0, 1]");
  require_key(u0_band >= 1, "u0_band", "must be >= 1");
  require_key(rho_amplitude >= 0 && rho_amplitude < 1, "rho_amplitude", "must lie in [0, 1)");
  require_key(rho_band >= 1, "rho_band", "must be >= 1");
  require_key(flow_stride >= 0, "flow_stride", "must be >= 0");
  require_key(K_constant > 0, "K_constant", "must be positive");
  require_key(eta_grad >= 0 && eta_L4 >= 0, "eta_grad", "and eta_L4 must be >= 0");
  require_key(pair_mu > 0, "pair_mu", "must be positive");
  require_key(pair_tolerance > 0, "pair_tolerance", "must be positive");
  require_key(!nu_values.empty(), "nu_values", "must be nonempty");
  for (double nu : nu_values) require_key(nu > 0, "nu_values", "must be positive");
  require_key(kind != "nu-sweep" || dim == 2, "kind", "nu-sweep needs dim = 2");
  try {
    expand_monitors(monitors);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(std::string("scenario key 'monitors': ") + e.what());
  }
}

Scenario parse_scenario(std::istream& in) {
  Scenario s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("scenario line " + std::to_string(lineno) + " has no '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (key == "name") s.name = v;
    else if (key == "kind") s.kind = v;
    else if (key == "dim") s.dim = static_cast<int>(parse_int(key, v));
    else if (key == "N") s.N = static_cast<int>(parse_int(key, v));
    else if (key == "L") s.L = parse_real(key, v);
    else if (key == "mu") s.mu = parse_real(key, v);
    else if (key == "mu_prime") s.mu_prime = parse_real(key, v);
    else if (key == "T") s.T = parse_real(key, v);
    else if (key == "dt") s.dt = parse_real(key, v);
    else if (key == "seed") {
      if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidArgument("scenario key 'seed' needs an unsigned integer, got '" + v + "'");
      s.seed = std::stoull(v);
    }
    else if (key == "u0_norm") s.u0_norm = parse_real(key, v);
    else if (key == "q_fraction") s.q_fraction = parse_real(key, v);
    else if (key == "u0_band") s.u0_band = parse_real(key, v);
    else if (key == "u0_slope") s.u0_slope = parse_real(key, v);
    else if (key == "rho_amplitude") s.rho_amplitude = parse_real(key, v);
    else if (key == "rho_band") s.rho_band = parse_real(key, v);
    else if (key == "monitors") s.monitors = split_list(v);
    else if (key == "flow_stride") s.flow_stride = static_cast<int>(parse_int(key, v));
    else if (key == "K_constant") s.K_constant = parse_real(key, v);
    else if (key == "eta_grad") s.eta_grad = parse_real(key, v);
    else if (key == "eta_L4") s.eta_L4 = parse_real(key, v);
    else if (key == "pair_mu") s.pair_mu = parse_real(key, v);
    else if (key == "pair_tolerance") s.pair_tolerance = parse_real(key, v);
    else if (key == "nu_values") {
      s.nu_values.clear();
      for (const auto& item : split_list(v)) s.nu_values.push_back(parse_real(key, item));
    } else
      throw InvalidArgument("unknown scenario key '" + key + "' on line " + std::to_string(lineno));
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scenario file " + path);
  return parse_scenario(in);
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream o;
  o << "name = " << s.name << "\nkind = " << s.kind << "\ndim = " << s.dim << "\nN = " << s.N
    << "\nL = " << format_double(s.L) << "\nmu = " << format_double(s.mu)
    << "\nmu_prime = " << format_double(s.mu_prime) << "\nT = " << format_double(s.T)
    << "\ndt = " << format_double(s.dt) << "\nseed = " << s.seed << "\nu0_norm = " << format_double(s.u0_norm)
    << "\nq_fraction = " << format_double(s.q_fraction) << "\nu0_band = " << format_double(s.u0_band)
    << "\nu0_slope = " << format_double(s.u0_slope) << "\nrho_amplitude = " << format_double(s.rho_amplitude)
    << "\nrho_band = " << format_double(s.rho_band) << "\nmonitors = " << join(s.monitors)
    << "\nflow_stride = " << s.flow_stride << "\nK_constant = " << format_double(s.K_constant)
    << "\neta_grad = " << format_double(s.eta_grad) << "\neta_L4 = " << format_double(s.eta_L4)
    << "\npair_mu = " << format_double(s.pair_mu) << "\npair_tolerance = " << format_double(s.pair_tolerance)
    << "\nnu_values = ";
  for (std::size_t i = 0; i < s.nu_values.size(); ++i) o << (i ? "," : "") << format_double(s.nu_values[i]);
  o << '\n';
  return o.str();
}

std::vector<std::string> builtin_scenarios() {
  return {"null", "calibration-2d", "rescale-pair", "small-data-3d", "nu-sweep"};
}

Scenario builtin_scenario(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "null") {
    s.N = 16;
    s.T = 0.1;
    s.dt = 0.01;
    s.u0_norm = 0.0;
    s.rho_amplitude = 0.0;
  } else if (name == "calibration-2d") {
    s.N = 32;
    s.mu = 1.0;
    s.mu_prime = 1.0;
    s.T = 1.0;
    s.dt = 5e-3;
    s.seed = 2024;
    s.u0_norm = 1.0;
    s.rho_amplitude = 0.2;
    s.monitors = {"theorem2d"};
    s.flow_stride = 4;
  } else if (name == "rescale-pair") {
    s.kind = "rescale-pair";
    s.N = 16;
    s.mu = 1.0;
    s.mu_prime = 1.0;
    s.T = 0.5;
    s.dt = 5e-3;
    s.seed = 7;
    s.u0_norm = 0.3;
    s.monitors = {"theorem2d"};
  } else if (name == "small-data-3d") {
    s.dim = 3;
    s.N = 16;
    s.T = 5.0;
    s.dt = 0.01;
    s.seed = 33;
    s.u0_norm = 4.0;
    s.q_fraction = 0.5;
    s.u0_band = 3.0;
    s.rho_amplitude = 0.1;
    s.rho_band = 2.0;
    s.monitors = {"theorem3d"};
  } else if (name == "nu-sweep") {
    s.kind = "nu-sweep";
    s.N = 32;
    s.T = 1.0;
    s.dt = 5e-3;
    s.seed = 11;
    s.u0_norm = 1.0;
    s.q_fraction = 0.7;
  } else {
    throw InvalidArgument("unknown built-in scenario '" + name + "'");
  }
  s.validate();
  return s;
}

InitialData generate_initial_data(const Scenario& s) {
  s.validate();
  const Torus torus(s.dim, s.L, s.N);
  InitialData d;
  d.rho0 = Field::constant(torus, 1, 1.0);
  d.u0 = Field(torus, s.dim);

  CounterRng rng_u(s.seed);
  CounterRng rng_rho(CounterRng::mix(s.seed ^ 0x5bd1e995ULL));
  const Field base = random_band_limited(torus, s.dim, rng_u, s.u0_band, s.u0_slope);
  const Field g = random_band_limited(torus, 1, rng_rho, s.rho_band, 1.0);

  if (s.rho_amplitude > 0.0) {
    const double peak = lp_norm(g, kInfinity);
    if (peak > 0.0) {
      Field dev = g;
      dev *= s.rho_amplitude / peak;
      d.rho0 += dev;
    }
  }

  if (s.u0_norm > 0.0) {
    const auto hp = helmholtz(base);
    const double share_q = s.q_fraction, share_p = 1.0 - s.q_fraction;
    if (s.dim == 2) {
      const double weight = std::pow((s.mu + s.mu_prime) / s.mu, 0.25);
      const double bp = besov_2d(hp.P_part), bq = besov_2d(hp.Q_part);
      if (share_p > 0.0 && bp > 0.0) {
        Field p = hp.P_part;
        p *= share_p * s.u0_norm / bp;
        d.u0 += p;
      }
      if (share_q > 0.0 && bq > 0.0) {
        Field q = hp.Q_part;
        q *= share_q * s.u0_norm / (weight * bq);
        d.u0 += q;
      }
    } else {
      const double bp = besov_norm(hp.P_part, 1.2, 2.5, 1.0), bq = besov_norm(hp.Q_part, 1.2, 2.5, 1.0);
      if (share_p > 0.0 && bp > 0.0) {
        Field p = hp.P_part;
        p *= share_p / bp;
        d.u0 += p;
      }
      if (share_q > 0.0 && bq > 0.0) {
        Field q = hp.Q_part;
        q *= share_q / bq;
        d.u0 += q;
      }
      const double m = smallness_3d(d.u0);
      if (m > 0.0) d.u0 *= s.u0_norm / m;
    }
  }

  if (s.dim == 2) {
    const auto hp = helmholtz(d.u0);
    d.Pu0_besov = besov_2d(hp.P_part);
    d.Qu0_besov = besov_2d(hp.Q_part);
  } else {
    d.smallness = smallness_3d(d.u0);
  }
  return d;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string output_root(const std::string& fallback) {
  const char* env = std::getenv("PGL_OUTPUT_DIR");
  if (env && *env) return env;
  return fallback;
}

void write_monitors_csv(std::ostream& out, const Trajectory& tr) {
  out << 't';
  for (const auto& n : tr.names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out << format_double(tr.times[i]);
    for (double v : tr.rows[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

std::string describe_monitor(const std::string& name) {
  static const std::map<std::string, std::string> basic{
      {"kinetic", "1/2 int rho |u|^2"},
      {"dissipation", "int mu |grad u|^2 + mu' (div u)^2"},
      {"mass", "int rho"},
      {"u_L2", "||u||_L2"},
      {"u_L4", "||u||_L4"},
      {"rho_dev_inf", "||rho - 1||_inf"},
      {"div_u_inf", "||div u||_inf"},
      {"grad_u_inf", "||grad u||_inf"},
      {"grad_u_L2sq", "||grad u||_L2^2"},
      {"div_u_L2sq", "||div u||_L2^2"},
  };
  if (auto it = basic.find(name); it != basic.end()) return it->second;
  static const std::regex lp("^(.+)_L([0-9.]+|inf)$");
  static const std::regex bes("^(.+)_Besov_s(-?[0-9.]+)_p([0-9.]+|inf)_r([0-9.]+|inf)$");
  std::smatch m;
  if (std::regex_match(name, m, bes))
    return "homogeneous Besov norm of " + m[1].str() + " with s = " + m[2].str() + ", p = " + m[3].str() +
           ", r = " + m[4].str();
  if (std::regex_match(name, m, lp)) return "L_p norm of " + m[1].str() + " with p = " + m[2].str();
  return name;
}

std::vector<std::pair<std::string, double>> rescale_mismatch(const Trajectory& a, const Trajectory& b) {
  const Trajectory na = normalized(a), nb = normalized(b);
  if (na.names != nb.names || na.rows.size() != nb.rows.size())
    throw InvalidArgument("paired trajectories need equal monitors and sample counts");
  std::vector<std::pair<std::string, double>> out;
  double tdev = 0.0, tscale = 0.0;
  for (std::size_t i = 0; i < na.times.size(); ++i) {
    tdev = std::max(tdev, std::abs(na.times[i] - nb.times[i]));
    tscale = std::max(tscale, std::abs(nb.times[i]));
  }
  out.push_back({"t", tscale > 0 ? tdev / tscale : tdev});
  for (std::size_t j = 0; j < na.names.size(); ++j) {
    double dev = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < na.rows.size(); ++i) {
      dev = std::max(dev, std::abs(na.rows[i][j] - nb.rows[i][j]));
      scale = std::max(scale, std::abs(nb.rows[i][j]));
    }
    out.push_back({na.names[j], scale > 0 ? dev / scale : dev});
  }
  return out;
}

MemberResult run_member(const Scenario& s, const InitialData& data, const std::string& dir) {
  fs::create_directories(dir);
  State st;
  st.rho = data.rho0;
  st.u = data.u0;
  st.mu = s.mu;
  st.mu_prime = s.mu_prime;

  const bool flow = s.flow_stride > 0;
  VelocityHistory history;
  std::vector<Field> rho_history;
  Field u_final = data.u0, rho_final = data.rho0;

  RunOptions opt;
  opt.T = s.T;
  opt.dt = s.dt;
  opt.monitors = s.monitors;
  opt.observer = [&](const Integrator& in) {
    if (flow) {
      history.times.push_back(in.time());
      history.u_hat.push_back(in.u_hat());
      rho_history.push_back(inverse(in.rho_hat()));
    }
    if (std::abs(in.time() - s.T) <= 0.5 * s.dt) {
      u_final = inverse(in.u_hat());
      rho_final = inverse(in.rho_hat());
    }
  };

  MemberResult res;
  res.trajectory = run(st, opt);
  DiagnosticsConfig cfg;
  cfg.K_constant = s.K_constant;
  cfg.eta_grad = s.eta_grad;
  cfg.eta_L4 = s.eta_L4;
  res.report = diagnose(res.trajectory, cfg);

  auto entries = report_entries(res.report);
  for (const auto& e : data_entries(s, data)) entries.push_back(e);

  if (flow) {
    const auto labels = grid_labels(data.u0.torus(), s.flow_stride);
    const FlowMap fm = integrate_flow(history, labels, s.T, s.dt);
    res.has_flow = true;
    res.flow.labels = labels.size();
    res.flow.mass_identity = mass_identity_check(fm, rho_history, data.rho0);
    res.flow.liouville = fm.times.size() >= 5 ? liouville_residual(fm, history) : 0.0;
    res.flow.neumann_ratio = neumann_ratio(fm, res.trajectory.series("grad_u_inf"));
    res.flow.min_jacobian = *std::min_element(fm.J.begin(), fm.J.end());
    save_flow((fs::path(dir) / "flow.pglflow").string(), data.rho0, fm);
    entries.push_back({"flow_mass_identity", res.flow.mass_identity});
    entries.push_back({"flow_liouville", res.flow.liouville});
    entries.push_back({"flow_neumann_ratio", res.flow.neumann_ratio});
    entries.push_back({"flow_min_jacobian", res.flow.min_jacobian});
    entries.push_back({"flow_labels", static_cast<double>(res.flow.labels)});
  }

  {
    std::ofstream out(fs::path(dir) / "monitors.csv");
    write_monitors_csv(out, res.trajectory);
    if (!out) throw InvalidArgument("cannot write monitors.csv in " + dir);
  }
  write_summary((fs::path(dir) / "summary.csv").string(), entries);
  write_json((fs::path(dir) / "schema.json").string(), schema_json(&res.trajectory, entries));
  save_field((fs::path(dir) / "rho0.pglf").string(), data.rho0);
  save_field((fs::path(dir) / "u0.pglf").string(), data.u0);
  save_field((fs::path(dir) / "rho_final.pglf").string(), rho_final);
  save_field((fs::path(dir) / "u_final.pglf").string(), u_final);

  json report = {{"status", "ok"}, {"scenario", scenario_json(s)}};
  json values = json::object();
  for (const auto& [k, v] : entries) values[k] = v;
  report["values"] = values;
  report["split_grad"] = {{"eta", res.report.split_grad.eta},
                          {"breakpoints", res.report.split_grad.breakpoints},
                          {"norms", res.report.split_grad.per_interval_norms}};
  report["split_L4"] = {{"eta", res.report.split_L4.eta},
                        {"breakpoints", res.report.split_L4.breakpoints},
                        {"norms", res.report.split_L4.per_interval_norms}};
  report["X_k"] = res.report.X_k;
  write_json((fs::path(dir) / "report.json").string(), report);

  if (res.report.mass_drift > 1e-8)
    throw InvariantViolation("mass drift " + format_double(res.report.mass_drift) + " exceeds 1e-8 (step " +
                             std::to_string(res.trajectory.times.size() - 1) + ")");
  if (res.report.gronwall_margin < -1e-6)
    throw InvariantViolation("density exceeds its Gronwall bound by " + format_double(-res.report.gronwall_margin));
  return res;
}

RunOutcome run_scenario(const Scenario& s, const std::string& root) {
  RunOutcome out;
  const fs::path dir = fs::path(root) / s.name;
  out.directory = dir.string();
  json status = {{"scenario", scenario_json(s)}};
  auto record = [&](const char* state, const std::string& msg) {
    status["status"] = state;
    status["message"] = msg;
    try {
      fs::create_directories(dir);
      write_json((dir / (s.kind == "single" ? "status.json" : "report.json")).string(), status);
    } catch (const std::exception&) {
    }
  };
  try {
    s.validate();
    const InitialData data = generate_initial_data(s);
    if (s.kind == "single") {
      run_member(s, data, dir.string());
      record("ok", "");
      return out;
    }
    std::vector<std::pair<std::string, double>> entries;
    if (s.kind == "rescale-pair") {
      Scenario a = s, b = s;
      b.mu = s.mu * s.pair_mu;
      b.mu_prime = s.mu_prime * s.pair_mu;
      b.T = s.T / s.pair_mu;
      b.dt = s.dt / s.pair_mu;
      InitialData db = data;
      db.u0 *= s.pair_mu;
      const auto ra = run_member(a, data, (dir / "base").string());
      const auto rb = run_member(b, db, (dir / "scaled").string());
      const auto mismatch = rescale_mismatch(ra.trajectory, rb.trajectory);
      double worst = 0.0;
      std::string worst_name = "t";
      json cols = json::object();
      for (const auto& [k, v] : mismatch) {
        cols[k] = v;
        if (v > worst) worst = v, worst_name = k;
      }
      json ratios = json::object();
      for (const auto& [k, v] : ra.report.inequality_ratios) {
        const double w = rb.report.inequality_ratios.at(k);
        const double dev = std::abs(v - w) / std::max({std::abs(v), std::abs(w), 1e-300});
        ratios[k] = {{"base", v}, {"scaled", w}, {"deviation", dev}};
        entries.push_back({"deviation_ratio_" + k, dev});
        if (dev > worst) worst = dev, worst_name = "ratio_" + k;
      }
      entries.insert(entries.begin(), {"max_mismatch", worst});
      status["mismatch"] = cols;
      status["ratios"] = ratios;
      if (worst > s.pair_tolerance)
        throw InvariantViolation("rescaled runs differ in " + worst_name + " by " + format_double(worst) +
                                 " > " + format_double(s.pair_tolerance));
    } else {
      json sweep = json::array();
      double prev = kInfinity;
      bool monotone = true;
      std::string message;
      for (double nu : s.nu_values) {
        Scenario m = s;
        m.mu = 1.0;
        m.mu_prime = nu - 1.0;
        char tag[32];
        std::snprintf(tag, sizeof tag, "nu%g", nu);
        const auto r = run_member(m, data, (dir / tag).string());
        const double integral = r.report.div_u_L1Linf;
        sweep.push_back({{"nu", nu}, {"div_u_L1Linf", integral}, {"gronwall_margin", r.report.gronwall_margin}});
        entries.push_back({std::string("div_u_L1Linf_") + tag, integral});
        if (integral > prev && monotone) {
          monotone = false;
          message = "int ||div u||_inf increases from " + format_double(prev) + " to " + format_double(integral) +
                    " at nu = " + format_double(nu);
        }
        prev = integral;
      }
      entries.push_back({"nu_monotone", monotone ? 1.0 : 0.0});
      status["sweep"] = sweep;
      if (!monotone) throw InvariantViolation(message);
    }
    write_summary((dir / "summary.csv").string(), entries);
    write_json((dir / "schema.json").string(), schema_json(nullptr, entries));
    record("ok", "");
  } catch (const InvariantViolation& e) {
    out.exit_code = kExitInvariant;
    out.message = std::string("invariant violation: ") + e.what();
    record("invariant_violation", e.what());
  } catch (const NumericalAbort& e) {
    out.exit_code = kExitAbort;
    out.message = std::string("numerical abort: ") + e.what();
    record("numerical_abort", e.what());
  } catch (const std::exception& e) {
    out.exit_code = kExitUsage;
    out.message = std::string("error: ") + e.what();
    record("error", e.what());
  }
  return out;
}

}  // namespace pgl
