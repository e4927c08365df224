#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pgl/acceptance.hpp"
#include "pgl/besov.hpp"
#include "pgl/diagnostics.hpp"
#include "pgl/errors.hpp"
#include "pgl/harness.hpp"
#include "pgl/lorentz.hpp"
#include "pgl/snapshot.hpp"
#include "pgl/spectral.hpp"

using namespace pgl;

namespace {

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw InvalidArgument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

double parse_exponent(const std::string& s) {
  if (s == "inf") return kInfinity;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw InvalidArgument("bad exponent '" + s + "'");
  return v;
}

std::vector<double> parse_exponents(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_exponent(item));
  return out;
}

int cmd_run(const std::string& target, const std::string& out_dir) {
  Scenario s;
  if (std::filesystem::exists(target)) {
    s = load_scenario(target);
  } else {
    s = builtin_scenario(target);
  }
  const auto outcome = run_scenario(s, output_root(out_dir));
  if (outcome.exit_code == kExitOk)
    std::cout << "ok " << outcome.directory << '\n';
  else
    std::cerr << outcome.message << '\n';
  return outcome.exit_code;
}

int cmd_norms(const std::string& path, const std::vector<std::string>& spaces) {
  const Field f = load_field(path);
  for (const auto& space : spaces) {
    const auto colon = space.find(':');
    if (colon == std::string::npos) throw InvalidArgument("space needs the form kind:args, got '" + space + "'");
    const std::string kind = space.substr(0, colon);
    const auto args = parse_exponents(space.substr(colon + 1));
    double v = 0.0;
    if (kind == "besov") {
      if (args.size() != 3) throw InvalidArgument("besov needs s,p,r");
      v = besov_norm(f, args[0], args[1], args[2]);
    } else if (kind == "lorentz") {
      if (args.size() != 2) throw InvalidArgument("lorentz needs p,r");
      v = lorentz_norm(f, LorentzExponents{args[0], args[1]});
    } else if (kind == "lp") {
      if (args.size() != 1) throw InvalidArgument("lp needs p");
      v = lp_norm(f, args[0]);
    } else {
      throw InvalidArgument("unknown space '" + kind + "'");
    }
    std::cout << space << ' ' << format_double(v) << '\n';
  }
  return kExitOk;
}

int cmd_split(const std::string& path, double eta, double q, double r, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument(path + " is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string h;
    while (std::getline(ss, h, ',')) header.push_back(h);
  }
  if (header.size() < 2) throw InvalidArgument(path + " needs a time column and a value column");
  std::size_t col = 1;
  if (!column.empty()) {
    auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end()) throw InvalidArgument("column '" + column + "' not found in " + path);
    col = static_cast<std::size_t>(it - header.begin());
  }
  TimeSeries U;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto vals = parse_numbers(line);
    if (vals.size() != header.size()) throw InvalidArgument("row " + std::to_string(row) + " has the wrong width");
    U.push_back(vals[0], vals[col]);
  }
  const auto res = split_intervals(U, eta, q, r);
  std::cout << "K " << res.K << '\n';
  std::cout << "interval,start,end,norm\n";
  for (int k = 0; k < res.K; ++k)
    std::cout << k << ',' << format_double(res.breakpoints[static_cast<std::size_t>(k)]) << ','
              << format_double(res.breakpoints[static_cast<std::size_t>(k) + 1]) << ','
              << format_double(res.per_interval_norms[static_cast<std::size_t>(k)]) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pglab: pressureless gas experiments on the torus"};
  app.require_subcommand(1);

  std::string target, out_dir = "pgl_output";
  auto* run = app.add_subcommand("run", "run a scenario file or a built-in scenario");
  run->add_option("scenario", target, "scenario file or built-in name")->required();
  run->add_option("-o,--output", out_dir, "output root (PGL_OUTPUT_DIR takes precedence)");

  std::string level = "quick", fixture;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--fixture", fixture, "test fixture (corrupted-partition)")->check(CLI::IsMember({"corrupted-partition"}));
  std::vector<int> only;
  verify->add_option("--criteria", only, "subset of criterion numbers");

  std::string snapshot;
  std::vector<std::string> spaces;
  auto* norms = app.add_subcommand("norms", "norms of a field snapshot");
  norms->add_option("snapshot", snapshot, "PGLF snapshot")->required();
  norms->add_option("--space", spaces, "besov:s,p,r | lorentz:p,r | lp:p")->required();

  std::string csv, column;
  double eta = 0.0, q = 4.0, r = 1.0;
  auto* split = app.add_subcommand("split", "split a time series into small-norm intervals");
  split->add_option("csv", csv, "CSV with a time column first")->required();
  split->add_option("--eta", eta, "threshold")->required();
  split->add_option("--q", q, "Lorentz time exponent q");
  split->add_option("--r", r, "Lorentz second index r");
  split->add_option("--column", column, "value column (default: second)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(target, out_dir);
    if (*norms) return cmd_norms(snapshot, spaces);
    if (*split) return cmd_split(csv, eta, q, r, column);
    if (*verify) {
      AcceptanceOptions opts;
      opts.level = level == "full" ? AcceptanceLevel::full : AcceptanceLevel::quick;
      opts.corrupted_partition = fixture == "corrupted-partition";
      opts.criteria = only;
      opts.output_root = output_root((std::filesystem::temp_directory_path() / "pglab_verify").string());
      const auto results = run_acceptance(opts, std::cout);
      return all_passed(results) ? kExitOk : kExitUsage;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
