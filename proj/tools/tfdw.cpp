// tfdw: command-line front end.
//
// Exit codes: 0 success, 1 configuration / input error, 2 solver did not converge.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tfdw/analysis.hpp"
#include "tfdw/error.hpp"
#include "tfdw/kernels.hpp"
#include "tfdw/model.hpp"
#include "tfdw/report.hpp"
#include "tfdw/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tfdw;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_no_convergence = 2;

struct RunConfig {
  std::size_t n = 512;
  double L = 400.0;
  double a = 1.0, b = 1.0, rho_bar = 0.0;
  std::string potential = "v0";
  std::string charges_file;
  double tau = 1.0, sigma = 1.0, tol = 1e-6, stall_tol = 1e-12;
  std::size_t max_iters = 5000;
  std::string init = "potential";  // zero | potential | <path to field dump>
  std::string out = ".";
  std::size_t bins = 0;  // 0: n/2
  bool write_csv = false;
  double window_min = 0.0, window_max = 0.0;  // 0: L/20, L/4
};

// Flags registered on a subcommand; JSON config values apply unless the flag
// was given explicitly on the command line.
struct Flags {
  std::string config_file;
  RunConfig cfg;
  std::vector<std::pair<CLI::Option*, std::string>> keyed;

  template <class T>
  void add(CLI::App* app, const std::string& flag, const std::string& key, T& target,
           const std::string& help) {
    keyed.emplace_back(app->add_option(flag, target, help), key);
  }

  void register_on(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file (flags override it)");
    add(app, "--n", "n", cfg.n, "samples per axis (power of two >= 16)");
    add(app, "--L", "L", cfg.L, "box side length");
    add(app, "--a", "a", cfg.a, "von Weizsaecker coefficient");
    add(app, "--b", "b", cfg.b, "Coulomb coefficient");
    add(app, "--rho-bar", "rho_bar", cfg.rho_bar, "background density");
    add(app, "--potential", "potential", cfg.potential, "v0 or charges");
    add(app, "--charges", "charges", cfg.charges_file, "charge measure JSON file");
    add(app, "--tau", "tau", cfg.tau, "initial step size");
    add(app, "--sigma", "sigma", cfg.sigma, "preconditioner shift");
    add(app, "--tol", "residual_tol", cfg.tol, "residual tolerance");
    add(app, "--stall-tol", "energy_stall_tol", cfg.stall_tol, "energy stall tolerance");
    add(app, "--max-iters", "max_iters", cfg.max_iters, "iteration cap");
    add(app, "--init", "init", cfg.init, "zero | potential | path to a field dump");
    add(app, "--out", "out", cfg.out, "output directory");
    add(app, "--bins", "bins", cfg.bins, "radial profile bins (default n/2)");
    add(app, "--csv", "csv", cfg.write_csv, "also write fields as CSV");
    add(app, "--window-min", "window_min", cfg.window_min, "tail-fit inner radius (default L/20)");
    add(app, "--window-max", "window_max", cfg.window_max, "tail-fit outer radius (default L/4)");
  }

  // Resolves the JSON config; CLI flags win.
  RunConfig resolve() const {
    if (config_file.empty()) return cfg;
    const json j = read_json(config_file);
    RunConfig merged = cfg;
    auto take = [&](const std::string& key, auto& field, const CLI::Option* opt) {
      if (opt->count() == 0 && j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    for (const auto& [opt, key] : keyed) {
      try {
        if (key == "n") take(key, merged.n, opt);
        else if (key == "L") take(key, merged.L, opt);
        else if (key == "a") take(key, merged.a, opt);
        else if (key == "b") take(key, merged.b, opt);
        else if (key == "rho_bar") take(key, merged.rho_bar, opt);
        else if (key == "potential") take(key, merged.potential, opt);
        else if (key == "charges") take(key, merged.charges_file, opt);
        else if (key == "tau") take(key, merged.tau, opt);
        else if (key == "sigma") take(key, merged.sigma, opt);
        else if (key == "residual_tol") take(key, merged.tol, opt);
        else if (key == "energy_stall_tol") take(key, merged.stall_tol, opt);
        else if (key == "max_iters") take(key, merged.max_iters, opt);
        else if (key == "init") take(key, merged.init, opt);
        else if (key == "out") take(key, merged.out, opt);
        else if (key == "bins") take(key, merged.bins, opt);
        else if (key == "csv") take(key, merged.write_csv, opt);
        else if (key == "window_min") take(key, merged.window_min, opt);
        else if (key == "window_max") take(key, merged.window_max, opt);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, "config key \"" + key + "\": " + e.what());
      }
    }
    return merged;
  }
};

struct Problem {
  Grid2D grid;
  ModelParams params;
  Field v_raw;  // as specified, before the rho_bar < 0 reflection
  Field v;      // oriented for params
  double v_norm_sq;
};

Problem build_problem(const RunConfig& c) {
  const Grid2D grid = make_grid(c.n, c.L);
  const ModelParams params = make_params(c.a, c.b, c.rho_bar);
  ChargeMeasure mu;
  if (c.potential == "v0") {
    mu = unit_charge();
  } else if (c.potential == "charges") {
    if (c.charges_file.empty()) throw Error(ErrorCode::InvalidArgument, "--potential charges needs --charges");
    mu = read_charge_measure(c.charges_file);
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown potential \"" + c.potential + "\"");
  }
  Field v = c.potential == "v0" ? potential_v0(grid) : potential_from_charges(grid, mu);
  const double norm = v_h_half_norm_sq(grid, mu);
  Field oriented = oriented_potential(params, v);
  return {grid, params, std::move(v), std::move(oriented), norm};
}

SolveConfig solve_config(const RunConfig& c, const Grid2D& grid) {
  SolveConfig s;
  s.step_size = c.tau;
  s.sigma = c.sigma;
  s.residual_tol = c.tol;
  s.energy_stall_tol = c.stall_tol;
  s.max_iters = c.max_iters;
  if (c.init == "zero") s.init = InitialGuess::Zero;
  else if (c.init == "potential") s.init = InitialGuess::ScaledPotential;
  else {
    Field f = read_field_binary(c.init);
    require_same_grid(grid, f);
    s.init = InitialGuess::Provided;
    s.initial = std::move(f);
  }
  validate(s);
  return s;
}

std::pair<double, double> tail_window(const RunConfig& c) {
  return {c.window_min > 0.0 ? c.window_min : c.L / 20.0, c.window_max > 0.0 ? c.window_max : c.L / 4.0};
}

std::size_t bin_count(const RunConfig& c) { return c.bins > 0 ? c.bins : c.n / 2; }

std::optional<TailFit> try_fit(const Field& rho_minus_bar, const RunConfig& c) {
  const auto [lo, hi] = tail_window(c);
  try {
    return fit_tail(radial_profile(rho_minus_bar, bin_count(c)), lo, hi);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// rho - rho_bar with the sign convention of the original (unflipped) problem.
Field induced_density(const SolveReport& r, const ModelParams& p) {
  std::vector<double> s(r.u.values().size());
  kernels::charge_density(r.u.values(), p.ubar(), Branch::Plus, s);
  if (p.sign_flipped)
    for (double& x : s) x = -x;
  return Field(r.u.grid(), std::move(s));
}

int cmd_solve(const RunConfig& c) {
  const Problem pb = build_problem(c);
  const SolveConfig sc = solve_config(c, pb.grid);
  SpectralPlan plan(pb.grid);
  const SolveReport r = minimize(pb.params, pb.v, plan, sc, pb.v_norm_sq);

  fs::create_directories(c.out);
  const fs::path out(c.out);
  write_field_binary(r.u, out / "u.bin");
  write_field_binary(r.rho, out / "rho.bin");
  if (c.write_csv) {
    write_field_csv(r.u, out / "u.csv");
    write_field_csv(r.rho, out / "rho.csv");
  }
  const Field induced = induced_density(r, pb.params);
  write_profile_csv(radial_profile(induced, bin_count(c)), out / "profile.csv");

  json j = to_json(r, pb.params);
  j["potential"] = c.potential;
  j["v_norm_sq"] = pb.v_norm_sq;
  j["files"] = {{"u", "u.bin"}, {"rho", "rho.bin"}, {"profile", "profile.csv"}};
  j["energy_history"] = r.energy_history;
  if (const auto fit = try_fit(induced, c)) {
    j["tail_fit"] = to_json(*fit);
    if (fit->exponent > 2.0) j["l1_charge_extrapolated"] = extrapolated_charge(induced, *fit);
  }
  write_json(j, out / "report.json");

  std::cout << "l1_charge " << j["l1_charge"].dump() << "  energy " << j["energy"]["total"].dump()
            << "  residual " << r.residual_l2 << "  iterations " << r.iterations << "  ("
            << to_string(r.stop_reason) << ")\n";
  return r.converged ? exit_ok : exit_no_convergence;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "bad sweep value \"" + item + "\"");
    }
  }
  return out;
}

int cmd_sweep(const RunConfig& c, const std::string& axis, const std::string& values_text,
              std::size_t jobs) {
  const std::vector<double> values = parse_values(values_text);
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one value");
  if (axis != "a" && axis != "b" && axis != "rho_bar")
    throw Error(ErrorCode::InvalidArgument, "sweep axis must be a, b or rho_bar");
  const Problem base = build_problem(c);
  const SolveConfig sc = solve_config(c, base.grid);

  auto params_for = [&](double value) {
    RunConfig e = c;
    (axis == "a" ? e.a : axis == "b" ? e.b : e.rho_bar) = value;
    return make_params(e.a, e.b, e.rho_bar);
  };
  std::vector<ModelParams> plist;
  for (double x : values) plist.push_back(params_for(x));

  // A sweep through rho_bar = 0 flips the orientation of V between entries.
  auto potential_for = [&](const ModelParams& p) { return oriented_potential(p, base.v_raw); };

  std::vector<std::optional<SolveReport>> reports(values.size());
  std::vector<std::string> failures(values.size());
  if (jobs <= 1) {
    // Sequential continuation with warm starts.
    SpectralPlan plan(base.grid);
    SolveConfig cfg = sc;
    for (std::size_t i = 0; i < values.size(); ++i) {
      try {
        reports[i] = minimize(plist[i], potential_for(plist[i]), plan, cfg, base.v_norm_sq);
        const auto& r = *reports[i];
        const bool nonzero = kernels::sum_abs_pow(r.u.values(), 1.0, base.grid.n()) > 0.0;
        const bool same_side =
            i + 1 < values.size() && plist[i + 1].sign_flipped == plist[i].sign_flipped;
        if (r.converged && nonzero && same_side) {
          cfg.init = InitialGuess::Provided;
          cfg.initial = r.u;
        } else {
          cfg = sc;
        }
      } catch (const Error& e) {
        failures[i] = e.what();
        cfg = sc;
      }
    }
  } else {
    // Independent cold starts, at most `jobs` at a time, one plan each.
    for (std::size_t start = 0; start < values.size(); start += jobs) {
      std::vector<std::future<void>> batch;
      for (std::size_t i = start; i < std::min(values.size(), start + jobs); ++i)
        batch.push_back(std::async(std::launch::async, [&, i] {
          try {
            SpectralPlan plan(base.grid);
            reports[i] = minimize(plist[i], potential_for(plist[i]), plan, sc, base.v_norm_sq);
          } catch (const Error& e) {
            failures[i] = e.what();
          }
        }));
      for (auto& f : batch) f.get();
    }
  }

  fs::create_directories(c.out);
  const fs::path path = fs::path(c.out) / "sweep.csv";
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Io, "cannot write " + path.string());
  os.precision(17);
  os << "value,l1_charge,energy,tail_exponent,converged\n";
  std::size_t converged = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!reports[i]) {
      os << values[i] << ",nan,nan,nan,false\n";
      std::cerr << "entry " << values[i] << ": " << failures[i] << '\n';
      continue;
    }
    const auto& r = *reports[i];
    const Field induced = induced_density(r, plist[i]);
    const auto fit = try_fit(induced, c);
    const double l1 = plist[i].sign_flipped ? -r.l1_charge : r.l1_charge;
    os << values[i] << ',' << l1 << ',' << r.breakdown.total << ',';
    if (fit) os << fit->exponent;
    else os << "nan";
    os << ',' << (r.converged ? "true" : "false") << '\n';
    converged += r.converged ? 1 : 0;
    std::cout << axis << "=" << values[i] << "  l1_charge " << l1 << "  energy " << r.breakdown.total
              << "  " << to_string(r.stop_reason) << '\n';
  }
  return converged > 0 ? exit_ok : exit_no_convergence;
}

struct AnalyzeFlags {
  std::string report;
  std::string out;
  std::string green;
  bool hardy = false;
  double window_min = 0.0, window_max = 0.0;
  std::size_t bins = 0;
};

// Parses "a=1,c=1".
std::pair<double, double> parse_green_spec(const std::string& text) {
  double a = 1.0, c = 1.0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Parse, "green spec items look like a=1,c=1");
    const std::string key = item.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "bad number in green spec \"" + item + "\"");
    }
    if (key == "a") a = value;
    else if (key == "c") c = value;
    else throw Error(ErrorCode::Parse, "unknown green spec key \"" + key + "\"");
  }
  return {a, c};
}

void write_green_csv(const std::vector<std::pair<double, double>>& table, std::ostream& os) {
  os.precision(17);
  os << "r,G\n";
  for (const auto& [r, g] : table) os << r << ',' << g << '\n';
}

int cmd_analyze(const AnalyzeFlags& f) {
  const fs::path report_path(f.report);
  const json rep = read_json(report_path);
  const fs::path dir = report_path.parent_path();
  json out;
  try {
    const double a = rep.at("model").at("a").get<double>();
    const double b = rep.at("model").at("b").get<double>();
    const double rho_bar = rep.at("model").at("rho_bar").get<double>();
    const ModelParams params = make_params(a, b, rho_bar);
    const Field u = read_field_binary(dir / rep.at("files").at("u").get<std::string>());
    const Grid2D& g = u.grid();

    std::vector<double> s(g.size());
    kernels::charge_density(u.values(), params.ubar(), Branch::Plus, s);
    double l1 = kernels::sum(s, g.n()) * g.cell_area();
    if (params.sign_flipped) {
      l1 = -l1;
      for (double& x : s) x = -x;
    }
    const Field induced(g, std::move(s));
    out["l1_charge"] = l1;
    out["l1_charge_report"] = rep.at("l1_charge");
    out["l1_charge_matches"] = l1 == rep.at("l1_charge").get<double>();

    const double lo = f.window_min > 0.0 ? f.window_min : g.box_length() / 20.0;
    const double hi = f.window_max > 0.0 ? f.window_max : g.box_length() / 4.0;
    const std::size_t bins = f.bins > 0 ? f.bins : g.n() / 2;
    std::optional<TailFit> fit;
    try {
      fit = fit_tail(radial_profile(induced, bins), lo, hi);
      out["tail_fit"] = to_json(*fit);
      if (fit->exponent > 2.0) out["l1_charge_extrapolated"] = extrapolated_charge(induced, *fit);
    } catch (const Error& e) {
      out["tail_fit_error"] = e.what();
    }
    try {
      const DecayPrediction d = solve_decay_exponent(a, b, l1);
      out["decay_prediction"] = to_json(d);
      if (fit) out["exponent_difference"] = fit->exponent - d.rho_exponent;
    } catch (const Error& e) {
      out["decay_prediction_error"] = e.what();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, report_path.string() + ": " + e.what());
  }

  if (f.hardy) {
    out["hardy_constant"] = hardy_constant();
    std::printf("%.17g\n", hardy_constant());
  }
  const fs::path out_dir = f.out.empty() ? dir : fs::path(f.out);
  fs::create_directories(out_dir);
  if (!f.green.empty()) {
    const auto [ga, gc] = parse_green_spec(f.green);
    const auto table = green_table(ga, gc, 1e-3 * ga / gc, 1e3 * ga / gc, 121);
    std::ofstream os(out_dir / "green.csv");
    if (!os) throw Error(ErrorCode::Io, "cannot write green.csv");
    write_green_csv(table, os);
    out["green"] = {{"a", ga}, {"c", gc}, {"file", "green.csv"}};
  }
  write_json(out, out_dir / "analysis.json");
  std::cout << out.dump(2) << '\n';
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thomas-Fermi-Dirac-von Weizsaecker solver for a 2D layer with linear dispersion"};
  app.require_subcommand(1);

  Flags solve_flags, sweep_flags;
  auto* solve = app.add_subcommand("solve", "minimize the energy and write report.json");
  solve_flags.register_on(solve);

  auto* sweep = app.add_subcommand("sweep", "continuation sweep along one parameter, writes sweep.csv");
  sweep_flags.register_on(sweep);
  std::string axis = "a", values;
  std::size_t jobs = 1;
  sweep->add_option("--axis", axis, "a, b or rho_bar");
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--jobs", jobs, "concurrent cold-start solves (1: sequential warm starts)");

  AnalyzeFlags af;
  auto* analyze = app.add_subcommand("analyze", "tail fit and decay-law prediction for a report");
  analyze->add_option("report", af.report, "path to report.json")->required();
  analyze->add_option("--out", af.out, "output directory (default: next to the report)");
  analyze->add_option("--green", af.green, "tabulate G_{a,c}, e.g. a=1,c=1");
  analyze->add_flag("--hardy", af.hardy, "include the Hardy threshold a_c");
  analyze->add_option("--window-min", af.window_min, "tail-fit inner radius");
  analyze->add_option("--window-max", af.window_max, "tail-fit outer radius");
  analyze->add_option("--bins", af.bins, "radial profile bins");

  auto* hardy = app.add_subcommand("hardy", "print the threshold a_c");

  double ga = 1.0, gc = 1.0, rmin = 1e-3, rmax = 1e3;
  std::size_t count = 121;
  std::string green_out;
  auto* green = app.add_subcommand("green", "tabulate the Green's function as CSV r,G");
  green->add_option("--a", ga, "a > 0");
  green->add_option("--c", gc, "c > 0");
  green->add_option("--rmin", rmin, "smallest radius");
  green->add_option("--rmax", rmax, "largest radius");
  green->add_option("--count", count, "number of log-spaced radii");
  green->add_option("--out", green_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*solve) return cmd_solve(solve_flags.resolve());
    if (*sweep) return cmd_sweep(sweep_flags.resolve(), axis, values, jobs);
    if (*analyze) return cmd_analyze(af);
    if (*hardy) {
      std::printf("%.17g\n", hardy_constant());
      return exit_ok;
    }
    if (*green) {
      const auto table = green_table(ga, gc, rmin, rmax, count);
      if (green_out.empty()) {
        write_green_csv(table, std::cout);
      } else {
        std::ofstream os(green_out);
        if (!os) throw Error(ErrorCode::Io, "cannot write " + green_out);
        write_green_csv(table, os);
      }
      return exit_ok;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  }
  return exit_config;
}
