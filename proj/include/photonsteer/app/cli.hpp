#pragma once

// Command-line front end. run_cli is the whole program; main only forwards to it
// so tests can drive commands with in-memory streams.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "photonsteer/app/fn_table.hpp"
#include "photonsteer/app/json_io.hpp"
#include "photonsteer/app/scenarios.hpp"
#include "photonsteer/app/sim_config.hpp"
#include "photonsteer/app/sweep.hpp"
#include "photonsteer/mc_sim.hpp"
#include "photonsteer/steering_eval.hpp"

namespace photonsteer {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitUsage = 2, kExitCheckFailed = 3 };

namespace cli_detail {

inline std::string fixed(double x, int digits = 5) {
  if (!std::isfinite(x)) return format_number(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

inline std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline void print_params(std::ostream& out, const ExperimentParams& p) {
  out << "  eta=" << fixed(p.eta, 2) << "  chi=" << fixed(p.chi, 2) << "  eta_h=" << fixed(p.eta_h, 2)
      << "  eta_p=" << fixed(p.eta_p, 2) << "  n=" << p.n_settings.to_string() << "\n";
}

inline int cmd_scenario(const std::string& name, bool as_json, std::ostream& out, std::ostream& err) {
  const ScenarioPreset* preset = find_scenario(name);
  if (!preset) {
    err << "error: unknown scenario '" << name << "'. Available presets:\n";
    for (const auto& n : scenario_names()) err << "  " << n << "\n";
    return kExitError;
  }
  const ScenarioReport rep = evaluate_scenario(*preset);
  if (as_json) {
    out << make_document("scenario", rep).dump(2) << "\n";
  } else {
    out << preset->name << ": " << preset->description << "\n";
    print_params(out, preset->params);
    out << "\n";
    for (const auto& [k, v] : rep.quantities) out << "  " << pad(k, 26) << fixed(v) << "\n";
    out << "\n  verdict (n=" << rep.report.n.to_string() << "): " << to_string(rep.report.verdict) << "\n";
    if (!rep.report.note.empty()) out << "  note: " << rep.report.note << "\n";
    if (!rep.checks.empty()) out << "\n";
    for (const auto& c : rep.checks)
      out << "  " << (c.pass ? "PASS " : "FAIL ") << pad(c.quantity, 21) << "expected " << fixed(c.expected, 2)
          << "  got " << fixed(c.actual) << "  (" << c.source << ")\n";
  }
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

inline int cmd_list(bool as_json, std::ostream& out) {
  if (as_json) {
    json j = json::array();
    for (const auto& p : scenario_registry())
      j.push_back({{"name", p.name}, {"description", p.description}, {"params", p.params}});
    out << make_document("scenario_list", json{{"presets", j}}).dump(2) << "\n";
    return kExitOk;
  }
  for (const auto& p : scenario_registry()) out << pad(p.name, 28) << p.description << "\n";
  return kExitOk;
}

inline int cmd_evaluate(const ExperimentParams& p, bool as_json, std::ostream& out) {
  const SteeringReport r = evaluate_inequality(p);
  if (as_json) {
    out << make_document("evaluation", json{{"params", p}, {"report", r}}).dump(2) << "\n";
    return kExitOk;
  }
  print_params(out, p);
  out << "  quantum correlation       " << fixed(r.lhs) << "\n"
      << "  nonlinear bound           " << fixed(r.rhs) << "\n"
      << "  margin                    " << fixed(r.margin) << "  (" << to_string(r.verdict) << ")\n"
      << "  bound, continuum          " << fixed(r.rhs_infinite) << "\n"
      << "  sufficient-condition lhs  " << fixed(r.sufficient.lhs_value)
      << (r.sufficient.satisfied ? "  satisfied" : "  not satisfied") << "\n"
      << "  necessary-condition lhs   " << fixed(r.necessary.lhs_value)
      << (r.necessary.possible ? "  steering possible" : "  steering ruled out") << "\n";
  if (!r.note.empty()) out << "  note: " << r.note << "\n";
  return kExitOk;
}

inline int cmd_sweep(const std::string& spec_path, const std::string& out_path, unsigned workers, bool as_json,
                     std::ostream& out) {
  const json j = parse_json_text(read_file(spec_path), spec_path);
  SweepSpec spec;
  try {
    spec = j.get<SweepSpec>();
  } catch (const json::exception& e) {
    throw config_error(spec_path + ": " + e.what());
  }
  const SweepResult r = run_sweep(spec, workers);
  const auto written = write_sweep(r, out_path);
  std::size_t unreachable = 0;
  for (const auto& c : r.cells) unreachable += c.flag == "unreachable";
  if (as_json) {
    json files = json::array();
    for (const auto& w : written) files.push_back(w.string());
    out << make_document("sweep_summary", json{{"files", files},
                                               {"cells", r.cells.size()},
                                               {"unreachable", unreachable},
                                               {"contour_segments", r.contours.size()}})
               .dump(2)
        << "\n";
  } else {
    out << "sweep of " << spec.quantity << " over " << spec.x.param << " x " << spec.y.param << ": "
        << r.cells.size() << " cells, " << unreachable << " unreachable, " << r.contours.size()
        << " contour segments\n";
    for (const auto& w : written) out << "  wrote " << w.string() << "\n";
  }
  return kExitOk;
}

inline int cmd_fn_table(int n_max, bool as_json, std::ostream& out) {
  const auto rows = bound_table(n_max);
  if (as_json) {
    out << make_document("fn_table", json{{"rows", rows}}).dump(2) << "\n";
    return kExitOk;
  }
  out << pad("n", 6) << pad("f(n)", 12) << pad("f(n)-2/pi", 14) << "check\n";
  for (const auto& r : rows)
    out << pad(r.n.to_string(), 6) << pad(fixed(r.value), 12) << pad(fixed(r.excess, 7), 14) << r.check << "\n";
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.check != "mismatch";
  return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_simulate(const std::string& config_path, const std::string& out_dir, bool as_json, std::ostream& out) {
  const SimConfig cfg = load_sim_config(config_path);
  const SimResult r = run_experiment(cfg);
  const auto written = write_sim_outputs(r, out_dir);
  if (as_json) {
    out << make_document("sim_result", r).dump(2) << "\n";
    return kExitOk;
  }
  auto est = [](const Estimate& e) {
    return fixed(e.value) + " +/- " + fixed(e.std_error) + "  (analytic " + fixed(e.analytic) + ")";
  };
  out << "strategy " << to_string(cfg.strategy) << ", " << cfg.shots_per_setting << " shots per setting, seed "
      << cfg.seed << "\n";
  print_params(out, cfg.params);
  out << "  lhs     " << est(r.lhs) << "\n"
      << "  rhs     " << est(r.rhs) << "\n"
      << "  margin  " << est(r.margin) << "\n"
      << "  p_plus  " << est(r.p_plus) << "\n"
      << "  verdict " << to_string(r.verdict);
  if (r.error_bars_infinite) out << "  (error bars infinite)";
  out << "\n";
  for (const auto& w : written) out << "  wrote " << w.string() << "\n";
  return kExitOk;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical EPR-steering analysis for a split single photon"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit machine-readable JSON");

  auto* scenario = app.add_subcommand("scenario", "Evaluate a named parameter preset");
  std::string scenario_name;
  bool list = false;
  scenario->add_option("name", scenario_name, "Preset name");
  scenario->add_flag("--list", list, "List the available presets");

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate the inequality at explicit parameters");
  ExperimentParams params;
  int n_settings = 8;
  evaluate->add_option("--eta", params.eta, "Preparation efficiency")->default_val(1.0);
  evaluate->add_option("--chi", params.chi, "Fraction sent to Bob")->default_val(0.5);
  evaluate->add_option("--eta-h", params.eta_h, "Homodyne efficiency")->default_val(1.0);
  evaluate->add_option("--eta-p", params.eta_p, "Photodetector efficiency")->default_val(0.0);
  evaluate->add_option("--n", n_settings, "Equatorial settings (0 for the continuum)")->default_val(8);

  auto* sweep = app.add_subcommand("sweep", "Grid a quantity over two parameters");
  std::string spec_path, sweep_out;
  unsigned workers = 1;
  sweep->add_option("--spec", spec_path, "Sweep spec (JSON)")->required();
  sweep->add_option("--out", sweep_out, "Output grid (.csv or .json)")->required();
  sweep->add_option("--workers", workers, "Parallel workers")->default_val(1u);

  auto* table = app.add_subcommand("fn-table", "Tabulate the n-setting bound");
  int n_max = 16;
  table->add_option("--max", n_max, "Largest n")->default_val(16);

  auto* simulate = app.add_subcommand("simulate", "Run a seeded Monte Carlo experiment");
  std::string config_path, sim_out;
  simulate->add_option("--config", config_path, "Simulation config (JSON)")->required();
  simulate->add_option("--out", sim_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*scenario) {
      if (list || scenario_name.empty()) return cli_detail::cmd_list(as_json, out);
      return cli_detail::cmd_scenario(scenario_name, as_json, out, err);
    }
    if (*evaluate) {
      params.n_settings = n_settings == 0 ? SettingCount::infinite() : SettingCount(n_settings);
      params.label = "command line";
      return cli_detail::cmd_evaluate(params, as_json, out);
    }
    if (*sweep) return cli_detail::cmd_sweep(spec_path, sweep_out, workers, as_json, out);
    if (*table) return cli_detail::cmd_fn_table(n_max, as_json, out);
    if (*simulate) return cli_detail::cmd_simulate(config_path, sim_out, as_json, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace photonsteer
