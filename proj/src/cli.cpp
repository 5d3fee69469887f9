// Copyright 2026 The weakfactor Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "weakfactor/cli.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "weakfactor/errors.hpp"
#include "weakfactor/experiments.hpp"

namespace weakfactor {

namespace {

struct Subcommand {
  std::string name;
  CLI::App* app = nullptr;
  Index n = 0;
  Index T = 0;
  int reps = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out;
  std::string format = "csv";
  std::vector<Index> sizes;
  std::vector<double> tau_fracs;
  std::vector<std::string> designs;
  bool flag = false;  // --calibrate or --transpose
  std::string flag_key;
  std::map<std::string, double> reals;
  std::map<std::string, CLI::Option*> options;
};

const std::map<std::string, std::pair<std::string, std::vector<std::string>>>& catalogue() {
  static const std::map<std::string, std::pair<std::string, std::vector<std::string>>> c{
      {"entrywise-rate",
       {"Error of the (1,1) entry estimate against factor strength and size", {"kappa"}}},
      {"entrywise-coverage",
       {"Coverage and width of the adaptive confidence interval",
        {"kappa", "kappa_bar", "alpha", "C0"}}},
      {"adaptivity-demo",
       {"Pre-test confidence interval at an undetectable perturbation",
        {"kappa", "eta", "tau0", "tau2", "alpha", "base_frac", "k_max"}}},
      {"lower-bound-check",
       {"Power of the calibrated likelihood-ratio test at the two-point pair",
        {"tau", "kappa", "alpha"}}},
      {"panel-rate", {"sqrt(nT) RMSE of the panel estimator over designs", {"beta"}}},
      {"panel-tradeoff",
       {"Width and coverage of CI* at the panel two-point pair", {"kappa1", "kappa2", "c"}}},
      {"oracle-check",
       {"Monte Carlo against closed-form KL, chi-square and TV quantities",
        {"c", "kappa", "alpha", "tau", "keep", "kl_rel_tol"}}},
  };
  return c;
}

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  for (auto& ch : f)
    if (ch == '_') ch = '-';
  return f;
}

ExperimentConfig to_config(const Subcommand& s) {
  ExperimentConfig cfg;
  if (s.options.at("n")->count() > 0) cfg.n = s.n;
  if (s.options.at("T")->count() > 0) cfg.T = s.T;
  if (s.options.at("reps")->count() > 0) cfg.reps = s.reps;
  cfg.seed = s.seed;
  cfg.threads = s.threads;
  cfg.sizes = s.sizes;
  cfg.tau_fracs = s.tau_fracs;
  cfg.designs = s.designs;
  for (const auto& [key, value] : s.reals) {
    if (s.options.at(key)->count() > 0) cfg.params.emplace_back(key, value);
  }
  if (!s.flag_key.empty() && s.flag) cfg.params.emplace_back(s.flag_key, 1.0);
  return cfg;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

// Resolved configuration embedded in every output file. The output path and
// worker count are left out so that reruns compare equal byte for byte.
nlohmann::json resolved_config(const std::string& name, const ExperimentConfig& cfg,
                               const ExperimentReport& report) {
  nlohmann::json j = nlohmann::json::object();
  j["experiment"] = name;
  j["seed"] = cfg.seed;
  j["replications"] = report.table.grid.empty()
                          ? 0
                          : report.table.rows.size() / report.table.grid.size();
  if (cfg.n) j["n"] = *cfg.n;
  if (cfg.T) j["T"] = *cfg.T;
  if (!cfg.sizes.empty()) j["sizes"] = cfg.sizes;
  if (!cfg.tau_fracs.empty()) j["tau_fracs"] = cfg.tau_fracs;
  if (!cfg.designs.empty()) j["designs"] = cfg.designs;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : cfg.params) params[k] = v;
  j["params"] = params;
  j["resolved"] = report.provenance;
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& g : report.table.grid) {
    nlohmann::json p = nlohmann::json::object();
    for (const auto& [k, v] : g.params) p[k] = v;
    grid.push_back({{"point", g.label}, {"n", g.n}, {"T", g.T}, {"params", p}});
  }
  j["grid"] = grid;
  return j;
}

void write_output(std::ostream& os, const std::string& format, const std::string& name,
                  const ExperimentConfig& cfg, const ExperimentReport& report) {
  const nlohmann::json config = resolved_config(name, cfg, report);
  if (format == "json") {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [k, v] : report.metrics) metrics[k] = v;
    write_json_summary(report.table, os,
                       {{"version", version()},
                        {"config", config},
                        {"metrics", metrics},
                        {"notes", report.notes},
                        {"experiment_failed", report.failed}});
  } else {
    write_csv(report.table, os,
              {std::string("weakfactor ") + version(), "config " + config.dump()});
  }
}

std::string cell(const std::optional<Estimate>& e) {
  if (!e) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g (%.2g)", e->value, e->se);
  return buf;
}

void print_summary(std::ostream& out, const std::string& name, const ExperimentReport& r) {
  out << name << " (weakfactor " << version() << ")\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-26s %6s %6s %18s %18s %18s %12s\n", "point", "reps",
                "errors", "coverage (se)", "mean width (se)", "rmse (se)", "median|err|");
  out << line;
  for (const auto& s : r.table.summary) {
    const std::string med =
        s.median_abs_error ? format_double(*s.median_abs_error).substr(0, 12) : "-";
    std::snprintf(line, sizeof(line), "%-26s %6d %6d %18s %18s %18s %12s\n",
                  r.table.grid[s.point].label.c_str(), s.replications, s.errors,
                  cell(s.coverage).c_str(), cell(s.mean_width).c_str(), cell(s.rmse).c_str(),
                  med.c_str());
    out << line;
  }
  for (const auto& note : r.notes) out << "  " << note << "\n";
  if (r.failed) out << "experiment FAILED\n";
}

}  // namespace

const char* version() { return WEAKFACTOR_VERSION; }

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation, inference and lower-bound experiments for factor models "
               "with weak factors",
               "weakfactor"};
  app.set_version_flag("--version", version());
  app.set_config("--config", "", "Read options from a key = value file; [subcommand] tables "
                                 "hold subcommand options");
  app.require_subcommand(1, 1);

  std::map<std::string, Subcommand> subs;
  for (const auto& [name, entry] : catalogue()) {
    Subcommand& s = subs[name];
    s.name = name;
    s.app = app.add_subcommand(name, entry.first);
    CLI::App* sc = s.app;
    s.options["n"] = sc->add_option("--n", s.n, "Rows")->check(CLI::Range(2, 1000000));
    s.options["T"] = sc->add_option("--T", s.T, "Columns")->check(CLI::Range(2, 1000000));
    s.options["reps"] =
        sc->add_option("--reps", s.reps, "Replications per grid point")->check(CLI::PositiveNumber);
    sc->add_option("--seed", s.seed, "Master seed")->capture_default_str();
    sc->add_option("--threads", s.threads, "Worker threads")
        ->envname("WEAKFACTOR_THREADS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sc->add_option("--out", s.out, "Output file ('-' for standard output); default <subcommand>.<format>");
    sc->add_option("--format", s.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    for (const auto& key : entry.second) {
      s.reals[key] = 0.0;
      s.options[key] = sc->add_option(flag_name(key), s.reals[key], key);
    }
    if (name == "entrywise-rate" || name == "entrywise-coverage" || name == "panel-rate") {
      sc->add_option("--sizes", s.sizes, "Square grid sizes n = T (overrides --n/--T)")
          ->check(CLI::Range(2, 1000000));
    }
    if (name == "entrywise-rate" || name == "entrywise-coverage") {
      sc->add_option("--tau-fracs", s.tau_fracs, "Factor strengths as fractions of sqrt(nT)")
          ->check(CLI::PositiveNumber);
    }
    if (name == "panel-rate") {
      sc->add_option("--designs", s.designs, "Subset of strong weak_m weak_d over")
          ->check(CLI::IsMember({"strong", "weak_m", "weak_d", "over"}));
    }
    if (name == "entrywise-coverage") {
      s.flag_key = "calibrate";
      sc->add_flag("--calibrate", s.flag, "Calibrate C0 on an independent batch first");
    }
    if (name == "lower-bound-check") {
      s.flag_key = "transpose";
      sc->add_flag("--transpose", s.flag, "Use the column-side construction");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  const Subcommand* active = nullptr;
  for (const auto& [name, s] : subs)
    if (s.app->parsed()) active = &s;
  if (active == nullptr) {
    err << "no subcommand given\n";
    return kExitUsage;
  }

  const ExperimentConfig cfg = to_config(*active);
  ExperimentReport report;
  try {
    report = run_named_experiment(active->name, cfg);
  } catch (const ArgumentError& e) {
    err << "weakfactor " << active->name << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "weakfactor " << active->name << ": " << e.what() << "\n";
    return kExitExperimentFailure;
  }

  const std::string path =
      active->out.empty() ? active->name + "." + active->format : active->out;
  if (path == "-") {
    write_output(out, active->format, active->name, cfg, report);
  } else {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err << "weakfactor: cannot open " << path << " for writing\n";
      return kExitExperimentFailure;
    }
    write_output(file, active->format, active->name, cfg, report);
    if (!file) {
      err << "weakfactor: write to " << path << " failed\n";
      return kExitExperimentFailure;
    }
  }
  print_summary(path == "-" ? err : out, active->name, report);
  return report.failed ? kExitExperimentFailure : kExitSuccess;
}

}  // namespace weakfactor
