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

// The named desk-scale experiments behind the command-line subcommands.

#ifndef WEAKFACTOR_EXPERIMENTS_HPP
#define WEAKFACTOR_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weakfactor/montecarlo.hpp"

namespace weakfactor {

struct ExperimentConfig {
  std::optional<Index> n;
  std::optional<Index> T;
  std::optional<int> reps;
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<Index> sizes;          // square grid n = T; overrides n, T
  std::vector<double> tau_fracs;     // tau / sqrt(nT)
  std::vector<std::string> designs;  // panel-rate designs
  KeyValues params;                  // named reals (tau, kappa, alpha, C0, ...)

  double get(const std::string& key, double fallback) const;
  bool has(const std::string& key) const;
};

struct ExperimentReport {
  ResultTable table;
  KeyValues metrics;
  std::vector<std::string> notes;
  nlohmann::json provenance = nlohmann::json::object();
  bool failed = false;

  double metric(const std::string& key) const;
};

/// Plug-in error of M_11 on row-coherent instances over a tau (and size) grid.
/// Metrics: "slope" (median error vs tau, single size with >= 3 taus),
/// "scaled_ratio" (max / min of median error * tau / sqrt(n + T) across sizes
/// at equal tau / sqrt(nT)).
ExperimentReport run_entrywise_rate(const ExperimentConfig& cfg);

/// Adaptive CI coverage and width on a tau grid plus a below-threshold point.
/// With params "calibrate" = 1, C0 is calibrated first on an independent
/// batch. Metrics: "c0", "min_coverage", "min_rate_coverage",
/// "truncated_fraction" and per point "coverage:<label>",
/// "rate_coverage:<label>".
ExperimentReport run_entrywise_coverage(const ExperimentConfig& cfg);

/// Pre-test CI at the perturbation pair (base and alt share observed data).
/// Metrics: "coverage_base", "coverage_alt", "median_width_base",
/// "width_bound", "c0", "mean_khat_base".
ExperimentReport run_adaptivity_demo(const ExperimentConfig& cfg);

/// Calibrated LR test at the rank-one two-point pair. Metrics: "critical",
/// "size", "power", "power_se", "bound", "tv_upper", "chi2_cross",
/// "separation".
ExperimentReport run_lower_bound_check(const ExperimentConfig& cfg);

/// sqrt(nT) RMSE of the panel estimator over designs and sizes. Metrics:
/// "scaled_rmse:<label>" and "ratio:<design>".
ExperimentReport run_panel_rate(const ExperimentConfig& cfg);

/// CI* width and coverage at theta1 and theta2. Metrics: "width_formula",
/// "max_width_dev", "coverage_theta1", "coverage_theta2", "bound", "kl",
/// "sigma_theta1", "sd_scaled_theta1".
ExperimentReport run_panel_tradeoff(const ExperimentConfig& cfg);

/// Monte Carlo against closed forms: KL (panel pair), chi-square cross moment
/// and TV bound (rank-one pair). Metrics: "<check>_mc", "<check>_se",
/// "<check>_oracle", "<check>_pass" for check in kl, chi2, tv.
ExperimentReport run_oracle_check(const ExperimentConfig& cfg);

const std::vector<std::string>& experiment_names();

/// Dispatch by subcommand name; throws ArgumentError for unknown names.
ExperimentReport run_named_experiment(const std::string& name,
                                      const ExperimentConfig& cfg);

}  // namespace weakfactor

#endif  // WEAKFACTOR_EXPERIMENTS_HPP
