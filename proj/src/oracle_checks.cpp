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

#include "weakfactor/oracle_checks.hpp"

#include <cmath>

#include "weakfactor/errors.hpp"
#include "weakfactor/montecarlo.hpp"

namespace weakfactor {

MomentCheck sample_mean(const std::vector<double>& values) {
  if (values.empty()) throw ArgumentError("sample_mean: no values");
  MomentCheck out;
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.estimate = mean;
  out.se = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  out.used = values.size();
  return out;
}

MomentCheck relative_check(const std::vector<double>& values, double oracle,
                           double rel_tol) {
  MomentCheck out = sample_mean(values);
  out.oracle = oracle;
  out.tolerance = rel_tol * std::abs(oracle);
  out.pass = std::abs(out.estimate - oracle) <= out.tolerance;
  return out;
}

MomentCheck trimmed_check(const std::vector<double>& values, double oracle,
                          double keep, double n_se) {
  if (!(keep > 0.0 && keep <= 1.0)) throw ArgumentError("trimmed_check: keep in (0, 1]");
  const double cut = empirical_quantile(values, keep);
  std::vector<double> kept;
  kept.reserve(values.size());
  for (double v : values)
    if (v <= cut) kept.push_back(v);
  MomentCheck out = sample_mean(kept);
  out.oracle = oracle;
  out.tolerance = n_se * out.se;
  out.pass = std::abs(out.estimate - oracle) <= out.tolerance;
  return out;
}

MomentCheck upper_bound_check(const std::vector<double>& values, double bound,
                              double n_se) {
  MomentCheck out = sample_mean(values);
  out.oracle = bound;
  out.tolerance = n_se * out.se;
  out.pass = out.estimate <= bound + out.tolerance;
  return out;
}

LrTest calibrate_lr_test(const std::vector<double>& null_stats,
                         const std::vector<double>& alt_stats, double alpha) {
  if (null_stats.empty() || alt_stats.empty()) {
    throw ArgumentError("calibrate_lr_test: empty batch");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("calibrate_lr_test: alpha in (0, 1)");
  LrTest out;
  out.alpha = alpha;
  out.critical = empirical_quantile(null_stats, 1.0 - alpha);
  auto rate = [&](const std::vector<double>& v) {
    double k = 0.0;
    for (double s : v)
      if (s > out.critical) k += 1.0;
    return k / static_cast<double>(v.size());
  };
  out.size = rate(null_stats);
  out.power = rate(alt_stats);
  out.power_se =
      std::sqrt(out.power * (1.0 - out.power) / static_cast<double>(alt_stats.size()));
  return out;
}

}  // namespace weakfactor
