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

// Comparisons of Monte Carlo moments with closed-form oracle values, and the
// empirically calibrated likelihood-ratio test.

#ifndef WEAKFACTOR_ORACLE_CHECKS_HPP
#define WEAKFACTOR_ORACLE_CHECKS_HPP

#include <string>
#include <vector>

namespace weakfactor {

struct MomentCheck {
  double estimate = 0.0;  // Monte Carlo mean (possibly trimmed)
  double se = 0.0;        // its standard error
  double oracle = 0.0;
  double tolerance = 0.0; // allowed |estimate - oracle| (or excess for bounds)
  std::size_t used = 0;   // draws entering the mean
  bool pass = false;
};

/// Sample mean with standard error.
MomentCheck sample_mean(const std::vector<double>& values);

/// |mean - oracle| <= rel_tol * |oracle|.
MomentCheck relative_check(const std::vector<double>& values, double oracle,
                           double rel_tol);

/// Mean of the draws at or below the empirical `keep` quantile, compared with
/// the oracle to within n_se standard errors of that trimmed mean. Meant for
/// heavy-tailed statistics such as squared likelihood ratios; the trimming
/// biases the mean downwards by the tail mass above the cut.
MomentCheck trimmed_check(const std::vector<double>& values, double oracle,
                          double keep, double n_se);

/// mean <= bound + n_se * se.
MomentCheck upper_bound_check(const std::vector<double>& values, double bound,
                              double n_se);

struct LrTest {
  double alpha = 0.05;
  double critical = 0.0;  // (1 - alpha) empirical quantile of null statistics
  double size = 0.0;      // rejection rate on the calibration batch
  double power = 0.0;     // rejection rate on the alternative batch
  double power_se = 0.0;  // sqrt(power (1 - power) / R_alt)
};

/// Rejects when the statistic exceeds the critical value calibrated on
/// `null_stats`; power is measured on the separate `alt_stats` batch.
LrTest calibrate_lr_test(const std::vector<double>& null_stats,
                         const std::vector<double>& alt_stats, double alpha);

}  // namespace weakfactor

#endif  // WEAKFACTOR_ORACLE_CHECKS_HPP
