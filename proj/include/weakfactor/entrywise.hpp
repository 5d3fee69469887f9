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

// Estimation and inference for entry (1,1) of a low-rank mean matrix when
// X_11 is missing. None of the routines here read X(0, 0).

#ifndef WEAKFACTOR_ENTRYWISE_HPP
#define WEAKFACTOR_ENTRYWISE_HPP

#include <cstdint>
#include <vector>

#include "weakfactor/matrix_core.hpp"
#include "weakfactor/model.hpp"

namespace weakfactor {

/// Closed interval [lower, upper].
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  Interval() = default;
  Interval(double lo, double hi);

  double width() const { return upper - lower; }
  double center() const { return 0.5 * (lower + upper); }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

struct EntrywiseEstimate {
  double value = 0.0;
  double spectral_stat = 0.0;  // ||X with X_11 zeroed||
  double threshold = 0.0;
  bool truncated = true;       // spectral_stat <= threshold, and then value = 0
};

/// Top-k left singular vectors of W (n x k, orthonormal columns).
Mat pca_loadings(const Mat& w, Index k);

/// L_1' F_1 with F_1 the least-squares fit of X_{-1,1} on rows 2..n of the
/// loadings. For one column this is L_1 L_{-1}' X_{-1,1} / ||L_{-1}||^2.
/// Throws DegenerateLoadingError when L_{-1}'L_{-1} is singular.
double plug_in_m11(const Mat& x, const Mat& loadings);

/// Rank-one PCA estimate of M_11 from the observed entries of X (n, T >= 2).
double estimate_m11(const Mat& x);

/// 4 max{sqrt(10) kappa_bar, 2} sqrt(3 (n + T)).
double adaptive_threshold(Index n, Index T, double kappa_bar);

/// estimate_m11 when ||X_{-1,-1}|| exceeds the threshold, zero otherwise.
/// `kappa_bar` must upper bound the true entry bound.
EntrywiseEstimate adaptive_estimate_m11(const Mat& x, double kappa_bar);

/// (C0 / 2) min{sqrt(n + T) / spectral_stat, 1}.
double adaptive_half_width(Index n, Index T, double spectral_stat, double c0);

/// Interval centred at the (untruncated) PCA estimate with the rate-adaptive
/// half width. This is the branch adaptive_ci takes above the threshold.
Interval rate_adaptive_ci(const Mat& x, double c0);

/// [-kappa_bar, kappa_bar] below the threshold; rate_adaptive_ci above it.
Interval adaptive_ci(const Mat& x, double kappa_bar, double c0);

/// Default C0 shipped when no calibration has been run.
inline constexpr double kDefaultC0 = 8.0;

struct CalibrationResult {
  double c0 = kDefaultC0;
  double alpha = 0.05;
  /// Per calibration instance: empirical (1 - alpha) quantile of the ratio
  /// |estimate - M_11| / unit half width.
  std::vector<double> point_quantiles;
};

/// Smallest C0 giving at least 1 - alpha empirical coverage of
/// rate_adaptive_ci on every calibration instance, from `reps` draws each.
/// Replication r of instance g uses the stream derive_seed(seed, {g, r}).
CalibrationResult calibrate_c0(const std::vector<FactorInstance>& grid,
                               double alpha, int reps, std::uint64_t seed);

/// ||X - best rank-k_bar approximation||_F^2 / (nT).
double estimate_noise_variance(const Mat& x, Index k_bar);

/// argmax_{1 <= j <= k_max} lambda_j / lambda_{j+1} over eigenvalues of XX'.
/// The scan stops at the first j with lambda_{j+1} < 1e-12 lambda_1 and
/// returns j. Returns 0 for X = 0.
Index eigenvalue_ratio_khat(const Mat& x, Index k_max);

struct PretestResult {
  Interval interval;
  double value = 0.0;
  double standard_error = 0.0;
  Index k_hat = 0;
};

/// Pre-test the number of factors, fit rank-k_hat PCA on W = X_{.,-1}, and
/// report value +- z_{1 - alpha/2} se with
/// se^2 = sigma_hat^2 (h_row + h_col). The width shrinks like
/// n^{-1/2} + T^{-1/2} under strong factors.
PretestResult naive_pretest(const Mat& x, double alpha, Index k_max = 2);
Interval naive_pretest_ci(const Mat& x, double alpha, Index k_max = 2);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace weakfactor

#endif  // WEAKFACTOR_ENTRYWISE_HPP
