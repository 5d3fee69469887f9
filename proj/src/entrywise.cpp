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

#include "weakfactor/entrywise.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "weakfactor/random.hpp"

namespace weakfactor {

namespace {

void require_entry_design(const Mat& x, const char* where) {
  if (x.rows() < 2 || x.cols() < 2) {
    throw ArgumentError(std::string(where) + ": need n, T >= 2");
  }
  if (!x.bottomRows(x.rows() - 1).allFinite() || !x.rightCols(x.cols() - 1).allFinite()) {
    throw ArgumentError(std::string(where) + ": observed entries must be finite");
  }
}

// Observed data with the missing entry set to zero.
Mat observed(const Mat& x) {
  Mat z = x;
  z(0, 0) = 0.0;
  return z;
}

// Empirical q-quantile with the "smallest value covering a fraction q" rule.
double upper_quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto need = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  const std::size_t idx = need == 0 ? 0 : std::min(need, v.size()) - 1;
  return v[idx];
}

}  // namespace

Interval::Interval(double lo, double hi) : lower(lo), upper(hi) {
  if (!(lo <= hi)) throw ArgumentError("Interval: lower > upper");
}

Mat pca_loadings(const Mat& w, Index k) {
  return svd_truncated(w, k).U;
}

double plug_in_m11(const Mat& x, const Mat& loadings) {
  if (loadings.rows() != x.rows() || loadings.cols() < 1) {
    throw ArgumentError("plug_in_m11: loadings must have n rows");
  }
  const Index n = x.rows();
  const auto rest = loadings.bottomRows(n - 1);
  const Mat gram = rest.transpose() * rest;
  Eigen::LDLT<Mat> ldlt(gram);
  const double scale = std::max(1.0, gram.diagonal().maxCoeff());
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-14 * scale) {
    throw DegenerateLoadingError("plug_in_m11: L_{-1}'L_{-1} is singular");
  }
  const Vec f1 = ldlt.solve(rest.transpose() * x.col(0).tail(n - 1));
  return loadings.row(0).dot(f1);
}

double estimate_m11(const Mat& x) {
  require_entry_design(x, "estimate_m11");
  const Mat loadings = pca_loadings(x.rightCols(x.cols() - 1), 1);
  return plug_in_m11(x, loadings);
}

double adaptive_threshold(Index n, Index T, double kappa_bar) {
  if (!(kappa_bar > 0)) throw ArgumentError("adaptive_threshold: kappa_bar > 0");
  return 4.0 * std::max(std::sqrt(10.0) * kappa_bar, 2.0) *
         std::sqrt(3.0 * static_cast<double>(n + T));
}

EntrywiseEstimate adaptive_estimate_m11(const Mat& x, double kappa_bar) {
  require_entry_design(x, "adaptive_estimate_m11");
  EntrywiseEstimate out;
  out.threshold = adaptive_threshold(x.rows(), x.cols(), kappa_bar);
  out.spectral_stat = spectral_norm(observed(x));
  out.truncated = out.spectral_stat <= out.threshold;
  out.value = out.truncated ? 0.0 : estimate_m11(x);
  return out;
}

double adaptive_half_width(Index n, Index T, double spectral_stat, double c0) {
  if (!(c0 > 0)) throw ArgumentError("adaptive_half_width: C0 must be positive");
  const double root = std::sqrt(static_cast<double>(n + T));
  const double ratio = spectral_stat > 0 ? std::min(root / spectral_stat, 1.0) : 1.0;
  return 0.5 * c0 * ratio;
}

Interval rate_adaptive_ci(const Mat& x, double c0) {
  require_entry_design(x, "rate_adaptive_ci");
  const double center = estimate_m11(x);
  const double half =
      adaptive_half_width(x.rows(), x.cols(), spectral_norm(observed(x)), c0);
  return {center - half, center + half};
}

Interval adaptive_ci(const Mat& x, double kappa_bar, double c0) {
  if (!(c0 > 0)) throw ArgumentError("adaptive_ci: C0 must be positive");
  const EntrywiseEstimate est = adaptive_estimate_m11(x, kappa_bar);
  if (est.truncated) return {-kappa_bar, kappa_bar};
  // Above the threshold the truncated and untruncated estimates coincide.
  const double half = adaptive_half_width(x.rows(), x.cols(), est.spectral_stat, c0);
  return {est.value - half, est.value + half};
}

CalibrationResult calibrate_c0(const std::vector<FactorInstance>& grid,
                               double alpha, int reps, std::uint64_t seed) {
  if (grid.empty() || reps < 1 || !(alpha > 0 && alpha < 1)) {
    throw ArgumentError("calibrate_c0: need a nonempty grid, reps >= 1, alpha in (0,1)");
  }
  CalibrationResult out;
  out.alpha = alpha;
  out.c0 = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& inst = grid[g];
    std::vector<double> ratios;
    ratios.reserve(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
      Rng rng(derive_seed(seed, {g, static_cast<std::uint64_t>(r)}));
      const Mat x = sample_observation(inst, rng);
      const double err = std::abs(estimate_m11(x) - inst.m11());
      const double unit =
          adaptive_half_width(x.rows(), x.cols(), spectral_norm(observed(x)), 1.0);
      ratios.push_back(err / unit);
    }
    const double q = upper_quantile(std::move(ratios), 1.0 - alpha);
    out.point_quantiles.push_back(q);
    out.c0 = std::max(out.c0, q);
  }
  return out;
}

double estimate_noise_variance(const Mat& x, Index k_bar) {
  const Index p = std::min(x.rows(), x.cols());
  if (k_bar < 0 || k_bar > p - 1) {
    throw ArgumentError("estimate_noise_variance: k_bar must lie in [0, min(n,T) - 1]");
  }
  const Vec s = singular_values(x);
  const double tail = s.tail(s.size() - k_bar).squaredNorm();
  return tail / (static_cast<double>(x.rows()) * static_cast<double>(x.cols()));
}

Index eigenvalue_ratio_khat(const Mat& x, Index k_max) {
  const Index p = std::min(x.rows(), x.cols());
  if (k_max < 1 || k_max + 1 > p) {
    throw ArgumentError("eigenvalue_ratio_khat: need 1 <= k_max <= min(n,T) - 1");
  }
  const Vec lambda = singular_values(x).array().square();
  if (lambda(0) == 0.0) return 0;
  const double floor = 1e-12 * lambda(0);
  Index best = 1;
  double best_ratio = -1.0;
  for (Index j = 1; j <= k_max; ++j) {
    if (lambda(j) < floor) return j;
    const double ratio = lambda(j - 1) / lambda(j);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = j;
    }
  }
  return best;
}

PretestResult naive_pretest(const Mat& x, double alpha, Index k_max) {
  require_entry_design(x, "naive_pretest");
  if (!(alpha > 0 && alpha < 1)) throw ArgumentError("naive_pretest: alpha in (0,1)");
  PretestResult out;
  // Pre-test, PCA fit and residual variance all use W = X_{.,-1}, the fully
  // observed columns.
  const Mat w = x.rightCols(x.cols() - 1);
  out.k_hat = std::max<Index>(eigenvalue_ratio_khat(w, k_max), 1);
  const Index n = x.rows();
  const Index k = out.k_hat;

  const SvdResult<double> svd = svd_truncated(w, k);
  const Mat& loadings = svd.U;
  const auto rest = loadings.bottomRows(n - 1);

  Eigen::LDLT<Mat> rest_gram(rest.transpose() * rest);
  if (rest_gram.info() != Eigen::Success || !rest_gram.isPositive() ||
      rest_gram.vectorD().minCoeff() <= 1e-14) {
    throw DegenerateLoadingError("naive_pretest: singular loading system");
  }
  const Vec f1 = rest_gram.solve(rest.transpose() * x.col(0).tail(n - 1));
  out.value = loadings.row(0).dot(f1);

  // Leverage of row 1 among loadings and of column 1 among factor scores.
  const Vec l1 = loadings.row(0).transpose();
  const Mat scores = w.transpose() * loadings;
  Eigen::LDLT<Mat> score_gram(scores.transpose() * scores);
  if (score_gram.info() != Eigen::Success || !score_gram.isPositive() ||
      score_gram.vectorD().minCoeff() <= 0.0) {
    throw DegenerateLoadingError("naive_pretest: singular score system");
  }
  const double h_row = l1.dot((loadings.transpose() * loadings).ldlt().solve(l1));
  const double h_col = f1.dot(score_gram.solve(f1));

  const double sigma2 = estimate_noise_variance(w, k);
  out.standard_error = std::sqrt(sigma2 * (h_row + h_col));
  const double z = normal_quantile(1.0 - alpha / 2.0);
  out.interval = Interval(out.value - z * out.standard_error,
                          out.value + z * out.standard_error);
  return out;
}

Interval naive_pretest_ci(const Mat& x, double alpha, Index k_max) {
  return naive_pretest(x, alpha, k_max).interval;
}

double normal_quantile(double p) {
  if (!(p > 0 && p < 1)) throw ArgumentError("normal_quantile: p in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace weakfactor
