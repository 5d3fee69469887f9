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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "weakfactor/errors.hpp"
#include "weakfactor/panel.hpp"

using namespace weakfactor;

TEST_CASE("estimate_beta basic properties") {
  Rng rng(1);
  const auto inst = orthogonal_panel_instance(30, 20, 25.0, 25.0, 0.5);
  const auto s = sample_panel(inst, rng);

  const auto zero = estimate_beta(s.X, Mat(Mat::Zero(30, 20)), 1, 1);
  CHECK(zero.beta_hat == 0.0);
  CHECK(zero.numerator == 0.0);

  const auto tall = estimate_beta(s.X, s.Y, 1, 1);
  const Mat xt = s.X.transpose();
  const Mat yt = s.Y.transpose();
  const auto wide = estimate_beta(xt, yt, 1, 1);
  CHECK(tall.flipped);
  CHECK_FALSE(wide.flipped);
  CHECK(tall.beta_hat == doctest::Approx(wide.beta_hat).epsilon(1e-12));
  CHECK(tall.r_hat == doctest::Approx(wide.r_hat).epsilon(1e-12));
  CHECK(tall.denominator > 0.0);
  CHECK(tall.r_hat >= 2.0 - 1e-6);
  CHECK(tall.r_hat <= 3.0 + 1e-6);

  CHECK_THROWS_AS(estimate_beta(s.X, s.Y, 15, 5), ArgumentError);
  CHECK_THROWS_AS(estimate_beta(s.X, Mat(Mat::Zero(20, 30)), 1, 1), ArgumentError);
  CHECK_THROWS_AS(estimate_beta(Mat(Mat::Zero(30, 20)), s.Y, 0, 0), DegenerateDesignError);
}

TEST_CASE("estimate_beta with r1 = 0 is the projected OLS ratio") {
  Rng rng(2);
  const Mat x = rng.normal_matrix(12, 15);
  const Mat y = 0.3 * x + rng.normal_matrix(12, 15);
  const auto e = estimate_beta(x, y, 0, 0);
  CHECK(e.r_hat == 0.0);
  CHECK(e.beta_hat == doctest::Approx(trace_product(x, y) / x.squaredNorm()).epsilon(1e-13));
}

TEST_CASE("effective_rank_rhat") {
  Mat a = Mat::Zero(6, 1), l = Mat::Zero(6, 2);
  a(0, 0) = 1.0;
  l(1, 0) = 1.0;
  l(2, 1) = 1.0;
  CHECK(effective_rank_rhat(a, l, 1, 2) == doctest::Approx(3.0));
  l(0, 1) = 2.0;
  l(2, 1) = 0.0;
  CHECK(effective_rank_rhat(a, l, 1, 2) == doctest::Approx(2.0));

  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Mat alpha = rng.normal_matrix(20, 1);
    const Mat lambda = rng.normal_matrix(20, 3);
    const double brute = 4.0 - (projector(lambda) * projector(alpha)).trace();
    CHECK(std::abs(effective_rank_rhat(alpha, lambda, 1, 3) - brute) < 1e-10);
  }
  CHECK_THROWS_AS(effective_rank_rhat(a, l, 2, 2), ArgumentError);
}

TEST_CASE("ls_estimator trivial cases") {
  Rng rng(4);
  const Mat x = rng.normal_matrix(10, 8);
  const auto zero = ls_estimator(x, Mat(Mat::Zero(10, 8)), 2);
  CHECK(zero.beta == 0.0);
  CHECK(zero.A.norm() == 0.0);
  CHECK(zero.converged);
  CHECK(zero.iterations == 1);

  const Mat y = rng.normal_matrix(10, 8);
  const auto ols = ls_estimator(x, y, 0);
  CHECK(ols.iterations == 1);
  CHECK(ols.beta == doctest::Approx(trace_product(x, y) / x.squaredNorm()).epsilon(1e-14));
  CHECK_THROWS_AS(ls_estimator(x, y, 8), ArgumentError);
  CHECK_THROWS_AS(ls_estimator(Mat(Mat::Zero(10, 8)), y, 1), DegenerateDesignError);
}

TEST_CASE("ls_estimator objective never increases") {
  const auto inst = orthogonal_panel_instance(40, 30, 20.0, 10.0, -0.4);
  Rng rng(5);
  const auto s = sample_panel(inst, rng);
  const auto fit = ls_estimator(s.X, s.Y, 2);
  CHECK(fit.converged);
  for (std::size_t i = 1; i < fit.objective.size(); ++i) {
    CHECK(fit.objective[i] <= fit.objective[i - 1] * (1 + 1e-12));
  }
  CHECK(fit.objective.back() ==
        doctest::Approx((s.Y - fit.A - fit.beta * s.X).squaredNorm()).epsilon(1e-10));
  CHECK(numerical_rank(fit.A, 1e-10) <= 2);
  CHECK(fit.iterations > 1);
  const double gradient = trace_product(s.X, Mat(s.Y - fit.A - fit.beta * s.X));
  CHECK(std::abs(gradient) <= 1e-6 * s.X.norm() * s.Y.norm());
}

TEST_CASE("sigma_theta") {
  const Mat m = make_rank_one(Vec::Ones(5), Vec::Ones(4));
  CHECK(sigma_theta(PanelInstance(m, Mat::Zero(5, 4), 1.0, 1.0, 0.0)) == doctest::Approx(1.0));

  const double kappa2 = 3.0;
  const auto inst = orthogonal_panel_instance(20, 30, 10.0, kappa2 * std::sqrt(600.0), 0.0);
  CHECK(sigma_theta(inst) == doctest::Approx(1.0 / std::sqrt(1.0 + kappa2 * kappa2)).epsilon(1e-12));

  Rng rng(6);
  for (int i = 0; i < 5; ++i) {
    const Mat mm = rng.normal_matrix(7, 1) * rng.normal_matrix(1, 6) +
                   rng.normal_matrix(7, 1) * rng.normal_matrix(1, 6);
    const Mat d = rng.normal_matrix(7, 6);
    const PanelInstance p(mm, d, 1.5, 0.7, 0.2);
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(mm), codt(Mat(mm.transpose()));
    const Mat pi_m = Mat::Identity(7, 7) - mm * cod.pseudoInverse();
    const Mat pi_mt = Mat::Identity(6, 6) - mm.transpose() * codt.pseudoInverse();
    const double tr = (pi_mt * d.transpose() * pi_m * d).trace();
    const double brute = 1.5 / std::sqrt(0.49 + tr / 42.0);
    CHECK(std::abs(sigma_theta(p) - brute) < 1e-10);
  }
}

TEST_CASE("ci_star width") {
  CHECK(2.0 * ci_star_half_width(10, 10, 0.0) == doctest::Approx(0.392).epsilon(1e-14));
  CHECK(2.0 * ci_star_half_width(100, 100, 0.0) == doctest::Approx(0.0392).epsilon(1e-14));
  CHECK(2.0 * ci_star_half_width(100, 100, 10.0) ==
        doctest::Approx(3.92 / (100.0 * std::sqrt(101.0))).epsilon(1e-14));
  CHECK(2.0 * ci_star_half_width(100, 100, 10.0) == doctest::Approx(3.9006e-3).epsilon(1e-4));
  Rng rng(7);
  const Mat x = rng.normal_matrix(10, 10);
  const Mat y = rng.normal_matrix(10, 10);
  const Interval ci = ci_star(x, y, 0.0);
  CHECK(ci.width() == doctest::Approx(0.392).epsilon(1e-12));
  CHECK(ci.center() == doctest::Approx(ls_estimator(x, y, 2).beta).epsilon(1e-12));
  CHECK_THROWS_AS(ci_star(x, y, -1.0), ArgumentError);
}

TEST_CASE("least squares on a strong-factor instance") {
  const Index n = 100, T = 100;
  const double root_nt = 100.0;
  const double kappa2 = 1.0;
  const double beta = 0.5;
  const auto inst = orthogonal_panel_instance(n, T, root_nt, kappa2 * root_nt, beta);
  const double sigma = sigma_theta(inst);
  const int seeds = 500;
  std::vector<double> scaled;
  int covered = 0;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(derive_seed(77, {static_cast<std::uint64_t>(s)}));
    const auto d = sample_panel(inst, rng);
    const double b = ls_estimator(d.X, d.Y, 2).beta;
    scaled.push_back((b - beta) * root_nt);
    if (std::abs(b - beta) <= ci_star_half_width(n, T, kappa2)) ++covered;
  }
  double mean = 0.0;
  for (double v : scaled) mean += v;
  mean /= seeds;
  double var = 0.0;
  for (double v : scaled) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / (seeds - 1));
  CHECK(std::abs(sd - sigma) <= 0.25 * sigma);
  CHECK(covered >= static_cast<int>(0.93 * seeds));
}

TEST_CASE("panel estimator rate on a strong design") {
  std::vector<double> rmse;
  for (Index n : {50, 100}) {
    const double root_nt = static_cast<double>(n);
    const auto inst = orthogonal_panel_instance(n, n, root_nt, root_nt, 0.5);
    double sq = 0.0;
    const int seeds = 100;
    for (int s = 0; s < seeds; ++s) {
      Rng rng(derive_seed(88, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s)}));
      const auto d = sample_panel(inst, rng);
      const double e = estimate_beta(d.X, d.Y, 1, 1).beta_hat - 0.5;
      sq += e * e;
    }
    rmse.push_back(root_nt * std::sqrt(sq / seeds));
  }
  CHECK(std::isfinite(rmse[0]));
  CHECK(std::max(rmse[0], rmse[1]) / std::min(rmse[0], rmse[1]) < 2.0);
}
