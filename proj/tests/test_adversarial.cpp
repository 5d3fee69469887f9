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

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/constants/constants.hpp>

#include "doctest.h"
#include "weakfactor/adversarial.hpp"
#include "weakfactor/errors.hpp"
#include "weakfactor/oracle_checks.hpp"
#include "weakfactor/serialization.hpp"

using namespace weakfactor;

namespace {

// Dense covariance block (x) I_m and stacked mean.
Mat dense_covariance(const KroneckerGaussian& g) {
  const Index p = g.block.rows();
  Mat out = Mat::Zero(p * g.m, p * g.m);
  for (Index a = 0; a < p; ++a)
    for (Index b = 0; b < p; ++b)
      out.block(a * g.m, b * g.m, g.m, g.m) = g.block(a, b) * Mat::Identity(g.m, g.m);
  return out;
}

Vec observed(const Mat& m) {
  Vec v(m.size() - 1);
  Index k = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (i != 0 || j != 0) v(k++) = m(i, j);
  return v;
}

}  // namespace

TEST_CASE("rank-one pair structure") {
  for (bool transpose : {false, true}) {
    const Index n = 40, T = 30;
    const double kappa = 1.0, alpha = 0.05;
    const double tau = kappa * std::sqrt(static_cast<double>(n * T)) / 12.0;
    const auto pair = thm1_pair(n, T, tau, kappa, alpha, transpose);
    const Mat& null_m = pair.null_instance.M();
    const Mat& alt_m = pair.alt_instance.M();
    CHECK(null_m(0, 0) == 0.0);
    CHECK(numerical_rank(null_m, 1e-12) == 1);
    CHECK(numerical_rank(alt_m, 1e-12) == 1);
    CHECK(check_membership(null_m, SpaceSpec::null_entry(kappa, tau)).member);
    const double rho = pair.construction.param("rho");
    CHECK(std::abs(alt_m(0, 0)) >= rho * (1 - 1e-12));
    CHECK(check_membership(alt_m, SpaceSpec::separated_entry(kappa, tau, rho)).member);

    const double c1 = pair.construction.param("c1");
    const double c2 = pair.construction.param("c2");
    const double side = static_cast<double>(transpose ? T : n) - 1.0;
    const double gap = (zero_entry_11(alt_m) - zero_entry_11(null_m)).squaredNorm();
    CHECK(gap == doctest::Approx(c1 * c1 * c2 * c2 * side).epsilon(1e-12));
    REQUIRE(pair.info.tv_upper);
    CHECK(*pair.info.tv_upper <= alpha);
    CHECK(*pair.info.tv_upper == doctest::Approx(std::sqrt(std::expm1(gap))).epsilon(1e-12));
    CHECK(pair.separation == doctest::Approx(rho));
  }
  const double q = std::sqrt(std::log(1.0025)) / 2.0;
  CHECK(std::sqrt(std::expm1(4.0 * q * q)) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("rank-one pair rejects inputs outside its hypotheses") {
  CHECK_THROWS_AS(thm1_pair(40, 30, 3.0, 1.0, 0.05), ArgumentError);
  CHECK_THROWS_AS(thm1_pair(1, 30, 0.1, 1.0, 0.05), ArgumentError);
  CHECK_THROWS_AS(thm1_pair(40, 30, 1.0, 1.0, 1.5), ArgumentError);
  CHECK_THROWS_AS(thm1_pair(40, 30, 1.0, -1.0, 0.05), ArgumentError);
}

TEST_CASE("perturbation pair is observationally identical") {
  const Index n = 100, T = 100;
  Rng rng(5);
  const auto base = sign_instance(n, T, 50.0, 0.5, rng);
  const double tau0 = 100.0 / 24.0;
  const auto pair = thm4_perturbation(base, 0.5, 1.0, tau0, 1.0);
  CHECK(pair.construction.param("c0") == 0.5);
  CHECK(zero_entry_11(pair.null_instance.M()) == zero_entry_11(pair.alt_instance.M()));
  CHECK(pair.alt_instance.m11() - pair.null_instance.m11() == 0.5);
  const Vec s = singular_values(pair.alt_instance.M());
  CHECK(s(1) <= 0.5 + 1e-12);
  CHECK(s(0) >= tau0);
  CHECK(*pair.info.tv_upper == 0.0);
  CHECK(*pair.info.kl == 0.0);

  const auto weak = sign_instance(n, T, 5.0, 0.5, rng);
  CHECK_THROWS_AS(thm4_perturbation(weak, 0.5, 1.0, tau0, 1.0), MembershipError);
  CHECK_THROWS_AS(thm4_perturbation(base, 1.0, 1.0, tau0, 1.0), ArgumentError);
}

TEST_CASE("panel pair divergence") {
  const Index n = 6, T = 5;
  const auto truth = orthogonal_panel_instance(n, T, 4.0, 3.0, 0.0);
  for (double c : {1.0, 2.0, 0.3}) {
    const auto pair = thm7_pair(truth.M(), truth.D(), c, n, T);
    REQUIRE(pair.info.kl);
    CHECK(*pair.info.kl == doctest::Approx(c * c / 2.0).epsilon(1e-12));
    CHECK(std::abs(*pair.info.kl - c * c / 2.0) < 1e-10);
    const auto p1 = panel_distribution(pair.null_instance);
    const auto p2 = panel_distribution(pair.alt_instance);
    CHECK((p1.mean - p2.mean).norm() < 1e-12);
    const double dense = gaussian_kl(p1.mean, dense_covariance(p1), p2.mean, dense_covariance(p2));
    CHECK(std::abs(dense - c * c / 2.0) < 1e-10);
    CHECK(std::abs(gaussian_kl(p1, p2) - dense) < 1e-10);
  }
  const auto tiny = thm7_pair(truth.M(), truth.D(), 1e-6, n, T);
  CHECK(*tiny.info.kl < 1e-11);

  const double delta = 1.0 / std::sqrt(static_cast<double>(n * T));
  Mat s2(2, 2);
  s2 << delta * delta + 1.0, delta, delta, 1.0;
  KroneckerGaussian a{Vec::Zero(2 * n * T), Mat::Identity(2, 2), n * T};
  KroneckerGaussian b{Vec::Zero(2 * n * T), s2, n * T};
  CHECK(std::abs(gaussian_kl(a, b) - 0.5) < 1e-10);

  CHECK_THROWS_AS(thm7_pair(truth.M(), truth.D(), 4.0, n, T), ArgumentError);
  CHECK_THROWS_AS(thm7_pair(truth.M(), truth.D(), 1.0, n, T, 100.0, 0.0), MembershipError);
}

TEST_CASE("dense gaussian_kl") {
  Rng rng(2);
  const Mat g = rng.normal_matrix(4, 4);
  const Mat s = g * g.transpose() + Mat::Identity(4, 4);
  const Vec mu = rng.normal_matrix(4, 1).col(0);
  CHECK(std::abs(gaussian_kl(mu, s, mu, s)) < 1e-12);
  const Vec d = rng.normal_matrix(4, 1).col(0);
  const Mat id = Mat::Identity(4, 4);
  CHECK(gaussian_kl(mu, id, Vec(mu + d), id) == doctest::Approx(d.squaredNorm() / 2.0));
  Mat bad = id;
  bad(2, 2) = -1.0;
  CHECK_THROWS_AS(gaussian_kl(mu, bad, mu, id), ArgumentError);
  CHECK_THROWS_AS(gaussian_kl(mu, id, Vec(Vec::Zero(3)), id), ArgumentError);
}

TEST_CASE("chi_square_cross") {
  Rng rng(3);
  const Vec mu0 = rng.normal_matrix(5, 1).col(0);
  CHECK(chi_square_cross(mu0, mu0, mu0) == 1.0);
  Vec d1 = Vec::Zero(5), d2 = Vec::Zero(5);
  d1(0) = 0.7;
  d2(3) = -1.2;
  CHECK(chi_square_cross(mu0, Vec(mu0 + d1), Vec(mu0 + d2)) == doctest::Approx(1.0));

  // E_0[(dP_d / dP_0)^2] reduces to a one-dimensional integral along d.
  using boost::math::quadrature::gauss_kronrod;
  const double root_two_pi = boost::math::constants::root_two_pi<double>();
  for (double r : {0.0, 0.25, 0.6, 1.0}) {
    const Vec d = r * Vec::Ones(3) / std::sqrt(3.0);
    auto integrand = [r, root_two_pi](double z) {
      return std::exp(-0.5 * z * z + 2.0 * r * z - r * r) / root_two_pi;
    };
    const double quad = gauss_kronrod<double, 61>::integrate(integrand, -20.0, 20.0, 15, 1e-14);
    CHECK(std::abs(chi_square_cross(Vec(Vec::Zero(3)), d, d) - quad) < 1e-6);
  }
}

TEST_CASE("tv_discrepancy_upper") {
  Rng rng(4);
  const Mat a = rng.normal_matrix(4, 5);
  CHECK(tv_discrepancy_upper(a, a) == 0.0);
  Mat b = a;
  b(0, 0) += 3.0;
  CHECK(tv_discrepancy_upper(a, b) == 0.0);
  b(2, 3) += 0.5;
  CHECK(tv_discrepancy_upper(a, b) == doctest::Approx(std::sqrt(std::expm1(0.25))));
}

TEST_CASE("likelihood_ratio_stat") {
  Rng rng(6);
  const Mat null_m = rng.normal_matrix(5, 4);
  const Mat alt_m = null_m + 0.3 * rng.normal_matrix(5, 4);
  const Mat x = rng.normal_matrix(5, 4);
  CHECK(likelihood_ratio_stat(x, null_m, null_m) == 0.0);
  const double gap = (observed(alt_m) - observed(null_m)).squaredNorm();
  CHECK(likelihood_ratio_stat(alt_m, null_m, alt_m) == doctest::Approx(gap / 2.0).epsilon(1e-12));
  CHECK(likelihood_ratio_stat(null_m, null_m, alt_m) == doctest::Approx(-gap / 2.0).epsilon(1e-12));
  Mat shifted = x;
  shifted(0, 0) += 10.0;
  CHECK(likelihood_ratio_stat(shifted, null_m, alt_m) == likelihood_ratio_stat(x, null_m, alt_m));
}

TEST_CASE("likelihood moments under the null of a small rank-one pair") {
  const Index n = 8, T = 8;
  const double kappa = 12.0, alpha = 0.5;
  const auto pair = thm1_pair(n, T, kappa * 8.0 / 12.0, kappa, alpha);
  const Mat& null_m = pair.null_instance.M();
  const Mat& alt_m = pair.alt_instance.M();
  std::vector<double> abs_dev, square;
  for (int r = 0; r < 40000; ++r) {
    Rng rng(derive_seed(606, {static_cast<std::uint64_t>(r)}));
    const Mat x = sample_observation(pair.null_instance, rng);
    const double llr = likelihood_ratio_stat(x, null_m, alt_m);
    abs_dev.push_back(std::abs(std::expm1(llr)));
    square.push_back(std::exp(2.0 * llr));
  }
  CHECK(upper_bound_check(abs_dev, *pair.info.tv_upper, 3.0).pass);
  const auto chi2 = trimmed_check(square, *pair.info.chi2_cross, 0.9999, 3.0);
  CHECK(chi2.pass);
  CHECK(chi2.used < square.size());
}

TEST_CASE("Monte Carlo log-ratio matches the panel divergence") {
  const Index n = 4, T = 4;
  const auto truth = orthogonal_panel_instance(n, T, 4.0, 4.0, 0.0);
  const auto pair = thm7_pair(truth.M(), truth.D(), 1.0, n, T);
  std::vector<double> llr;
  for (int r = 0; r < 40000; ++r) {
    Rng rng(derive_seed(707, {static_cast<std::uint64_t>(r)}));
    const auto s = sample_panel(pair.alt_instance, rng);
    llr.push_back(panel_log_likelihood_ratio(s.X, s.Y, pair.alt_instance, pair.null_instance));
  }
  const auto m = sample_mean(llr);
  CHECK(std::abs(m.estimate - 0.5) <= 4.0 * m.se);
  CHECK(relative_check(llr, 0.5, 0.04).pass);
}

TEST_CASE("serialization round trip") {
  const auto pair = thm1_pair(10, 12, 0.5, 1.0, 0.05);
  const auto j = to_json(pair);
  CHECK(j["construction"]["name"] == "thm1_pair");
  const auto back = factor_instance_from_json(j["alt"]);
  CHECK(back.M() == pair.alt_instance.M());
  CHECK(back.kappa() == 1.0);
  CHECK(j["info"]["kl"].is_null());

  const auto panel = orthogonal_panel_instance(5, 4, 2.0, 1.0, 0.25);
  const auto p = panel_instance_from_json(to_json(panel));
  CHECK(p.D() == panel.D());
  CHECK(p.beta() == 0.25);
  CHECK_THROWS_AS(factor_instance_from_json(nlohmann::json{{"n", 2}}), ArgumentError);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::array({1, 2, 3}), 2, 2), ArgumentError);
}
