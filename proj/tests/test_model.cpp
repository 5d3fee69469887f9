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

#include "doctest.h"
#include "weakfactor/errors.hpp"
#include "weakfactor/model.hpp"

using namespace weakfactor;

TEST_CASE("membership of a flat rank-one matrix") {
  const Mat m = Mat::Constant(20, 20, 0.5);  // sigma_1 = 10
  const auto in_tau = check_membership(m, SpaceSpec::one_factor(1.0, 5.0));
  CHECK(in_tau.member);
  for (const auto& c : in_tau.checks) CHECK(c.holds);
  CHECK_FALSE(check_membership(m, SpaceSpec::null_entry(1.0, 5.0)).member);
  CHECK_FALSE(check_membership(m, SpaceSpec::one_factor(1.0, 10.5)).member);
  CHECK_FALSE(check_membership(m, SpaceSpec::one_factor(0.4, 5.0)).member);
  CHECK(check_membership(m, SpaceSpec::separated_entry(1.0, 5.0, 0.5)).member);
  CHECK_FALSE(check_membership(m, SpaceSpec::separated_entry(1.0, 5.0, 0.6)).member);

  Mat z = m;
  z(0, 0) = 0.3;
  const auto report = check_membership(z, SpaceSpec::null_entry(1.0, 5.0));
  CHECK_FALSE(report.member);
  CHECK(report.describe().find("A_11 = 0") != std::string::npos);
}

TEST_CASE("rank and two-factor spaces") {
  Vec a = Vec::Ones(6), b = Vec::Ones(5), c = Vec::Zero(6), d = Vec::Zero(5);
  c(0) = 1.0;
  d(1) = 1.0;
  const Mat two = make_rank_two(a, b, c, d);
  CHECK(check_membership(two, SpaceSpec::two_factor(2.0, 5.0, 1.0)).member);
  CHECK_FALSE(check_membership(two, SpaceSpec::one_factor(2.0, 5.0)).member);
  Mat three = two;
  three(5, 4) += 0.5;
  three(4, 3) -= 0.5;
  CHECK_FALSE(check_membership(three, SpaceSpec::base(2.0)).member);
  CHECK_THROWS_AS(check_membership(two, SpaceSpec::two_factor(1.0, 1.0, 2.0)), ArgumentError);
  CHECK_THROWS_AS(check_membership(two, SpaceSpec::interior(1.0, 1.0, 1.0)), ArgumentError);
}

TEST_CASE("interior space tightens both constraints") {
  const Mat m = Mat::Constant(10, 10, 0.5);  // sigma_1 = 5
  CHECK(check_membership(m, SpaceSpec::interior(1.0, 2.0, 0.5)).member);
  CHECK_FALSE(check_membership(m, SpaceSpec::interior(1.0, 4.0, 0.5)).member);
  CHECK_FALSE(check_membership(m, SpaceSpec::interior(0.8, 2.0, 0.5)).member);
}

TEST_CASE("FactorInstance rejects matrices outside the base space") {
  CHECK_THROWS_AS(FactorInstance(Mat::Constant(3, 3, 2.0), 1.0), MembershipError);
  CHECK_THROWS_AS(FactorInstance(Mat(0, 0), 1.0), ArgumentError);
  const FactorInstance ok(Mat::Constant(3, 4, 1.0), 1.0, "flat");
  CHECK(ok.m11() == 1.0);
  CHECK(ok.rows() == 3);
  CHECK(ok.cols() == 4);
  CHECK(ok.label() == "flat");
}

TEST_CASE("row-coherent instances hit the requested strength") {
  for (double frac : {0.1, 0.3, 1.0}) {
    const double tau = frac * 100.0;
    const auto inst = row_coherent_instance(100, 100, tau, 1.0);
    CHECK(spectral_norm(inst.M()) == doctest::Approx(tau).epsilon(1e-10));
    CHECK(inst.m11() == 1.0);
    CHECK(check_membership(inst.M(), SpaceSpec::one_factor(1.0, tau)).member);
  }
  CHECK_THROWS_AS(row_coherent_instance(100, 100, 5.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(row_coherent_instance(100, 100, 101.0, 1.0), ArgumentError);
}

TEST_CASE("sign instances") {
  Rng rng(4);
  const auto inst = sign_instance(30, 20, 12.0, 1.0, rng);
  CHECK(spectral_norm(inst.M()) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(max_abs_entry(inst.M()) == doctest::Approx(12.0 / std::sqrt(600.0)));
  CHECK(check_membership(inst.M(), SpaceSpec::one_factor(1.0, 12.0)).member);
  CHECK_THROWS_AS(sign_instance(4, 4, 5.0, 1.0, rng), ArgumentError);
}

TEST_CASE("sample_observation noise moments and determinism") {
  const FactorInstance inst(Mat::Constant(200, 150, 0.25), 1.0);
  Rng a(99), b(99), c(100);
  const Mat x = sample_observation(inst, a);
  CHECK(x == sample_observation(inst, b));
  CHECK(x != sample_observation(inst, c));
  const Mat e = x - inst.M();
  const double count = static_cast<double>(e.size());
  const double mean = e.mean();
  const double var = (e.array() - mean).square().sum() / (count - 1.0);
  CHECK(std::abs(mean) < 4.0 / std::sqrt(count));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / count));
}

TEST_CASE("sample_panel follows the structural equations") {
  const auto inst = orthogonal_panel_instance(120, 100, 30.0, 20.0, 0.5, 2.0, 0.5);
  Rng rng(7);
  const auto s = sample_panel(inst, rng);
  const Mat u = s.X - inst.D();
  const Mat eps = s.Y - inst.M() - inst.beta() * s.X;
  const double count = static_cast<double>(u.size());
  CHECK(std::sqrt(u.squaredNorm() / count) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::sqrt(eps.squaredNorm() / count) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(std::abs(trace_product(u, eps)) / count < 4.0 * 1.0 / std::sqrt(count));
}

TEST_CASE("orthogonal panel instances") {
  const auto inst = orthogonal_panel_instance(10, 12, 5.0, 3.0, 0.25);
  CHECK(inst.M().norm() == doctest::Approx(5.0));
  CHECK(inst.D().norm() == doctest::Approx(3.0));
  CHECK((inst.M().transpose() * inst.D()).norm() < 1e-12);
  CHECK((inst.M() * inst.D().transpose()).norm() < 1e-12);
  const double root_nt = std::sqrt(120.0);
  CHECK(check_panel_membership(inst, PanelSpace::robust()).member);
  CHECK(check_panel_membership(inst, PanelSpace::strong_factor(5.0 / root_nt, 3.0 / root_nt))
            .member);
  CHECK_FALSE(
      check_panel_membership(inst, PanelSpace::strong_factor(6.0 / root_nt, 0.0)).member);
  CHECK(check_panel_membership(inst, PanelSpace::general(1, 1, 1.0)).member);
  CHECK_FALSE(check_panel_membership(orthogonal_panel_instance(10, 12, 5.0, 3.0, 0.25, 3.0),
                                     PanelSpace::general(1, 1, 2.0))
                  .member);
}

TEST_CASE("panel strong-factor space rejects overlapping M and D") {
  const Mat m = make_rank_one(Vec::Ones(6), Vec::Ones(5));
  const PanelInstance inst(m, m, 1.0, 1.0, 0.0);
  CHECK(check_panel_membership(inst, PanelSpace::robust()).member);
  CHECK_FALSE(check_panel_membership(inst, PanelSpace::strong_factor(0.0, 0.0)).member);
  CHECK_THROWS_AS(PanelInstance(m, Mat::Ones(5, 5), 1.0, 1.0, 0.0), ArgumentError);
  CHECK_THROWS_AS(PanelInstance(m, m, 0.0, 1.0, 0.0), ArgumentError);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, {0, 0}) != derive_seed(1, {0, 1}));
  CHECK(derive_seed(1, {0, 1}) != derive_seed(1, {1, 0}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
}
