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
#include "weakfactor/matrix_core.hpp"
#include "weakfactor/random.hpp"

using namespace weakfactor;

namespace {

// Largest singular value by power iteration on A'A.
double power_iteration_sigma1(const Mat& a, int iters = 5000) {
  Vec v = Vec::Ones(a.cols()).normalized();
  double sigma = 0.0;
  for (int i = 0; i < iters; ++i) {
    Vec w = a.transpose() * (a * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    v = w / norm;
    const double next = (a * v).norm();
    if (std::abs(next - sigma) <= 1e-15 * next) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace

TEST_CASE("svd_truncated on identity and rank one") {
  const auto id = svd_truncated(Mat(Mat::Identity(3, 3)), 2);
  CHECK(id.S(0) == doctest::Approx(1.0));
  CHECK(id.S(1) == doctest::Approx(1.0));
  CHECK((id.U.transpose() * id.U - Mat::Identity(2, 2)).norm() < 1e-12);

  Vec a(3), b(4);
  a << 2, 0, 0;
  b << 0, 3, 0, 0;
  const auto r1 = svd_truncated(Mat(a * b.transpose()), 1);
  CHECK(r1.S(0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("svd_truncated residual matches the full decomposition") {
  Rng rng(11);
  const Mat a = rng.normal_matrix(10, 7);
  const auto top = svd_truncated(a, 3);
  Eigen::JacobiSVD<Mat> full(a);
  const Vec s = full.singularValues();
  const double tail = std::sqrt(s.tail(4).squaredNorm());
  CHECK(std::abs((a - top.reconstruct()).norm() - tail) < 1e-8);
  CHECK((top.U.transpose() * top.U - Mat::Identity(3, 3)).norm() < 1e-10);
  CHECK((top.V.transpose() * top.V - Mat::Identity(3, 3)).norm() < 1e-10);
  CHECK(top.S(0) >= top.S(1));
  CHECK(top.S(1) >= top.S(2));
  CHECK_THROWS_AS(svd_truncated(a, 0), ArgumentError);
  CHECK_THROWS_AS(svd_truncated(a, 8), ArgumentError);
}

TEST_CASE("exactly rank-one square input decomposes") {
  Vec l = Vec::Constant(100, std::sqrt(3.0 / 99.0));
  l(0) = 1.0;
  const Mat m = l * Vec::Ones(100).transpose();
  const Vec s = singular_values(m);
  CHECK(s.allFinite());
  CHECK(s(0) == doctest::Approx(l.norm() * 10.0).epsilon(1e-12));
  CHECK(s(1) < 1e-10);
}

TEST_CASE("projector and annihilator") {
  Mat e1 = Mat::Zero(3, 1);
  e1(0, 0) = 1.0;
  Mat expect = Mat::Zero(3, 3);
  expect(0, 0) = 1.0;
  CHECK((projector(e1) - expect).norm() < 1e-14);
  CHECK((annihilator(e1) - Vec(Vec::Ones(3) - Vec::Unit(3, 0)).asDiagonal().toDenseMatrix()).norm() <
        1e-14);

  Rng rng(3);
  const Mat q = Eigen::HouseholderQR<Mat>(rng.normal_matrix(6, 6)).householderQ() *
                Mat::Identity(6, 2);
  CHECK((projector(q) - q * q.transpose()).norm() < 1e-12);

  Vec a(4);
  a << 1, -2, 0.5, 3;
  Mat dup(4, 2);
  dup << a, 2 * a;
  CHECK((projector(dup) - a * a.transpose() / a.squaredNorm()).norm() < 1e-12);
  CHECK(annihilator(dup).trace() == doctest::Approx(3.0));

  const Mat full = rng.normal_matrix(5, 5);
  CHECK(annihilator(full).norm() < 1e-10);
  CHECK((annihilator(Mat(Mat::Zero(4, 2))) - Mat::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("spectral_norm") {
  Vec d(3);
  d << 3, 1, 2;
  CHECK(spectral_norm(Mat(d.asDiagonal())) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(spectral_norm(Mat(Mat::Zero(4, 5))) == 0.0);
  Rng rng(20);
  const Mat g = rng.normal_matrix(20, 20);
  const double oracle = power_iteration_sigma1(g);
  CHECK(std::abs(spectral_norm(g) - oracle) <= 1e-8 * oracle);
}

TEST_CASE("zero_entry_11") {
  const Mat ones = Mat::Ones(2, 2);
  Mat expect = ones;
  expect(0, 0) = 0.0;
  CHECK(zero_entry_11(ones) == expect);
  CHECK(zero_entry_11(expect) == expect);
  Rng rng(5);
  const Mat a = rng.normal_matrix(4, 6);
  CHECK(zero_entry_11(zero_entry_11(a)) == zero_entry_11(a));
  Mat rest = a;
  rest(0, 0) = 0.0;
  CHECK(zero_entry_11(a) == rest);
}

TEST_CASE("trace_product") {
  const Mat id = Mat::Identity(3, 3);
  CHECK(trace_product(id, id) == doctest::Approx(3.0));
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 4.0;
  b(1, 1) = -2.0;
  CHECK(trace_product(a, b) == 0.0);
  CHECK_THROWS_AS(trace_product(Mat(Mat::Ones(2, 3)), Mat(Mat::Ones(3, 2))), ArgumentError);

  Rng rng(8);
  for (int i = 0; i < 20; ++i) {
    const Mat x = rng.normal_matrix(6, 4);
    const Mat y = rng.normal_matrix(6, 4);
    Eigen::JacobiSVD<Mat> sx(x), sy(y);
    const double bound = sx.singularValues()(0) * sy.singularValues().sum();
    CHECK(std::abs(trace_product(x, y)) <= bound * (1 + 1e-12));
    CHECK(trace_product(x, y) == doctest::Approx((x.transpose() * y).trace()));
  }
}

TEST_CASE("non-finite input is rejected") {
  Mat a = Mat::Ones(3, 3);
  a(1, 2) = std::nan("");
  CHECK_THROWS_AS(spectral_norm(a), ArgumentError);
  CHECK_THROWS_AS(projector(a), ArgumentError);
}

TEST_CASE("numerical_rank and norms") {
  Vec u(3), v(3);
  u << 1, 2, 3;
  v << 1, 0, -1;
  const Mat m = u * v.transpose();
  CHECK(numerical_rank(m, 1e-8) == 1);
  CHECK(nuclear_norm(m) == doctest::Approx(u.norm() * v.norm()));
  CHECK(frobenius_norm(m) == doctest::Approx(u.norm() * v.norm()));
  CHECK(max_abs_entry(m) == 3.0);
  CHECK(best_rank_approximation(m, 0).norm() == 0.0);
}
