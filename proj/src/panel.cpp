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

#include "weakfactor/panel.hpp"

#include <cmath>
#include <optional>
#include <limits>
#include <string>

namespace weakfactor {

namespace {

// Top-k left singular vectors; an n x 0 matrix when k = 0.
Mat leading_left(const Mat& a, Index k) {
  if (k == 0) return Mat(a.rows(), 0);
  return svd_truncated(a, k).U;
}

// Pi_Q A for Q with orthonormal columns.
Mat annihilate(const Mat& q, const Mat& a) {
  if (q.cols() == 0) return a;
  return a - q * (q.transpose() * a);
}

}  // namespace

PanelEstimate estimate_beta(const Mat& x_in, const Mat& y_in, Index r0, Index r1) {
  if (x_in.rows() != y_in.rows() || x_in.cols() != y_in.cols()) {
    throw ArgumentError("estimate_beta: X and Y must have the same shape");
  }
  if (x_in.rows() < 2 || x_in.cols() < 2) {
    throw ArgumentError("estimate_beta: need n, T >= 2");
  }
  if (r0 < 0 || r1 < 0) throw ArgumentError("estimate_beta: ranks must be nonnegative");
  const Index k = r0 + r1;
  if (k >= std::min(x_in.rows(), x_in.cols())) {
    throw ArgumentError("estimate_beta: r0 + r1 must be < min(n, T)");
  }

  PanelEstimate out;
  out.flipped = x_in.cols() < x_in.rows();
  const Mat x = out.flipped ? Mat(x_in.transpose()) : x_in;
  const Mat y = out.flipped ? Mat(y_in.transpose()) : y_in;
  const double n = static_cast<double>(x.rows());

  const Mat alpha_hat = leading_left(x, r1);
  const Mat lambda_hat = leading_left(y, k);

  const Mat pi_alpha_x = annihilate(alpha_hat, x);
  out.denominator = trace_product(x, pi_alpha_x);
  if (!(out.denominator > 0.0)) {
    throw DegenerateDesignError("estimate_beta: trace(X' Pi_alpha X) <= 0");
  }
  // trace(Y' Pi_L Pi_a X) = <Pi_L Y, Pi_a X>
  out.numerator = trace_product(annihilate(lambda_hat, y), pi_alpha_x);

  // Both bases are orthonormal, so trace(P_L P_a) = ||L'a||_F^2.
  const double overlap =
      r1 == 0 || k == 0 ? 0.0 : (lambda_hat.transpose() * alpha_hat).squaredNorm();
  out.r_hat = static_cast<double>(k + r1) - overlap;
  if (!(n - out.r_hat > 0.0)) {
    throw DimensionError("estimate_beta: n - r_hat <= 0");
  }
  out.beta_hat = (n - static_cast<double>(r1)) / (n - out.r_hat) *
                 out.numerator / out.denominator;
  return out;
}

double effective_rank_rhat(const Mat& alpha_hat, const Mat& lambda_hat, Index r1,
                           Index k) {
  if (alpha_hat.cols() != r1 || lambda_hat.cols() != k ||
      alpha_hat.rows() != lambda_hat.rows()) {
    throw ArgumentError("effective_rank_rhat: basis shapes do not match r1, k");
  }
  const Mat qa = column_space_basis(alpha_hat);
  const Mat ql = column_space_basis(lambda_hat);
  const double overlap =
      qa.cols() == 0 || ql.cols() == 0 ? 0.0 : (ql.transpose() * qa).squaredNorm();
  return static_cast<double>(k + r1) - overlap;
}

LsResult ls_estimator(const Mat& x, const Mat& y, Index rank,
                      const LsOptions& options) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ArgumentError("ls_estimator: X and Y must have the same shape");
  }
  if (rank < 0 || rank >= std::min(x.rows(), x.cols())) {
    throw ArgumentError("ls_estimator: rank must lie in [0, min(n, T))");
  }
  if (options.max_iter < 1) throw ArgumentError("ls_estimator: max_iter >= 1");
  const double xx = x.squaredNorm();
  if (!(xx > 0.0)) throw DegenerateDesignError("ls_estimator: ||X||_F = 0");

  LsResult out;
  out.A = Mat::Zero(x.rows(), x.cols());
  if (rank == 0) {
    out.beta = trace_product(x, y) / xx;
    out.objective.push_back((y - out.beta * x).squaredNorm());
    out.iterations = 1;
    out.converged = true;
    return out;
  }

  // Profile fit at beta: A(beta) is the best rank approximation of Y - X beta,
  // and the returned gradient <X, Y - A - X beta> vanishes at stationary beta.
  struct Profile {
    double beta;
    Mat A;
    double objective;
    double gradient;
  };
  auto profile = [&](double b) {
    Profile p{b, best_rank_approximation(Mat(y - b * x), rank), 0.0, 0.0};
    const Mat resid = y - p.A - b * x;
    p.objective = resid.squaredNorm();
    p.gradient = trace_product(x, resid);
    return p;
  };

  // Alternating minimization (beta <- beta + gradient / ||X||^2) with a
  // secant step on the gradient whenever that lowers the objective further.
  Profile cur = profile(0.0);
  std::optional<Profile> prev;
  out.objective.push_back(cur.objective);
  out.iterations = 1;
  out.converged = cur.objective == 0.0 || cur.gradient == 0.0;
  while (!out.converged && out.iterations < options.max_iter) {
    Profile next = profile(cur.beta + cur.gradient / xx);
    if (prev && cur.gradient != prev->gradient) {
      const double secant = cur.beta - cur.gradient * (cur.beta - prev->beta) /
                                           (cur.gradient - prev->gradient);
      if (std::isfinite(secant)) {
        Profile trial = profile(secant);
        if (trial.objective < next.objective) next = std::move(trial);
      }
    }
    ++out.iterations;
    if (next.objective > cur.objective) {  // no descent left at rounding level
      out.converged = true;
      break;
    }
    const double decrease = cur.objective - next.objective;
    const double step = std::abs(next.beta - cur.beta);
    prev = std::move(cur);
    cur = std::move(next);
    out.objective.push_back(cur.objective);
    out.converged = cur.objective == 0.0 || decrease <= options.tol * prev->objective ||
                    step <= 1e-14 * (1.0 + std::abs(cur.beta));
  }
  out.beta = cur.beta;
  out.A = std::move(cur.A);
  return out;
}

double sigma_theta(const PanelInstance& inst) {
  const Mat& m = inst.M();
  const Mat& d = inst.D();
  const Mat pi_m = annihilator(m);
  const Mat pi_mt = annihilator(Mat(m.transpose()));
  // trace(Pi_{M'} D' Pi_M D) = ||Pi_M D Pi_{M'}||_F^2
  const double tr = (pi_m * d * pi_mt).squaredNorm();
  const double nt = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
  return inst.sigma_eps() /
         std::sqrt(inst.sigma_u() * inst.sigma_u() + tr / nt);
}

double ci_star_half_width(Index n, Index T, double kappa2) {
  const double nt = static_cast<double>(n) * static_cast<double>(T);
  return 1.96 / std::sqrt(nt) / std::sqrt(1.0 + kappa2 * kappa2);
}

Interval ci_star(const Mat& x, const Mat& y, double kappa2,
                 const LsOptions& options) {
  if (!(kappa2 >= 0.0)) throw ArgumentError("ci_star: kappa2 must be nonnegative");
  const double center = ls_estimator(x, y, 2, options).beta;
  const double half = ci_star_half_width(x.rows(), x.cols(), kappa2);
  return {center - half, center + half};
}

}  // namespace weakfactor
