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

// Panel regression with interactive fixed effects, Y = M + X beta + eps and
// X = D + u with low-rank M, D and scalar beta.

#ifndef WEAKFACTOR_PANEL_HPP
#define WEAKFACTOR_PANEL_HPP

#include <vector>

#include "weakfactor/entrywise.hpp"
#include "weakfactor/matrix_core.hpp"
#include "weakfactor/model.hpp"

namespace weakfactor {

struct PanelEstimate {
  double beta_hat = 0.0;
  double r_hat = 0.0;        // k + r1 - trace(P_Lambda P_alpha)
  double numerator = 0.0;    // trace(Y' Pi_Lambda Pi_alpha X)
  double denominator = 0.0;  // trace(X' Pi_alpha X)
  bool flipped = false;      // data were transposed because T < n
};

/// Bias-corrected trace estimator
///   beta_hat = (n - r1) / (n - r_hat) * trace(Y' Pi_Lambda Pi_alpha X) / trace(X' Pi_alpha X)
/// with alpha_hat the top-r1 left singular vectors of X and Lambda_hat the
/// top-(r0 + r1) left singular vectors of Y. When T < n both matrices are
/// transposed first. Requires r0 + r1 < min(n, T).
PanelEstimate estimate_beta(const Mat& x, const Mat& y, Index r0, Index r1);

/// k + r1 - trace(P_Lambda P_alpha) for arbitrary (not necessarily
/// orthonormal) bases; alpha_hat has r1 columns and lambda_hat has k columns.
double effective_rank_rhat(const Mat& alpha_hat, const Mat& lambda_hat,
                           Index r1, Index k);

struct LsOptions {
  double tol = 1e-10;   // relative objective decrease
  int max_iter = 500;
};

struct LsResult {
  double beta = 0.0;
  Mat A;
  bool converged = false;
  int iterations = 0;
  std::vector<double> objective;  // ||Y - A - X beta||_F^2 after each sweep
};

/// Least squares over beta and rank-constrained A by alternating
/// minimization from beta = 0: A <- best rank approximation of Y - X beta,
/// beta <- trace(X'(Y - A)) / ||X||_F^2. A secant step on the profile
/// gradient trace(X'(Y - A - X beta)) replaces the update when it lowers the
/// objective more, so the objective is nonincreasing over sweeps.
LsResult ls_estimator(const Mat& x, const Mat& y, Index rank,
                      const LsOptions& options = {});

/// sigma_eps / sqrt(sigma_u^2 + trace(Pi_{M'} D' Pi_M D) / (nT)).
double sigma_theta(const PanelInstance& inst);

/// 1.96 (nT)^{-1/2} (1 + kappa2^2)^{-1/2}.
double ci_star_half_width(Index n, Index T, double kappa2);

/// beta_LS (rank 2) +- ci_star_half_width.
Interval ci_star(const Mat& x, const Mat& y, double kappa2,
                 const LsOptions& options = {});

}  // namespace weakfactor

#endif  // WEAKFACTOR_PANEL_HPP
