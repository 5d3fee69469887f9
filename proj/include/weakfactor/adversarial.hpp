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

// Two-point lower-bound constructions and closed-form Gaussian information
// quantities (KL divergence, chi-square cross moment, TV bound).

#ifndef WEAKFACTOR_ADVERSARIAL_HPP
#define WEAKFACTOR_ADVERSARIAL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weakfactor/matrix_core.hpp"
#include "weakfactor/model.hpp"

namespace weakfactor {

struct PairInfo {
  std::optional<double> kl;          // KL(P_alt, P_null)
  std::optional<double> tv_upper;    // bound on E_null |dP_alt/dP_null - 1|
  std::optional<double> chi2_cross;  // E_null[(dP_alt/dP_null)^2]
};

/// Which construction produced a pair, with every constant it used.
struct Construction {
  std::string name;
  std::vector<std::pair<std::string, double>> params;

  double param(const std::string& key) const;
};

template <typename Instance>
struct TwoPointPair {
  Instance null_instance;
  Instance alt_instance;
  double separation = 0.0;
  PairInfo info;
  Construction construction;
};

using FactorPair = TwoPointPair<FactorInstance>;
using PanelPair = TwoPointPair<PanelInstance>;

/// Rank-one pair for the missing-entry lower bound:
///   null = (kappa/2; c1 1)(0, 1'),  alt = (kappa/2; c1 1)(c2, 1')
/// with c1 = 2 tau / sqrt(nT), c2 = q min{1/2, sqrt(T)/tau} and
/// q = sqrt(log(alpha^2 + 1)) / 2. The null lies in the tau space with
/// zero (1,1) entry and the alt has |M_11| = c2 kappa / 2.
/// With `transpose` the roles of rows and columns are exchanged (c2 then uses
/// sqrt(n)). Requires n, T >= 2, alpha in (0, 1) and tau <= kappa sqrt(nT) / 12.
FactorPair thm1_pair(Index n, Index T, double tau, double kappa, double alpha,
                     bool transpose = false);

/// alt = base + c0 e1 e1' with c0 = min{kappa eta, tau0 eta, tau2}. The base
/// must satisfy ||M||_inf <= kappa (1 - eta), sigma_1 >= tau0 (1 + eta) and
/// sigma_2 = 0; the alt then has sigma_1 >= tau0 and sigma_2 <= tau2. The
/// two instances agree everywhere except entry (1,1).
FactorPair thm4_perturbation(const FactorInstance& base, double eta,
                             double kappa, double tau0, double tau2);

/// theta1 = (M1, D1, 1, 1, 0) and theta2 = (M1 - delta D1, D1, 1, 1, delta)
/// with delta = c / sqrt(nT), c in (0, 4). theta1 is checked against the
/// strong-factor space with constants kappa1, kappa2 and theta2 against the
/// robust space. Both imply the same mean for (Y, X).
PanelPair thm7_pair(const Mat& m1, const Mat& d1, double c, Index n, Index T,
                    double kappa1 = 0.0, double kappa2 = 0.0);

/// KL(N(mu2, Sigma2) || N(mu1, Sigma1)). Throws ArgumentError when either
/// covariance fails a Cholesky factorization or shapes disagree.
double gaussian_kl(const Vec& mu1, const Mat& sigma1, const Vec& mu2,
                   const Mat& sigma2);

/// Gaussian with covariance `block` (p x p) Kronecker I_m. The mean is the
/// stack of p blocks of length m.
struct KroneckerGaussian {
  Vec mean;
  Mat block;
  Index m = 0;
};

/// gaussian_kl for Kronecker-structured covariances, computed from the p x p
/// blocks without forming pm x pm matrices.
double gaussian_kl(const KroneckerGaussian& p1, const KroneckerGaussian& p2);

/// Joint law of vec(Y), vec(X) under a panel instance.
KroneckerGaussian panel_distribution(const PanelInstance& inst);

/// exp((mu1 - mu0)'(mu2 - mu0)): the cross moment
/// E_0[(dP_1/dP_0)(dP_2/dP_0)] for identity-covariance Gaussians.
double chi_square_cross(const Vec& mu0, const Vec& mu1, const Vec& mu2);

/// sqrt(exp(||Z(alt) - Z(null)||_F^2) - 1) where Z zeroes entry (1,1).
double tv_discrepancy_upper(const Mat& null_m, const Mat& alt_m);

/// log dP_alt / dP_null of the observed entries (all but (1,1)) of X under
/// X = M + N(0, 1).
double likelihood_ratio_stat(const Mat& x, const Mat& null_m, const Mat& alt_m);

/// log p_a(X, Y) - log p_b(X, Y) for two panel instances of the same shape.
double panel_log_likelihood_ratio(const Mat& x, const Mat& y,
                                  const PanelInstance& a, const PanelInstance& b);

}  // namespace weakfactor

#endif  // WEAKFACTOR_ADVERSARIAL_HPP
