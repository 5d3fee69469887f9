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

// Ground-truth instances, parameter spaces as checkable predicates, and the
// Gaussian observation samplers for the factor and panel models.

#ifndef WEAKFACTOR_MODEL_HPP
#define WEAKFACTOR_MODEL_HPP

#include <string>
#include <vector>

#include "weakfactor/matrix_core.hpp"
#include "weakfactor/random.hpp"

namespace weakfactor {

/// Relative tolerance for rank and membership decisions: sigma_{k+1} <=
/// kRankTolerance * sigma_1 counts as rank <= k.
inline constexpr double kRankTolerance = 1e-8;

/// True mean matrix of the factor model X = M + u with ||M||_inf <= kappa and
/// rank M <= 2. Both invariants are checked on construction.
class FactorInstance {
 public:
  FactorInstance(Mat m, double kappa, std::string label = {});

  const Mat& M() const { return m_; }
  double kappa() const { return kappa_; }
  const std::string& label() const { return label_; }
  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }
  double m11() const { return m_(0, 0); }

 private:
  Mat m_;
  double kappa_;
  std::string label_;
};

enum class SpaceKind {
  Base,      // ||A||_inf <= kappa, rank A <= 2
  Tau,       // Base, sigma_1 >= tau, sigma_2 = 0
  Tau1Tau2,  // Base, sigma_1 >= tau1, sigma_2 <= tau2
  NullTau,   // Tau, A_11 = 0
  RhoTau,    // Tau, |A_11| >= rho
  StarEta,   // ||A||_inf <= kappa (1 - eta), sigma_1 >= tau (1 + eta), sigma_2 = 0
};

const char* to_string(SpaceKind kind);

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Base;
  double kappa = 1.0;
  double tau = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  double rho = 0.0;
  double eta = 0.0;

  static SpaceSpec base(double kappa);
  static SpaceSpec one_factor(double kappa, double tau);
  static SpaceSpec two_factor(double kappa, double tau1, double tau2);
  static SpaceSpec null_entry(double kappa, double tau);
  static SpaceSpec separated_entry(double kappa, double tau, double rho);
  static SpaceSpec interior(double kappa, double tau0, double eta);

  /// Throws ArgumentError when parameters are out of range for the kind.
  void validate() const;
};

/// One defining inequality "value <= bound" (or ">=") with its slack; a
/// positive slack means the inequality holds strictly.
struct InequalityCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool holds = false;
};

struct MembershipReport {
  bool member = true;
  std::vector<InequalityCheck> checks;

  explicit operator bool() const { return member; }
  std::string describe() const;
  void add(std::string name, double value, double bound, bool upper,
           double tol);
};

/// Each inequality is tested with tolerance kRankTolerance * sigma_1(M).
MembershipReport check_membership(const Mat& m, const SpaceSpec& spec);

/// Panel regression truth theta = (M, D, sigma_eps, sigma_u, beta) of
/// Y = M + X beta + eps, X = D + u.
class PanelInstance {
 public:
  PanelInstance(Mat m, Mat d, double sigma_eps, double sigma_u, double beta);

  const Mat& M() const { return m_; }
  const Mat& D() const { return d_; }
  double sigma_eps() const { return sigma_eps_; }
  double sigma_u() const { return sigma_u_; }
  double beta() const { return beta_; }
  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }

 private:
  Mat m_;
  Mat d_;
  double sigma_eps_;
  double sigma_u_;
  double beta_;
};

enum class PanelSpaceKind {
  General,      // rank M <= r0, rank D <= r1, sigmas in [1/kappa, kappa], |beta| <= kappa
  Robust,       // sigmas = 1, rank M <= 2, rank D = 1, |beta| <= 1
  StrongFactor  // Robust, rank M = 1, M'D = 0, MD' = 0, ||M||_F >= kappa1 sqrt(nT), ||D||_F >= kappa2 sqrt(nT)
};

struct PanelSpace {
  PanelSpaceKind kind = PanelSpaceKind::General;
  Index r0 = 1;
  Index r1 = 1;
  double kappa = 1.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;

  static PanelSpace general(Index r0, Index r1, double kappa);
  static PanelSpace robust();
  static PanelSpace strong_factor(double kappa1, double kappa2);
};

MembershipReport check_panel_membership(const PanelInstance& inst,
                                        const PanelSpace& space);

/// X = M + u with u iid N(0, 1), drawn from `rng`.
Mat sample_observation(const FactorInstance& inst, Rng& rng);

struct PanelSample {
  Mat X;
  Mat Y;
};

/// u ~ N(0, sigma_u^2) is drawn before eps ~ N(0, sigma_eps^2).
PanelSample sample_panel(const PanelInstance& inst, Rng& rng);

/// L F'. Throws ArgumentError on empty input.
Mat make_rank_one(const Vec& loading, const Vec& factor);
Mat make_rank_two(const Vec& loading1, const Vec& factor1, const Vec& loading2,
                  const Vec& factor2);

// Instance families used by the experiments.

/// Rank one with the first row at the entry bound: L = (kappa, c, ..., c),
/// F = (1, ..., 1), c chosen so that sigma_1 = tau. Needs
/// kappa sqrt(T) <= tau <= kappa sqrt(nT). This is the least favourable shape
/// for entry (1,1): all information about M_11 passes through the weak
/// remaining rows.
FactorInstance row_coherent_instance(Index n, Index T, double tau,
                                     double kappa);

/// (tau / sqrt(nT)) s t' with iid random signs s, t. Needs tau <= kappa sqrt(nT).
FactorInstance sign_instance(Index n, Index T, double tau, double kappa,
                             Rng& rng);

/// Panel truth with M = sM a b', D = sD c d' where a, c (and b, d) are
/// orthogonal unit-norm sign patterns, so that M'D = 0 and MD' = 0.
PanelInstance orthogonal_panel_instance(Index n, Index T, double sigma_m,
                                        double sigma_d, double beta,
                                        double sigma_eps = 1.0,
                                        double sigma_u = 1.0);

}  // namespace weakfactor

#endif  // WEAKFACTOR_MODEL_HPP
