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

#include "weakfactor/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace weakfactor {

namespace {

void require_member(const MembershipReport& report, const std::string& what) {
  if (!report) throw MembershipError(what + "\n" + report.describe());
}

std::string format_bound(const char* lhs, double l, const char* rhs, double r) {
  std::ostringstream os;
  os.precision(10);
  os << lhs << " = " << l << " > " << rhs << " = " << r;
  return os.str();
}

Mat spd_inverse(const Mat& s, double* log_det, const char* where) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw ArgumentError(std::string(where) + ": covariance must be square");
  }
  Eigen::LLT<Mat> llt(s);
  if (llt.info() != Eigen::Success) {
    throw ArgumentError(std::string(where) + ": covariance is not positive definite");
  }
  if (log_det != nullptr) {
    *log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  }
  return llt.solve(Mat::Identity(s.rows(), s.cols()));
}

Vec observed_vector(const Mat& m) {
  const Mat z = zero_entry_11(m);
  return Eigen::Map<const Vec>(z.data(), z.size());
}

}  // namespace

double Construction::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  throw ArgumentError("Construction: no parameter '" + key + "'");
}

FactorPair thm1_pair(Index n, Index T, double tau, double kappa, double alpha,
                     bool transpose) {
  if (n < 2 || T < 2) throw ArgumentError("thm1_pair: n >= 2 and T >= 2 required");
  if (!(kappa > 0.0)) throw ArgumentError("thm1_pair: kappa must be positive");
  if (!(tau > 0.0)) throw ArgumentError("thm1_pair: tau must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("thm1_pair: alpha in (0, 1)");
  const double dn = static_cast<double>(n);
  const double dt = static_cast<double>(T);
  const double root_nt = std::sqrt(dn * dt);
  if (tau > kappa * root_nt / 12.0) {
    throw ArgumentError("thm1_pair: violated tau <= kappa sqrt(nT) / 12: " +
                        format_bound("tau", tau, "kappa sqrt(nT) / 12",
                                     kappa * root_nt / 12.0));
  }

  // Built in the (rows, cols) = (a, b) orientation; transposed afterwards.
  const Index a = transpose ? T : n;
  const Index b = transpose ? n : T;
  const double db = static_cast<double>(b);
  const double c1 = 2.0 * tau / root_nt;
  const double q = std::sqrt(std::log(alpha * alpha + 1.0)) / 2.0;
  const double c2 = q * std::min(0.5, std::sqrt(db) / tau);

  Vec loading = Vec::Constant(a, c1);
  loading(0) = kappa / 2.0;
  Vec f_null = Vec::Ones(b);
  f_null(0) = 0.0;
  Vec f_alt = f_null;
  f_alt(0) = c2;
  Mat m_null = make_rank_one(loading, f_null);
  Mat m_alt = make_rank_one(loading, f_alt);
  if (transpose) {
    m_null.transposeInPlace();
    m_alt.transposeInPlace();
  }

  const double rho = c2 * kappa / 2.0;
  require_member(check_membership(m_null, SpaceSpec::null_entry(kappa, tau)),
                 "thm1_pair: null instance outside M_null(tau)");
  require_member(check_membership(m_alt, SpaceSpec::separated_entry(kappa, tau, rho)),
                 "thm1_pair: alt instance outside M_rho(tau)");

  FactorPair pair{FactorInstance(m_null, kappa, "thm1_null"),
                  FactorInstance(m_alt, kappa, "thm1_alt"), rho, {}, {}};
  pair.info.tv_upper = tv_discrepancy_upper(m_null, m_alt);
  const Vec mu0 = observed_vector(m_null);
  const Vec mu1 = observed_vector(m_alt);
  pair.info.chi2_cross = chi_square_cross(mu0, mu1, mu1);
  pair.construction.name = "thm1_pair";
  pair.construction.params = {{"n", dn},        {"T", dt},
                              {"tau", tau},     {"kappa", kappa},
                              {"alpha", alpha}, {"transpose", transpose ? 1.0 : 0.0},
                              {"c1", c1},       {"c2", c2},
                              {"q", q},         {"rho", rho}};
  return pair;
}

FactorPair thm4_perturbation(const FactorInstance& base, double eta, double kappa,
                             double tau0, double tau2) {
  if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("thm4_perturbation: eta in (0, 1)");
  if (!(kappa > 0.0) || !(tau0 > 0.0) || !(tau2 > 0.0)) {
    throw ArgumentError("thm4_perturbation: kappa, tau0, tau2 must be positive");
  }
  require_member(check_membership(base.M(), SpaceSpec::interior(kappa, tau0, eta)),
                 "thm4_perturbation: base outside M_star(tau0, eta)");

  const double c0 = std::min({kappa * eta, tau0 * eta, tau2});
  Mat alt = base.M();
  alt(0, 0) += c0;
  require_member(check_membership(alt, SpaceSpec::two_factor(kappa, tau0, tau2)),
                 "thm4_perturbation: alt outside M(tau0, tau2)");

  FactorPair pair{FactorInstance(base.M(), kappa, "thm4_base"),
                  FactorInstance(std::move(alt), kappa, "thm4_alt"), c0, {}, {}};
  pair.info.kl = 0.0;
  pair.info.tv_upper = tv_discrepancy_upper(pair.null_instance.M(), pair.alt_instance.M());
  pair.info.chi2_cross = 1.0;
  pair.construction.name = "thm4_perturbation";
  pair.construction.params = {{"n", static_cast<double>(base.rows())},
                              {"T", static_cast<double>(base.cols())},
                              {"eta", eta},
                              {"kappa", kappa},
                              {"tau0", tau0},
                              {"tau2", tau2},
                              {"c0", c0}};
  return pair;
}

PanelPair thm7_pair(const Mat& m1, const Mat& d1, double c, Index n, Index T,
                    double kappa1, double kappa2) {
  if (m1.rows() != n || m1.cols() != T || d1.rows() != n || d1.cols() != T) {
    throw ArgumentError("thm7_pair: M1 and D1 must be n x T");
  }
  if (!(c > 0.0 && c < 4.0)) throw ArgumentError("thm7_pair: c must lie in (0, 4)");
  const double nt = static_cast<double>(n) * static_cast<double>(T);
  const double delta = c / std::sqrt(nt);

  PanelInstance theta1(m1, d1, 1.0, 1.0, 0.0);
  require_member(check_panel_membership(theta1, PanelSpace::strong_factor(kappa1, kappa2)),
                 "thm7_pair: theta1 outside the strong-factor space");
  PanelInstance theta2(m1 - delta * d1, d1, 1.0, 1.0, delta);
  require_member(check_panel_membership(theta2, PanelSpace::robust()),
                 "thm7_pair: theta2 outside the robust space");

  PanelPair pair{theta1, theta2, delta, {}, {}};
  pair.info.kl = gaussian_kl(panel_distribution(theta1), panel_distribution(theta2));
  pair.construction.name = "thm7_pair";
  pair.construction.params = {{"n", static_cast<double>(n)},
                              {"T", static_cast<double>(T)},
                              {"c", c},
                              {"delta", delta},
                              {"kappa1", kappa1},
                              {"kappa2", kappa2}};
  return pair;
}

double gaussian_kl(const Vec& mu1, const Mat& sigma1, const Vec& mu2,
                   const Mat& sigma2) {
  const Index k = mu1.size();
  if (mu2.size() != k || sigma1.rows() != k || sigma2.rows() != k ||
      sigma1.cols() != k || sigma2.cols() != k) {
    throw ArgumentError("gaussian_kl: dimension mismatch");
  }
  double logdet1 = 0.0;
  double logdet2 = 0.0;
  const Mat inv1 = spd_inverse(sigma1, &logdet1, "gaussian_kl");
  spd_inverse(sigma2, &logdet2, "gaussian_kl");
  const Vec d = mu1 - mu2;
  const double quad = d.dot(inv1 * d);
  const double tr = trace_product(inv1, sigma2);
  return 0.5 * (quad + tr - static_cast<double>(k) + logdet1 - logdet2);
}

double gaussian_kl(const KroneckerGaussian& p1, const KroneckerGaussian& p2) {
  const Index p = p1.block.rows();
  const Index m = p1.m;
  if (p2.block.rows() != p || p2.m != m || p1.mean.size() != p * m ||
      p2.mean.size() != p * m || m < 1) {
    throw ArgumentError("gaussian_kl: Kronecker dimension mismatch");
  }
  double logdet1 = 0.0;
  double logdet2 = 0.0;
  const Mat inv1 = spd_inverse(p1.block, &logdet1, "gaussian_kl");
  spd_inverse(p2.block, &logdet2, "gaussian_kl");

  // Gram matrix of the mean-difference blocks: G_ij = d_i' d_j.
  const Vec d = p1.mean - p2.mean;
  const Eigen::Map<const Mat> blocks(d.data(), m, p);
  const Mat gram = blocks.transpose() * blocks;
  const double quad = trace_product(inv1, gram);
  const double dm = static_cast<double>(m);
  const double tr = dm * trace_product(inv1, p2.block);
  return 0.5 * (quad + tr - static_cast<double>(p) * dm + dm * (logdet1 - logdet2));
}

KroneckerGaussian panel_distribution(const PanelInstance& inst) {
  const Index m = inst.rows() * inst.cols();
  const double b = inst.beta();
  const double su2 = inst.sigma_u() * inst.sigma_u();
  const double se2 = inst.sigma_eps() * inst.sigma_eps();
  KroneckerGaussian g;
  g.m = m;
  g.mean.resize(2 * m);
  const Mat mean_y = inst.M() + b * inst.D();
  g.mean.head(m) = Eigen::Map<const Vec>(mean_y.data(), m);
  g.mean.tail(m) = Eigen::Map<const Vec>(inst.D().data(), m);
  g.block.resize(2, 2);
  g.block << b * b * su2 + se2, b * su2, b * su2, su2;
  return g;
}

double chi_square_cross(const Vec& mu0, const Vec& mu1, const Vec& mu2) {
  if (mu1.size() != mu0.size() || mu2.size() != mu0.size()) {
    throw ArgumentError("chi_square_cross: mean vectors differ in length");
  }
  return std::exp((mu1 - mu0).dot(mu2 - mu0));
}

double tv_discrepancy_upper(const Mat& null_m, const Mat& alt_m) {
  if (null_m.rows() != alt_m.rows() || null_m.cols() != alt_m.cols()) {
    throw ArgumentError("tv_discrepancy_upper: dimension mismatch");
  }
  const double d2 = (zero_entry_11(alt_m) - zero_entry_11(null_m)).squaredNorm();
  return std::sqrt(std::expm1(d2));
}

double likelihood_ratio_stat(const Mat& x, const Mat& null_m, const Mat& alt_m) {
  if (x.rows() != null_m.rows() || x.cols() != null_m.cols() ||
      x.rows() != alt_m.rows() || x.cols() != alt_m.cols()) {
    throw ArgumentError("likelihood_ratio_stat: dimension mismatch");
  }
  const Mat z = zero_entry_11(x);
  const Mat r_null = z - zero_entry_11(null_m);
  const Mat r_alt = z - zero_entry_11(alt_m);
  return 0.5 * (r_null.squaredNorm() - r_alt.squaredNorm());
}

double panel_log_likelihood_ratio(const Mat& x, const Mat& y, const PanelInstance& a,
                                  const PanelInstance& b) {
  if (x.rows() != a.rows() || x.cols() != a.cols() || y.rows() != a.rows() ||
      y.cols() != a.cols() || b.rows() != a.rows() || b.cols() != a.cols()) {
    throw ArgumentError("panel_log_likelihood_ratio: dimension mismatch");
  }
  // Per entry, with V = (Y, X) - mean: -0.5 V' S^{-1} V - 0.5 log det S.
  auto log_density = [&](const PanelInstance& th) {
    const KroneckerGaussian g = panel_distribution(th);
    double logdet = 0.0;
    const Mat inv = spd_inverse(g.block, &logdet, "panel_log_likelihood_ratio");
    const Mat ry = y - th.M() - th.beta() * th.D();
    const Mat rx = x - th.D();
    const double q = inv(0, 0) * ry.squaredNorm() + 2.0 * inv(0, 1) * trace_product(ry, rx) +
                     inv(1, 1) * rx.squaredNorm();
    return -0.5 * q - 0.5 * static_cast<double>(ry.size()) * logdet;
  };
  return log_density(a) - log_density(b);
}

}  // namespace weakfactor
