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

#include "weakfactor/model.hpp"

#include <cmath>
#include <sstream>

namespace weakfactor {

namespace {

double sigma_at(const Vec& s, Index j) { return j < s.size() ? s(j) : 0.0; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ArgumentError(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

FactorInstance::FactorInstance(Mat m, double kappa, std::string label)
    : m_(std::move(m)), kappa_(kappa), label_(std::move(label)) {
  require_positive(kappa_, "FactorInstance: kappa");
  if (m_.rows() < 1 || m_.cols() < 1) {
    throw ArgumentError("FactorInstance: empty mean matrix");
  }
  auto report = check_membership(m_, SpaceSpec::base(kappa_));
  if (!report) {
    throw MembershipError("FactorInstance: mean matrix outside the base space\n" +
                          report.describe());
  }
}

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Base: return "M";
    case SpaceKind::Tau: return "M(tau)";
    case SpaceKind::Tau1Tau2: return "M(tau1,tau2)";
    case SpaceKind::NullTau: return "M_null(tau)";
    case SpaceKind::RhoTau: return "M_rho(tau)";
    case SpaceKind::StarEta: return "M_star(tau0,eta)";
  }
  return "?";
}

SpaceSpec SpaceSpec::base(double kappa) {
  SpaceSpec s;
  s.kind = SpaceKind::Base;
  s.kappa = kappa;
  return s;
}

SpaceSpec SpaceSpec::one_factor(double kappa, double tau) {
  SpaceSpec s = base(kappa);
  s.kind = SpaceKind::Tau;
  s.tau = tau;
  return s;
}

SpaceSpec SpaceSpec::two_factor(double kappa, double tau1, double tau2) {
  SpaceSpec s = base(kappa);
  s.kind = SpaceKind::Tau1Tau2;
  s.tau1 = tau1;
  s.tau2 = tau2;
  return s;
}

SpaceSpec SpaceSpec::null_entry(double kappa, double tau) {
  SpaceSpec s = one_factor(kappa, tau);
  s.kind = SpaceKind::NullTau;
  return s;
}

SpaceSpec SpaceSpec::separated_entry(double kappa, double tau, double rho) {
  SpaceSpec s = one_factor(kappa, tau);
  s.kind = SpaceKind::RhoTau;
  s.rho = rho;
  return s;
}

SpaceSpec SpaceSpec::interior(double kappa, double tau0, double eta) {
  SpaceSpec s = one_factor(kappa, tau0);
  s.kind = SpaceKind::StarEta;
  s.eta = eta;
  return s;
}

void SpaceSpec::validate() const {
  require_positive(kappa, "SpaceSpec: kappa");
  if (tau < 0 || tau1 < 0 || tau2 < 0 || rho < 0) {
    throw ArgumentError("SpaceSpec: strength parameters must be nonnegative");
  }
  if (kind == SpaceKind::Tau1Tau2 && tau1 < tau2) {
    throw ArgumentError("SpaceSpec: tau1 >= tau2 required");
  }
  if (kind == SpaceKind::StarEta && !(eta > 0.0 && eta < 1.0)) {
    throw ArgumentError("SpaceSpec: eta must lie in (0, 1)");
  }
}

void MembershipReport::add(std::string name, double value, double bound,
                           bool upper, double tol) {
  InequalityCheck c;
  c.name = std::move(name);
  c.value = value;
  c.bound = bound;
  c.slack = upper ? bound - value : value - bound;
  c.holds = c.slack >= -tol;
  member = member && c.holds;
  checks.push_back(std::move(c));
}

std::string MembershipReport::describe() const {
  std::ostringstream os;
  os.precision(10);
  for (const auto& c : checks) {
    os << (c.holds ? "  ok   " : "  FAIL ") << c.name << ": value " << c.value
       << ", bound " << c.bound << ", slack " << c.slack << "\n";
  }
  return os.str();
}

MembershipReport check_membership(const Mat& m, const SpaceSpec& spec) {
  spec.validate();
  const Vec s = singular_values(m);
  const double s1 = sigma_at(s, 0);
  const double tol = kRankTolerance * s1;
  const double inf = max_abs_entry(m);

  MembershipReport r;
  const double kappa_bound =
      spec.kind == SpaceKind::StarEta ? spec.kappa * (1.0 - spec.eta) : spec.kappa;
  r.add("||A||_inf <= kappa", inf, kappa_bound, true, tol);
  r.add("sigma_3 = 0 (rank <= 2)", sigma_at(s, 2), 0.0, true, tol);

  switch (spec.kind) {
    case SpaceKind::Base:
      break;
    case SpaceKind::Tau:
    case SpaceKind::NullTau:
    case SpaceKind::RhoTau:
      r.add("sigma_1 >= tau", s1, spec.tau, false, tol);
      r.add("sigma_2 = 0", sigma_at(s, 1), 0.0, true, tol);
      if (spec.kind == SpaceKind::NullTau) {
        r.add("A_11 = 0", std::abs(m(0, 0)), 0.0, true, tol);
      } else if (spec.kind == SpaceKind::RhoTau) {
        r.add("|A_11| >= rho", std::abs(m(0, 0)), spec.rho, false, tol);
      }
      break;
    case SpaceKind::Tau1Tau2:
      r.add("sigma_1 >= tau1", s1, spec.tau1, false, tol);
      r.add("sigma_2 <= tau2", sigma_at(s, 1), spec.tau2, true, tol);
      break;
    case SpaceKind::StarEta:
      r.add("sigma_1 >= tau0 (1 + eta)", s1, spec.tau * (1.0 + spec.eta), false,
            tol);
      r.add("sigma_2 = 0", sigma_at(s, 1), 0.0, true, tol);
      break;
  }
  return r;
}

PanelInstance::PanelInstance(Mat m, Mat d, double sigma_eps, double sigma_u,
                             double beta)
    : m_(std::move(m)),
      d_(std::move(d)),
      sigma_eps_(sigma_eps),
      sigma_u_(sigma_u),
      beta_(beta) {
  if (m_.rows() != d_.rows() || m_.cols() != d_.cols() || m_.size() == 0) {
    throw ArgumentError("PanelInstance: M and D must be nonempty and conformable");
  }
  require_positive(sigma_eps_, "PanelInstance: sigma_eps");
  require_positive(sigma_u_, "PanelInstance: sigma_u");
  if (!std::isfinite(beta_) || !m_.allFinite() || !d_.allFinite()) {
    throw ArgumentError("PanelInstance: non-finite parameter");
  }
}

PanelSpace PanelSpace::general(Index r0, Index r1, double kappa) {
  PanelSpace s;
  s.kind = PanelSpaceKind::General;
  s.r0 = r0;
  s.r1 = r1;
  s.kappa = kappa;
  return s;
}

PanelSpace PanelSpace::robust() {
  PanelSpace s;
  s.kind = PanelSpaceKind::Robust;
  s.r0 = 2;
  s.r1 = 1;
  s.kappa = 1.0;
  return s;
}

PanelSpace PanelSpace::strong_factor(double kappa1, double kappa2) {
  PanelSpace s = robust();
  s.kind = PanelSpaceKind::StrongFactor;
  s.r0 = 1;
  s.kappa1 = kappa1;
  s.kappa2 = kappa2;
  return s;
}

MembershipReport check_panel_membership(const PanelInstance& inst,
                                        const PanelSpace& space) {
  const Vec sm = singular_values(inst.M());
  const Vec sd = singular_values(inst.D());
  const double m1 = sigma_at(sm, 0);
  const double d1 = sigma_at(sd, 0);
  const double scale = std::max({m1, d1, 1.0});
  const double tol = kRankTolerance * scale;
  MembershipReport r;

  if (space.kind == PanelSpaceKind::General) {
    r.add("rank M <= r0", sigma_at(sm, space.r0), 0.0, true, kRankTolerance * m1);
    r.add("rank D <= r1", sigma_at(sd, space.r1), 0.0, true, kRankTolerance * d1);
    r.add("sigma_eps >= 1/kappa", inst.sigma_eps(), 1.0 / space.kappa, false, 0.0);
    r.add("sigma_eps <= kappa", inst.sigma_eps(), space.kappa, true, 0.0);
    r.add("sigma_u >= 1/kappa", inst.sigma_u(), 1.0 / space.kappa, false, 0.0);
    r.add("sigma_u <= kappa", inst.sigma_u(), space.kappa, true, 0.0);
    r.add("|beta| <= kappa", std::abs(inst.beta()), space.kappa, true, 0.0);
    return r;
  }

  r.add("sigma_eps = 1", std::abs(inst.sigma_eps() - 1.0), 0.0, true, 1e-12);
  r.add("sigma_u = 1", std::abs(inst.sigma_u() - 1.0), 0.0, true, 1e-12);
  r.add("|beta| <= 1", std::abs(inst.beta()), 1.0, true, 0.0);
  r.add("rank D = 1 (sigma_2(D) = 0)", sigma_at(sd, 1), 0.0, true,
        kRankTolerance * d1);
  r.add("rank D = 1 (sigma_1(D) > 0)", d1, 0.0, false, -1e-300);
  if (space.kind == PanelSpaceKind::Robust) {
    r.add("rank M <= 2", sigma_at(sm, 2), 0.0, true, kRankTolerance * m1);
    return r;
  }

  const double root_nt =
      std::sqrt(static_cast<double>(inst.rows()) * static_cast<double>(inst.cols()));
  r.add("rank M = 1 (sigma_2(M) = 0)", sigma_at(sm, 1), 0.0, true,
        kRankTolerance * m1);
  r.add("rank M = 1 (sigma_1(M) > 0)", m1, 0.0, false, -1e-300);
  r.add("||M'D||_F = 0", (inst.M().transpose() * inst.D()).norm(), 0.0, true,
        tol * scale);
  r.add("||MD'||_F = 0", (inst.M() * inst.D().transpose()).norm(), 0.0, true,
        tol * scale);
  r.add("||M||_F >= kappa1 sqrt(nT)", inst.M().norm(), space.kappa1 * root_nt,
        false, tol);
  r.add("||D||_F >= kappa2 sqrt(nT)", inst.D().norm(), space.kappa2 * root_nt,
        false, tol);
  return r;
}

Mat sample_observation(const FactorInstance& inst, Rng& rng) {
  return inst.M() + rng.normal_matrix(inst.rows(), inst.cols());
}

PanelSample sample_panel(const PanelInstance& inst, Rng& rng) {
  const Mat u = rng.normal_matrix(inst.rows(), inst.cols(), inst.sigma_u());
  const Mat eps = rng.normal_matrix(inst.rows(), inst.cols(), inst.sigma_eps());
  PanelSample out;
  out.X = inst.D() + u;
  out.Y = inst.M() + inst.beta() * out.X + eps;
  return out;
}

Mat make_rank_one(const Vec& loading, const Vec& factor) {
  if (loading.size() == 0 || factor.size() == 0) {
    throw ArgumentError("make_rank_one: empty loading or factor");
  }
  return loading * factor.transpose();
}

Mat make_rank_two(const Vec& loading1, const Vec& factor1, const Vec& loading2,
                  const Vec& factor2) {
  if (loading1.size() != loading2.size() || factor1.size() != factor2.size()) {
    throw ArgumentError("make_rank_two: component sizes differ");
  }
  return make_rank_one(loading1, factor1) + make_rank_one(loading2, factor2);
}

FactorInstance row_coherent_instance(Index n, Index T, double tau,
                                     double kappa) {
  if (n < 2 || T < 2) throw ArgumentError("row_coherent_instance: n, T >= 2");
  const double dn = static_cast<double>(n);
  const double dt = static_cast<double>(T);
  const double lo = kappa * std::sqrt(dt);
  const double hi = kappa * std::sqrt(dn * dt);
  if (tau < lo * (1 - 1e-12) || tau > hi * (1 + 1e-12)) {
    throw ArgumentError("row_coherent_instance: tau must lie in [kappa sqrt(T), "
                        "kappa sqrt(nT)]");
  }
  // sigma_1^2 = (kappa^2 + c^2 (n - 1)) T
  const double c2 = (tau * tau / dt - kappa * kappa) / (dn - 1.0);
  const double c = std::min(std::sqrt(std::max(c2, 0.0)), kappa);
  Vec loading = Vec::Constant(n, c);
  loading(0) = kappa;
  return FactorInstance(make_rank_one(loading, Vec::Ones(T)), kappa,
                        "row_coherent");
}

FactorInstance sign_instance(Index n, Index T, double tau, double kappa,
                             Rng& rng) {
  const double scale = tau / std::sqrt(static_cast<double>(n) * static_cast<double>(T));
  if (scale > kappa * (1 + 1e-12)) {
    throw ArgumentError("sign_instance: tau exceeds kappa sqrt(nT)");
  }
  const Vec s = rng.signs(n);
  const Vec t = rng.signs(T);
  return FactorInstance(scale * make_rank_one(s, t), kappa, "sign");
}

namespace {

// Unit vector of alternating signs made orthogonal to the constant vector.
Vec alternating_unit(Index size) {
  Vec v(size);
  for (Index i = 0; i < size; ++i) v(i) = (i % 2 == 0) ? 1.0 : -1.0;
  v.array() -= v.mean();
  const double nv = v.norm();
  if (nv == 0.0) throw ArgumentError("alternating_unit: size must be >= 2");
  return v / nv;
}

}  // namespace

PanelInstance orthogonal_panel_instance(Index n, Index T, double sigma_m,
                                        double sigma_d, double beta,
                                        double sigma_eps, double sigma_u) {
  if (n < 2 || T < 2) throw ArgumentError("orthogonal_panel_instance: n, T >= 2");
  const Vec a = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  const Vec b = Vec::Ones(T) / std::sqrt(static_cast<double>(T));
  const Vec c = alternating_unit(n);
  const Vec d = alternating_unit(T);
  return PanelInstance(sigma_m * make_rank_one(a, b), sigma_d * make_rank_one(c, d),
                       sigma_eps, sigma_u, beta);
}

}  // namespace weakfactor
