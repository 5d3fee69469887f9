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

#include "weakfactor/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "weakfactor/adversarial.hpp"
#include "weakfactor/entrywise.hpp"
#include "weakfactor/errors.hpp"
#include "weakfactor/oracle_checks.hpp"
#include "weakfactor/panel.hpp"
#include "weakfactor/serialization.hpp"

namespace weakfactor {

namespace {

using Dims = std::pair<Index, Index>;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

double root(Index n, Index T) {
  return std::sqrt(static_cast<double>(n) * static_cast<double>(T));
}

double root_sum(Index n, Index T) { return std::sqrt(static_cast<double>(n + T)); }

std::vector<Dims> dims(const ExperimentConfig& cfg, Index fallback) {
  std::vector<Dims> out;
  if (!cfg.sizes.empty()) {
    for (Index s : cfg.sizes) out.emplace_back(s, s);
  } else {
    out.emplace_back(cfg.n.value_or(fallback), cfg.T.value_or(cfg.n.value_or(fallback)));
  }
  for (const auto& [n, t] : out) {
    if (n < 2 || t < 2) throw ArgumentError("experiment: n and T must be >= 2");
  }
  return out;
}

std::string size_label(Index n, Index T) {
  return "n" + std::to_string(n) + "_T" + std::to_string(T);
}

ExperimentSpec make_spec(const std::string& name, const ExperimentConfig& cfg,
                         int default_reps) {
  ExperimentSpec spec;
  spec.name = name;
  spec.replications = cfg.reps.value_or(default_reps);
  if (spec.replications < 1) throw ArgumentError("experiment: reps must be >= 1");
  spec.master_seed = cfg.seed;
  spec.threads = cfg.threads;
  return spec;
}

double sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  double m = 0.0;
  for (double x : v) m += x;
  return m / static_cast<double>(v.size());
}

double coverage_or_nan(const GridSummary& s) {
  return s.coverage ? s.coverage->value : std::nan("");
}

void finish(ExperimentReport& r) {
  r.failed = r.failed || r.table.failed();
  for (const auto& s : r.table.summary) {
    if (s.errors > 0) {
      r.notes.push_back("point " + r.table.grid[s.point].label + ": " +
                        std::to_string(s.errors) + " errored replications" +
                        (s.failed ? " (over 10%, experiment failed)" : ""));
    }
  }
}

}  // namespace

double ExperimentConfig::get(const std::string& key, double fallback) const {
  if (auto v = lookup(params, key)) return *v;
  return fallback;
}

bool ExperimentConfig::has(const std::string& key) const {
  return lookup(params, key).has_value();
}

double ExperimentReport::metric(const std::string& key) const {
  if (auto v = lookup(metrics, key)) return *v;
  throw ArgumentError("ExperimentReport: no metric '" + key + "'");
}

ExperimentReport run_entrywise_rate(const ExperimentConfig& cfg) {
  const double kappa = cfg.get("kappa", 1.0);
  const std::vector<double> fracs =
      cfg.tau_fracs.empty() ? std::vector<double>{0.1, 0.2, 0.4, 0.8} : cfg.tau_fracs;
  const std::vector<Dims> sizes = dims(cfg, 100);

  ExperimentSpec spec = make_spec("entrywise-rate", cfg, 500);
  std::vector<FactorInstance> instances;
  for (const auto& [n, t] : sizes) {
    for (double f : fracs) {
      const double tau = f * root(n, t);
      instances.push_back(row_coherent_instance(n, t, tau, kappa));
      spec.grid.push_back({n, t, size_label(n, t) + "_f" + format_double(f),
                           {{"tau_frac", f}, {"tau", tau}, {"kappa", kappa}}});
    }
  }
  spec.trial = [&instances](const GridPoint& g, std::size_t idx, Rng& rng) {
    const FactorInstance& inst = instances[idx];
    const Mat x = sample_observation(inst, rng);
    ReplicationRecord rec;
    rec.estimate = estimate_m11(x);
    rec.truth = inst.m11();
    rec.aux = {{"scaled_error",
                std::abs(rec.estimate - rec.truth) * g.param("tau") / root_sum(g.n, g.T)}};
    return rec;
  };

  ExperimentReport r;
  r.table = run_experiment(spec);
  r.provenance["instance_family"] = "row_coherent";
  r.provenance["params"] = {{"kappa", kappa}, {"tau_fracs", fracs}};

  std::map<double, std::vector<double>> by_frac;
  for (const auto& s : r.table.summary) {
    const GridPoint& g = r.table.grid[s.point];
    if (!s.median_abs_error) continue;
    const double scaled = *s.median_abs_error * g.param("tau") / root_sum(g.n, g.T);
    r.metrics.emplace_back("scaled_median:" + g.label, scaled);
    by_frac[g.param("tau_frac")].push_back(scaled);
    r.notes.push_back(g.label + ": median |error| " + fmt(*s.median_abs_error) +
                      ", scaled " + fmt(scaled));
  }
  if (sizes.size() == 1 && fracs.size() >= 3 && !r.table.failed()) {
    const double slope = rate_slope(r.table, "tau", "median_abs_error");
    r.metrics.emplace_back("slope", slope);
    r.notes.push_back("log-log slope of median |error| in tau: " + fmt(slope));
  }
  if (sizes.size() > 1) {
    double worst = 0.0;
    for (const auto& [f, v] : by_frac) {
      if (v.size() < 2) continue;
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      worst = std::max(worst, *hi / *lo);
    }
    r.metrics.emplace_back("scaled_ratio", worst);
    r.notes.push_back("max/min of scaled median error across sizes: " + fmt(worst));
  }
  finish(r);
  return r;
}

ExperimentReport run_entrywise_coverage(const ExperimentConfig& cfg) {
  const double kappa = cfg.get("kappa", 1.0);
  const double kappa_bar = cfg.get("kappa_bar", kappa);
  const double alpha = cfg.get("alpha", 0.05);
  const std::vector<double> fracs =
      cfg.tau_fracs.empty() ? std::vector<double>{0.3, 0.5, 1.0} : cfg.tau_fracs;
  const std::vector<Dims> sizes = dims(cfg, 100);

  ExperimentSpec spec = make_spec("entrywise-coverage", cfg, 500);
  std::vector<FactorInstance> instances;
  std::vector<FactorInstance> calibration;
  for (const auto& [n, t] : sizes) {
    for (double f : fracs) {
      const double tau = f * root(n, t);
      instances.push_back(row_coherent_instance(n, t, tau, kappa));
      calibration.push_back(instances.back());
      spec.grid.push_back({n, t, size_label(n, t) + "_f" + format_double(f),
                           {{"tau_frac", f}, {"tau", tau}, {"below", 0.0}}});
    }
    const double tau_low = std::max(kappa * std::sqrt(static_cast<double>(t)), root_sum(n, t));
    instances.push_back(row_coherent_instance(n, t, tau_low, kappa));
    spec.grid.push_back({n, t, size_label(n, t) + "_below",
                         {{"tau_frac", tau_low / root(n, t)}, {"tau", tau_low}, {"below", 1.0}}});
  }

  ExperimentReport r;
  double c0 = cfg.get("C0", kDefaultC0);
  if (cfg.get("calibrate", 0.0) != 0.0) {
    const CalibrationResult cal =
        calibrate_c0(calibration, alpha, spec.replications, derive_seed(cfg.seed, {0xCA1B}));
    c0 = cal.c0;
    r.notes.push_back("calibrated C0 = " + fmt(c0) + " on an independent batch of " +
                      std::to_string(spec.replications) + " draws per point");
  }
  for (auto& g : spec.grid) g.params.emplace_back("C0", c0);

  spec.trial = [&](const GridPoint&, std::size_t idx, Rng& rng) {
    const FactorInstance& inst = instances[idx];
    const Mat x = sample_observation(inst, rng);
    const EntrywiseEstimate est = adaptive_estimate_m11(x, kappa_bar);
    const Interval ci = adaptive_ci(x, kappa_bar, c0);
    const Interval rate = rate_adaptive_ci(x, c0);
    ReplicationRecord rec;
    rec.estimate = est.value;
    rec.truth = inst.m11();
    rec.covered = ci.contains(rec.truth);
    rec.width = ci.width();
    rec.aux = {{"truncated", est.truncated ? 1.0 : 0.0},
               {"spectral_stat", est.spectral_stat},
               {"rate_covered", rate.contains(rec.truth) ? 1.0 : 0.0},
               {"rate_width", rate.width()}};
    return rec;
  };
  r.table = run_experiment(spec);

  double min_cov = 1.0;
  double min_rate = 1.0;
  double truncated = 0.0;
  double count = 0.0;
  for (const auto& s : r.table.summary) {
    const GridPoint& g = r.table.grid[s.point];
    const double cov = coverage_or_nan(s);
    const double rate_cov = mean(aux_values(r.table, s.point, "rate_covered"));
    const auto trunc = aux_values(r.table, s.point, "truncated");
    for (double v : trunc) truncated += v;
    count += static_cast<double>(trunc.size());
    min_cov = std::min(min_cov, cov);
    if (g.param("below") == 0.0) min_rate = std::min(min_rate, rate_cov);
    r.metrics.emplace_back("coverage:" + g.label, cov);
    r.metrics.emplace_back("rate_coverage:" + g.label, rate_cov);
    r.notes.push_back(g.label + ": coverage " + fmt(cov) + ", mean width " +
                      fmt(s.mean_width ? s.mean_width->value : std::nan("")) +
                      ", rate-branch coverage " + fmt(rate_cov) + ", truncated " +
                      fmt(mean(trunc)));
  }
  r.metrics.emplace_back("c0", c0);
  r.metrics.emplace_back("min_coverage", min_cov);
  r.metrics.emplace_back("min_rate_coverage", min_rate);
  r.metrics.emplace_back("truncated_fraction", count > 0 ? truncated / count : std::nan(""));
  r.provenance["params"] = {{"kappa", kappa}, {"kappa_bar", kappa_bar}, {"alpha", alpha},
                            {"C0", c0}, {"tau_fracs", fracs}};
  finish(r);
  return r;
}

ExperimentReport run_adaptivity_demo(const ExperimentConfig& cfg) {
  const auto [n, t] = dims(cfg, 100).front();
  const double kappa = cfg.get("kappa", 1.0);
  const double eta = cfg.get("eta", 0.5);
  const double tau0 = cfg.get("tau0", root(n, t) / 24.0);
  const double tau2 = cfg.get("tau2", 1.0);
  const double alpha = cfg.get("alpha", 0.05);
  const double base_frac = cfg.get("base_frac", 0.5);
  const auto k_max = static_cast<Index>(cfg.get("k_max", 2.0));

  Rng instance_rng(derive_seed(cfg.seed, {0xBA5E}));
  const FactorInstance base =
      sign_instance(n, t, base_frac * root(n, t), kappa * (1.0 - eta), instance_rng);
  const FactorPair pair = thm4_perturbation(base, eta, kappa, tau0, tau2);
  const std::vector<const FactorInstance*> instances{&pair.null_instance, &pair.alt_instance};

  ExperimentSpec spec = make_spec("adaptivity-demo", cfg, 500);
  const KeyValues params{{"eta", eta}, {"tau0", tau0}, {"tau2", tau2}, {"alpha", alpha}};
  spec.grid = {{n, t, "base", params}, {n, t, "alt", params}};
  spec.trial = [&](const GridPoint&, std::size_t idx, Rng& rng) {
    const FactorInstance& inst = *instances[idx];
    const PretestResult pre = naive_pretest(sample_observation(inst, rng), alpha, k_max);
    ReplicationRecord rec;
    rec.estimate = pre.value;
    rec.truth = inst.m11();
    rec.covered = pre.interval.contains(rec.truth);
    rec.width = pre.interval.width();
    rec.aux = {{"k_hat", static_cast<double>(pre.k_hat)}, {"se", pre.standard_error}};
    return rec;
  };

  ExperimentReport r;
  r.table = run_experiment(spec);
  r.provenance["pair"] = to_json(pair.construction);
  r.provenance["params"] = {{"kappa", kappa}, {"eta", eta},       {"tau0", tau0},
                            {"tau2", tau2},   {"alpha", alpha},   {"base_frac", base_frac},
                            {"k_max", k_max}};

  const double cov_base = coverage_or_nan(r.table.summary[0]);
  const double cov_alt = coverage_or_nan(r.table.summary[1]);
  const auto widths = width_values(r.table, 0);
  const double med_width = widths.empty() ? std::nan("") : empirical_quantile(widths, 0.5);
  const double bound = 5.0 * (1.0 / std::sqrt(static_cast<double>(n)) +
                              1.0 / std::sqrt(static_cast<double>(t)));
  const double c0 = pair.separation;
  r.metrics = {{"coverage_base", cov_base},
               {"coverage_alt", cov_alt},
               {"median_width_base", med_width},
               {"width_bound", bound},
               {"c0", c0},
               {"mean_khat_base", mean(aux_values(r.table, 0, "k_hat"))}};
  r.notes.push_back("perturbation c0 = " + fmt(c0) +
                    "; observed entries of base and alt agree exactly");
  r.notes.push_back("pre-test CI coverage: base " + fmt(cov_base) + ", alt " + fmt(cov_alt) +
                    " (worst case over the pair is at most 1/2 asymptotically)");
  r.notes.push_back("median width at base " + fmt(med_width) + " vs 5(n^-1/2 + T^-1/2) = " +
                    fmt(bound));
  finish(r);
  return r;
}

ExperimentReport run_lower_bound_check(const ExperimentConfig& cfg) {
  const auto [n, t] = dims(cfg, 50).front();
  const double kappa = cfg.get("kappa", 1.0);
  const double alpha = cfg.get("alpha", 0.05);
  const double tau = cfg.get("tau", kappa * root(n, t) / 12.0);
  const bool transpose = cfg.get("transpose", 0.0) != 0.0;
  const FactorPair pair = thm1_pair(n, t, tau, kappa, alpha, transpose);
  const std::vector<const FactorInstance*> instances{&pair.null_instance, &pair.alt_instance};

  ExperimentSpec spec = make_spec("lower-bound-check", cfg, 2000);
  const KeyValues params{{"tau", tau}, {"kappa", kappa}, {"alpha", alpha}};
  spec.grid = {{n, t, "null", params}, {n, t, "alt", params}};
  spec.trial = [&](const GridPoint&, std::size_t idx, Rng& rng) {
    const FactorInstance& inst = *instances[idx];
    ReplicationRecord rec;
    rec.estimate = likelihood_ratio_stat(sample_observation(inst, rng),
                                         pair.null_instance.M(), pair.alt_instance.M());
    return rec;
  };

  ExperimentReport r;
  r.table = run_experiment(spec);
  r.provenance["pair"] = to_json(pair.construction);
  r.provenance["params"] = {
      {"tau", tau}, {"kappa", kappa}, {"alpha", alpha}, {"transpose", transpose}};
  if (!r.table.failed()) {
    const LrTest lr =
        calibrate_lr_test(estimate_values(r.table, 0), estimate_values(r.table, 1), alpha);
    r.metrics = {{"critical", lr.critical},        {"size", lr.size},
                 {"power", lr.power},              {"power_se", lr.power_se},
                 {"bound", 2.0 * alpha},           {"tv_upper", *pair.info.tv_upper},
                 {"chi2_cross", *pair.info.chi2_cross}, {"separation", pair.separation}};
    r.notes.push_back("TV bound " + fmt(*pair.info.tv_upper) + " (alpha = " + fmt(alpha) +
                      "), chi-square cross moment " + fmt(*pair.info.chi2_cross));
    r.notes.push_back("LR test: critical value " + fmt(lr.critical) + " from the null batch, " +
                      "power " + fmt(lr.power) + " +- " + fmt(lr.power_se) + " vs 2 alpha = " +
                      fmt(2.0 * alpha));
  }
  finish(r);
  return r;
}

ExperimentReport run_panel_rate(const ExperimentConfig& cfg) {
  const double beta = cfg.get("beta", 0.5);
  const std::vector<std::string> designs =
      cfg.designs.empty() ? std::vector<std::string>{"strong", "weak_m", "weak_d", "over"}
                          : cfg.designs;
  const std::vector<Dims> sizes = dims(cfg, 100);

  ExperimentSpec spec = make_spec("panel-rate", cfg, 500);
  std::vector<PanelInstance> instances;
  for (std::size_t d = 0; d < designs.size(); ++d) {
    const std::string& name = designs[d];
    if (name != "strong" && name != "weak_m" && name != "weak_d" && name != "over") {
      throw ArgumentError("panel-rate: unknown design '" + name +
                          "' (expected strong, weak_m, weak_d or over)");
    }
    for (const auto& [n, t] : sizes) {
      const double strong = root(n, t);
      const double weak = root_sum(n, t);
      const double sm = name == "weak_m" ? weak : strong;
      const double sd_ = name == "weak_d" ? weak : strong;
      const double rank = name == "over" ? 2.0 : 1.0;
      instances.push_back(orthogonal_panel_instance(n, t, sm, sd_, beta));
      spec.grid.push_back({n, t, name + "_" + size_label(n, t),
                           {{"design", static_cast<double>(d)},
                            {"sigma_m", sm},
                            {"sigma_d", sd_},
                            {"r0", rank},
                            {"r1", rank},
                            {"beta", beta}}});
    }
  }
  spec.trial = [&instances](const GridPoint& g, std::size_t idx, Rng& rng) {
    const PanelInstance& inst = instances[idx];
    const PanelSample s = sample_panel(inst, rng);
    const PanelEstimate est = estimate_beta(s.X, s.Y, static_cast<Index>(g.param("r0")),
                                            static_cast<Index>(g.param("r1")));
    ReplicationRecord rec;
    rec.estimate = est.beta_hat;
    rec.truth = inst.beta();
    rec.aux = {{"r_hat", est.r_hat},
               {"scaled_error", root(g.n, g.T) * (est.beta_hat - inst.beta())}};
    return rec;
  };

  ExperimentReport r;
  r.table = run_experiment(spec);
  r.provenance["params"] = {{"beta", beta}, {"designs", designs}};
  std::map<double, std::vector<double>> by_design;
  for (const auto& s : r.table.summary) {
    const GridPoint& g = r.table.grid[s.point];
    if (!s.rmse) continue;
    const double scaled = root(g.n, g.T) * s.rmse->value;
    r.metrics.emplace_back("scaled_rmse:" + g.label, scaled);
    by_design[g.param("design")].push_back(scaled);
    r.notes.push_back(g.label + ": sqrt(nT) RMSE " + fmt(scaled));
  }
  for (const auto& [d, v] : by_design) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double ratio = *hi / *lo;
    r.metrics.emplace_back("ratio:" + designs[static_cast<std::size_t>(d)], ratio);
    r.notes.push_back(designs[static_cast<std::size_t>(d)] + ": max/min across sizes " +
                      fmt(ratio));
  }
  finish(r);
  return r;
}

ExperimentReport run_panel_tradeoff(const ExperimentConfig& cfg) {
  const auto [n, t] = dims(cfg, 100).front();
  const double kappa1 = cfg.get("kappa1", 1.0);
  const double kappa2 = cfg.get("kappa2", 10.0);
  const double c = cfg.get("c", 3.9);
  const PanelInstance truth =
      orthogonal_panel_instance(n, t, kappa1 * root(n, t), kappa2 * root(n, t), 0.0);
  const PanelPair pair = thm7_pair(truth.M(), truth.D(), c, n, t, kappa1, kappa2);
  const std::vector<const PanelInstance*> instances{&pair.null_instance, &pair.alt_instance};

  ExperimentSpec spec = make_spec("panel-tradeoff", cfg, 500);
  const KeyValues params{{"kappa1", kappa1}, {"kappa2", kappa2}, {"c", c}};
  spec.grid = {{n, t, "theta1", params}, {n, t, "theta2", params}};
  spec.trial = [&](const GridPoint& g, std::size_t idx, Rng& rng) {
    const PanelInstance& inst = *instances[idx];
    const PanelSample s = sample_panel(inst, rng);
    const Interval ci = ci_star(s.X, s.Y, kappa2);
    ReplicationRecord rec;
    rec.estimate = ci.center();
    rec.truth = inst.beta();
    rec.covered = ci.contains(rec.truth);
    rec.width = ci.width();
    rec.aux = {{"scaled_error", root(g.n, g.T) * (rec.estimate - rec.truth)}};
    return rec;
  };

  ExperimentReport r;
  r.table = run_experiment(spec);
  r.provenance["pair"] = to_json(pair.construction);
  r.provenance["params"] = {{"kappa1", kappa1}, {"kappa2", kappa2}, {"c", c}};

  const double width = 2.0 * ci_star_half_width(n, t, kappa2);
  double dev = 0.0;
  for (std::size_t p = 0; p < 2; ++p)
    for (double w : width_values(r.table, p)) dev = std::max(dev, std::abs(w - width));
  const double bound = 0.5 + 1.96 / std::sqrt(1.0 + kappa2 * kappa2);
  const double cov1 = coverage_or_nan(r.table.summary[0]);
  const double cov2 = coverage_or_nan(r.table.summary[1]);
  r.metrics = {{"width_formula", width},
               {"max_width_dev", dev},
               {"coverage_theta1", cov1},
               {"coverage_theta2", cov2},
               {"bound", bound},
               {"kl", *pair.info.kl},
               {"sigma_theta1", sigma_theta(pair.null_instance)},
               {"sd_scaled_theta1", sd(aux_values(r.table, 0, "scaled_error"))}};
  r.notes.push_back("CI* width " + fmt(width) + " (max deviation " + fmt(dev) + ")");
  r.notes.push_back("coverage at theta1 " + fmt(cov1) + ", at theta2 " + fmt(cov2) +
                    "; worst-case bound 1/2 + 1.96 (1 + kappa2^2)^-1/2 = " + fmt(bound));
  r.notes.push_back("KL(theta2, theta1) = " + fmt(*pair.info.kl));
  finish(r);
  return r;
}

ExperimentReport run_oracle_check(const ExperimentConfig& cfg) {
  const auto [n, t] = dims(cfg, 8).front();
  const double c = cfg.get("c", 1.0);
  const double kappa = cfg.get("kappa", 12.0);
  const double alpha = cfg.get("alpha", 0.5);
  const double tau = cfg.get("tau", kappa * root(n, t) / 12.0);
  const double keep = cfg.get("keep", 0.9999);
  const double kl_tol = cfg.get("kl_rel_tol", 0.02);

  const PanelInstance truth = orthogonal_panel_instance(n, t, root(n, t), root(n, t), 0.0);
  const PanelPair panel = thm7_pair(truth.M(), truth.D(), c, n, t, 1.0, 1.0);
  const FactorPair factor = thm1_pair(n, t, tau, kappa, alpha);

  ExperimentSpec spec = make_spec("oracle-check", cfg, 100000);
  spec.grid = {{n, t, "kl", {{"c", c}}},
               {n, t, "chi2", {{"tau", tau}, {"kappa", kappa}, {"alpha", alpha}}},
               {n, t, "tv", {{"tau", tau}, {"kappa", kappa}, {"alpha", alpha}}}};
  spec.trial = [&](const GridPoint&, std::size_t idx, Rng& rng) {
    ReplicationRecord rec;
    if (idx == 0) {
      const PanelSample s = sample_panel(panel.alt_instance, rng);
      rec.estimate =
          panel_log_likelihood_ratio(s.X, s.Y, panel.alt_instance, panel.null_instance);
      rec.truth = *panel.info.kl;
      return rec;
    }
    const double llr = likelihood_ratio_stat(sample_observation(factor.null_instance, rng),
                                             factor.null_instance.M(), factor.alt_instance.M());
    if (idx == 1) {
      rec.estimate = std::exp(2.0 * llr);
      rec.truth = *factor.info.chi2_cross;
    } else {
      rec.estimate = std::abs(std::expm1(llr));
      rec.truth = *factor.info.tv_upper;
    }
    return rec;
  };

  ExperimentReport r;
  r.table = run_experiment(spec);
  r.provenance["panel_pair"] = to_json(panel.construction);
  r.provenance["factor_pair"] = to_json(factor.construction);
  r.provenance["params"] = {{"c", c},       {"kappa", kappa}, {"alpha", alpha},
                            {"tau", tau},   {"keep", keep},   {"kl_rel_tol", kl_tol}};
  if (!r.table.failed()) {
    const MomentCheck kl = relative_check(estimate_values(r.table, 0), *panel.info.kl, kl_tol);
    const MomentCheck chi2 =
        trimmed_check(estimate_values(r.table, 1), *factor.info.chi2_cross, keep, 3.0);
    const MomentCheck tv = upper_bound_check(estimate_values(r.table, 2), *factor.info.tv_upper, 3.0);
    auto put = [&](const std::string& k, const MomentCheck& m) {
      r.metrics.emplace_back(k + "_mc", m.estimate);
      r.metrics.emplace_back(k + "_se", m.se);
      r.metrics.emplace_back(k + "_oracle", m.oracle);
      r.metrics.emplace_back(k + "_pass", m.pass ? 1.0 : 0.0);
    };
    put("kl", kl);
    put("chi2", chi2);
    put("tv", tv);
    r.notes.push_back("KL: closed form " + fmt(kl.oracle) + ", Monte Carlo " + fmt(kl.estimate) +
                      " +- " + fmt(kl.se) + (kl.pass ? " ok" : " MISMATCH"));
    r.notes.push_back("chi-square cross moment: closed form " + fmt(chi2.oracle) +
                      ", trimmed Monte Carlo " + fmt(chi2.estimate) + " +- " + fmt(chi2.se) +
                      " (draws above the " + fmt(keep) + " quantile dropped)" +
                      (chi2.pass ? " ok" : " MISMATCH"));
    r.notes.push_back("E|LR - 1|: bound " + fmt(tv.oracle) + ", Monte Carlo " +
                      fmt(tv.estimate) + " +- " + fmt(tv.se) + (tv.pass ? " ok" : " EXCEEDED"));
    r.failed = !(kl.pass && chi2.pass && tv.pass);
  }
  finish(r);
  return r;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "entrywise-rate", "entrywise-coverage", "adaptivity-demo", "lower-bound-check",
      "panel-rate",     "panel-tradeoff",     "oracle-check"};
  return names;
}

ExperimentReport run_named_experiment(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "entrywise-rate") return run_entrywise_rate(cfg);
  if (name == "entrywise-coverage") return run_entrywise_coverage(cfg);
  if (name == "adaptivity-demo") return run_adaptivity_demo(cfg);
  if (name == "lower-bound-check") return run_lower_bound_check(cfg);
  if (name == "panel-rate") return run_panel_rate(cfg);
  if (name == "panel-tradeoff") return run_panel_tradeoff(cfg);
  if (name == "oracle-check") return run_oracle_check(cfg);
  throw ArgumentError("unknown experiment '" + name + "'");
}

}  // namespace weakfactor
