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

#include "weakfactor/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <ostream>
#include <thread>

#include "weakfactor/errors.hpp"

namespace weakfactor {

namespace {

void append_keys(const KeyValues& kv, std::vector<std::string>& keys) {
  for (const auto& [k, v] : kv) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

nlohmann::json estimate_json(const std::optional<Estimate>& e) {
  if (!e) return nullptr;
  return {{"value", e->value}, {"se", e->se}};
}

}  // namespace

std::optional<double> lookup(const KeyValues& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return v;
  return std::nullopt;
}

double GridPoint::param(const std::string& key) const {
  if (key == "n") return static_cast<double>(n);
  if (key == "T") return static_cast<double>(T);
  if (auto v = lookup(params, key)) return *v;
  throw ArgumentError("GridPoint '" + label + "': no parameter '" + key + "'");
}

bool ResultTable::failed() const {
  return std::any_of(summary.begin(), summary.end(),
                     [](const GridSummary& s) { return s.failed; });
}

const GridSummary& ResultTable::summary_for(const std::string& label) const {
  for (const auto& s : summary)
    if (grid.at(s.point).label == label) return s;
  throw ArgumentError("ResultTable: no grid point labelled '" + label + "'");
}

std::vector<const ReplicationRecord*> ResultTable::rows_for(std::size_t point) const {
  std::vector<const ReplicationRecord*> out;
  for (const auto& r : rows)
    if (r.point == point) out.push_back(&r);
  return out;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  if (spec.replications < 1) throw ArgumentError("run_experiment: replications >= 1");
  if (spec.grid.empty()) throw ArgumentError("run_experiment: empty grid");
  if (!spec.trial) throw ArgumentError("run_experiment: no trial registered");

  const std::size_t reps = static_cast<std::size_t>(spec.replications);
  const std::size_t total = spec.grid.size() * reps;
  std::vector<ReplicationRecord> rows(total);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
      const std::size_t point = job / reps;
      const int rep = static_cast<int>(job % reps);
      Rng rng(replication_seed(spec.master_seed, point, rep));
      ReplicationRecord rec;
      try {
        rec = spec.trial(spec.grid[point], point, rng);
      } catch (const Error& e) {
        rec = ReplicationRecord{};
        rec.error_tag = e.tag();
      } catch (const std::exception&) {
        rec = ReplicationRecord{};
        rec.error_tag = "exception";
      }
      rec.point = point;
      rec.rep = rep;
      rows[job] = std::move(rec);
    }
  };

  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(spec.threads, 1)), 1, total);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  ResultTable table;
  table.experiment = spec.name;
  table.grid = spec.grid;
  table.rows = std::move(rows);
  for (std::size_t p = 0; p < spec.grid.size(); ++p) {
    table.summary.push_back(summarize(table.rows_for(p), p));
  }
  return table;
}

GridSummary summarize(const std::vector<const ReplicationRecord*>& rows, std::size_t point) {
  GridSummary s;
  s.point = point;
  s.replications = static_cast<int>(rows.size());

  std::vector<double> covered;
  std::vector<double> widths;
  std::vector<double> sq_err;
  std::vector<double> abs_err;
  for (const auto* r : rows) {
    if (!r->ok()) {
      ++s.errors;
      continue;
    }
    if (r->covered) covered.push_back(*r->covered ? 1.0 : 0.0);
    if (r->width) widths.push_back(*r->width);
    const double e = r->estimate - r->truth;
    if (std::isfinite(e)) {
      sq_err.push_back(e * e);
      abs_err.push_back(std::abs(e));
    }
  }
  s.failed = 10 * s.errors > s.replications;

  auto mean_se = [](const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return Estimate{mean, sd / std::sqrt(n)};
  };

  if (!covered.empty()) {
    const double n = static_cast<double>(covered.size());
    double p = 0.0;
    for (double c : covered) p += c;
    p /= n;
    s.coverage = Estimate{p, std::sqrt(p * (1.0 - p) / n)};
  }
  if (!widths.empty()) s.mean_width = mean_se(widths);
  if (!sq_err.empty()) {
    const Estimate mse = mean_se(sq_err);
    const double rmse = std::sqrt(mse.value);
    s.rmse = Estimate{rmse, rmse > 0.0 ? mse.se / (2.0 * rmse) : 0.0};
    s.median_abs_error = empirical_quantile(abs_err, 0.5);
  }
  return s;
}

double rate_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw ArgumentError("rate_slope: need at least three (x, y) pairs");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw ArgumentError("rate_slope: values must be positive");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) throw ArgumentError("rate_slope: x values are all equal");
  return sxy / sxx;
}

std::vector<double> aux_values(const ResultTable& table, std::size_t point,
                               const std::string& key) {
  std::vector<double> out;
  for (const auto* r : table.rows_for(point)) {
    if (!r->ok()) continue;
    if (auto v = lookup(r->aux, key)) out.push_back(*v);
  }
  return out;
}

std::vector<double> estimate_values(const ResultTable& table, std::size_t point) {
  std::vector<double> out;
  for (const auto* r : table.rows_for(point))
    if (r->ok()) out.push_back(r->estimate);
  return out;
}

std::vector<double> width_values(const ResultTable& table, std::size_t point) {
  std::vector<double> out;
  for (const auto* r : table.rows_for(point))
    if (r->ok() && r->width) out.push_back(*r->width);
  return out;
}

double summary_value(const GridSummary& s, const std::string& key) {
  std::optional<double> v;
  if (key == "median_abs_error") {
    v = s.median_abs_error;
  } else if (key == "rmse") {
    if (s.rmse) v = s.rmse->value;
  } else if (key == "mean_width") {
    if (s.mean_width) v = s.mean_width->value;
  } else if (key == "coverage") {
    if (s.coverage) v = s.coverage->value;
  } else {
    throw ArgumentError("summary_value: unknown field '" + key + "'");
  }
  if (!v) throw ArgumentError("summary_value: field '" + key + "' is absent");
  return *v;
}

double rate_slope(const ResultTable& table, const std::string& x_key,
                  const std::string& y_key) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& s : table.summary) {
    x.push_back(table.grid.at(s.point).param(x_key));
    y.push_back(summary_value(s, y_key));
  }
  return rate_slope(x, y);
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ArgumentError("empirical_quantile: no values");
  if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("empirical_quantile: q in [0, 1]");
  std::sort(values.begin(), values.end());
  const auto need =
      static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  const std::size_t idx = need == 0 ? 0 : std::min(need, values.size()) - 1;
  return values[idx];
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const ResultTable& table, std::ostream& os,
               const std::vector<std::string>& header) {
  for (const auto& line : header) os << "# " << line << "\n";

  std::vector<std::string> param_keys;
  for (const auto& g : table.grid) append_keys(g.params, param_keys);
  std::vector<std::string> aux_keys;
  for (const auto& r : table.rows) append_keys(r.aux, aux_keys);

  os << "experiment,n,T,point";
  for (const auto& k : param_keys) os << ',' << csv_escape(k);
  os << ",rep,estimate,truth,covered,width,error_tag";
  for (const auto& k : aux_keys) os << ',' << csv_escape(k);
  os << "\n";

  for (const auto& r : table.rows) {
    const GridPoint& g = table.grid.at(r.point);
    os << csv_escape(table.experiment) << ',' << g.n << ',' << g.T << ','
       << csv_escape(g.label);
    for (const auto& k : param_keys) os << ',' << optional_field(lookup(g.params, k));
    os << ',' << r.rep;
    if (r.ok()) {
      os << ',' << format_double(r.estimate) << ',' << format_double(r.truth);
    } else {
      os << ",,";
    }
    os << ',' << (r.covered ? (*r.covered ? "1" : "0") : "");
    os << ',' << optional_field(r.width);
    os << ',' << csv_escape(r.error_tag);
    for (const auto& k : aux_keys) os << ',' << optional_field(lookup(r.aux, k));
    os << "\n";
  }
}

void write_json_summary(const ResultTable& table, std::ostream& os,
                        const nlohmann::json& extra) {
  nlohmann::json doc;
  doc["experiment"] = table.experiment;
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) doc[k] = v;
  }
  doc["failed"] = table.failed();
  nlohmann::json points = nlohmann::json::array();
  for (const auto& s : table.summary) {
    const GridPoint& g = table.grid.at(s.point);
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : g.params) params[k] = v;
    points.push_back({{"point", g.label},
                      {"n", g.n},
                      {"T", g.T},
                      {"params", params},
                      {"replications", s.replications},
                      {"errors", s.errors},
                      {"failed", s.failed},
                      {"coverage", estimate_json(s.coverage)},
                      {"mean_width", estimate_json(s.mean_width)},
                      {"rmse", estimate_json(s.rmse)},
                      {"median_abs_error", s.median_abs_error
                                               ? nlohmann::json(*s.median_abs_error)
                                               : nlohmann::json(nullptr)}});
  }
  doc["summary"] = points;
  os << doc.dump(2) << "\n";
}

}  // namespace weakfactor
