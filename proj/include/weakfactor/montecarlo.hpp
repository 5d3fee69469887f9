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

// Replication engine: runs a trial R times at every grid point on derived
// random streams and aggregates coverage, width and error summaries.

#ifndef WEAKFACTOR_MONTECARLO_HPP
#define WEAKFACTOR_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "weakfactor/matrix_core.hpp"
#include "weakfactor/random.hpp"

namespace weakfactor {

using KeyValues = std::vector<std::pair<std::string, double>>;

/// Value for `key` in an ordered key-value list, or nullopt.
std::optional<double> lookup(const KeyValues& kv, const std::string& key);

struct GridPoint {
  Index n = 0;
  Index T = 0;
  std::string label;
  KeyValues params;

  /// Parameter value; "n" and "T" resolve to the dimensions. Throws
  /// ArgumentError for unknown keys.
  double param(const std::string& key) const;
};

struct ReplicationRecord {
  std::size_t point = 0;  // grid index
  int rep = 0;
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double truth = std::numeric_limits<double>::quiet_NaN();
  std::optional<bool> covered;
  std::optional<double> width;
  KeyValues aux;
  std::string error_tag;  // empty when the replication succeeded

  bool ok() const { return error_tag.empty(); }
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

struct GridSummary {
  std::size_t point = 0;
  int replications = 0;
  int errors = 0;
  std::optional<Estimate> coverage;    // se = sqrt(p (1 - p) / R)
  std::optional<Estimate> mean_width;
  std::optional<Estimate> rmse;        // se by the delta method
  std::optional<double> median_abs_error;
  bool failed = false;                 // more than 10% errored replications
};

struct ResultTable {
  std::string experiment;
  std::vector<GridPoint> grid;
  std::vector<ReplicationRecord> rows;  // point-major, then by rep
  std::vector<GridSummary> summary;

  bool failed() const;
  const GridSummary& summary_for(const std::string& label) const;
  std::vector<const ReplicationRecord*> rows_for(std::size_t point) const;
};

/// A replication: fills estimate, truth and optional fields from the grid
/// point and its own random stream. Throwing marks the row as errored.
using Trial = std::function<ReplicationRecord(const GridPoint&, std::size_t, Rng&)>;

struct ExperimentSpec {
  std::string name;
  std::vector<GridPoint> grid;
  int replications = 1;
  std::uint64_t master_seed = 0;
  Trial trial;
  int threads = 1;
};

/// Stream for replication `rep` at grid point `point`.
inline std::uint64_t replication_seed(std::uint64_t master, std::size_t point, int rep) {
  return derive_seed(master, {static_cast<std::uint64_t>(point),
                              static_cast<std::uint64_t>(rep)});
}

/// Runs every (point, rep) pair on up to `threads` workers. The table does
/// not depend on the worker count.
ResultTable run_experiment(const ExperimentSpec& spec);

GridSummary summarize(const std::vector<const ReplicationRecord*>& rows, std::size_t point);

/// Least-squares slope of log y on log x. Throws ArgumentError for fewer than
/// three points or nonpositive values.
double rate_slope(const std::vector<double>& x, const std::vector<double>& y);

/// rate_slope over the grid, with x a grid parameter and y a summary field
/// ("median_abs_error", "rmse", "mean_width" or "coverage").
double rate_slope(const ResultTable& table, const std::string& x_key,
                  const std::string& y_key);

/// Values of auxiliary column `key` over the successful rows of a point.
std::vector<double> aux_values(const ResultTable& table, std::size_t point,
                               const std::string& key);

/// Estimates (or widths) over the successful rows of a point.
std::vector<double> estimate_values(const ResultTable& table, std::size_t point);
std::vector<double> width_values(const ResultTable& table, std::size_t point);

/// Summary field by name as used by rate_slope.
double summary_value(const GridSummary& s, const std::string& key);

/// Empirical q-quantile (smallest order statistic covering a fraction q).
double empirical_quantile(std::vector<double> values, double q);

/// Shortest round-trip decimal form of `v`; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// RFC-4180 quoting when the field contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

/// One row per replication with the columns
///   experiment, n, T, point, <params>, rep, estimate, truth, covered, width,
///   error_tag, <aux>
/// preceded by "# " comment lines from `header`.
void write_csv(const ResultTable& table, std::ostream& os,
               const std::vector<std::string>& header = {});

/// Per grid point summary as a JSON document. Top-level members of `extra`
/// (an object) are copied into the document.
void write_json_summary(const ResultTable& table, std::ostream& os,
                        const nlohmann::json& extra = nlohmann::json::object());

}  // namespace weakfactor

#endif  // WEAKFACTOR_MONTECARLO_HPP
