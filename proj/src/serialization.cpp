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

#include "weakfactor/serialization.hpp"

#include <string>

namespace weakfactor {

namespace {

nlohmann::json info_json(const PairInfo& info) {
  nlohmann::json j = nlohmann::json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  put("kl", info.kl);
  put("tv_upper", info.tv_upper);
  put("chi2_cross", info.chi2_cross);
  return j;
}

template <typename Pair>
nlohmann::json pair_json(const Pair& pair) {
  return {{"null", to_json(pair.null_instance)},
          {"alt", to_json(pair.alt_instance)},
          {"separation", pair.separation},
          {"info", info_json(pair.info)},
          {"construction", to_json(pair.construction)}};
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ArgumentError(std::string("instance JSON: missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("instance JSON: bad field '") + key + "': " + e.what());
  }
}

}  // namespace

nlohmann::json matrix_to_json(const Mat& m) {
  nlohmann::json a = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

Mat matrix_from_json(const nlohmann::json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols) {
    throw ArgumentError("matrix JSON: expected a flat array of rows * cols numbers");
  }
  Mat m(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index c = 0; c < cols; ++c, ++k) {
      if (!j[k].is_number()) throw ArgumentError("matrix JSON: non-numeric entry");
      m(i, c) = j[k].get<double>();
    }
  }
  return m;
}

nlohmann::json to_json(const FactorInstance& inst) {
  return {{"kind", "factor"},       {"n", inst.rows()},
          {"T", inst.cols()},       {"kappa", inst.kappa()},
          {"label", inst.label()},  {"M", matrix_to_json(inst.M())}};
}

nlohmann::json to_json(const PanelInstance& inst) {
  return {{"kind", "panel"},
          {"n", inst.rows()},
          {"T", inst.cols()},
          {"sigma_eps", inst.sigma_eps()},
          {"sigma_u", inst.sigma_u()},
          {"beta", inst.beta()},
          {"M", matrix_to_json(inst.M())},
          {"D", matrix_to_json(inst.D())}};
}

FactorInstance factor_instance_from_json(const nlohmann::json& j) {
  const auto n = field<Index>(j, "n");
  const auto t = field<Index>(j, "T");
  const std::string label = j.contains("label") ? field<std::string>(j, "label") : "";
  return FactorInstance(matrix_from_json(field<nlohmann::json>(j, "M"), n, t),
                        field<double>(j, "kappa"),
                        label);
}

PanelInstance panel_instance_from_json(const nlohmann::json& j) {
  const auto n = field<Index>(j, "n");
  const auto t = field<Index>(j, "T");
  return PanelInstance(matrix_from_json(field<nlohmann::json>(j, "M"), n, t),
                       matrix_from_json(field<nlohmann::json>(j, "D"), n, t),
                       field<double>(j, "sigma_eps"), field<double>(j, "sigma_u"),
                       field<double>(j, "beta"));
}

nlohmann::json to_json(const Construction& c) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  return {{"name", c.name}, {"params", params}};
}

nlohmann::json to_json(const FactorPair& pair) { return pair_json(pair); }
nlohmann::json to_json(const PanelPair& pair) { return pair_json(pair); }

}  // namespace weakfactor
