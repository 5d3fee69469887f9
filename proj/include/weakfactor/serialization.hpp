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

// JSON documents for instances and two-point pairs. Matrices are stored as
// flat row-major arrays next to their dimensions.

#ifndef WEAKFACTOR_SERIALIZATION_HPP
#define WEAKFACTOR_SERIALIZATION_HPP

#include "json.hpp"
#include "weakfactor/adversarial.hpp"
#include "weakfactor/model.hpp"

namespace weakfactor {

nlohmann::json matrix_to_json(const Mat& m);
Mat matrix_from_json(const nlohmann::json& j, Index rows, Index cols);

/// {"kind": "factor", "n", "T", "kappa", "label", "M"}.
nlohmann::json to_json(const FactorInstance& inst);
/// {"kind": "panel", "n", "T", "sigma_eps", "sigma_u", "beta", "M", "D"}.
nlohmann::json to_json(const PanelInstance& inst);

/// Inverse of to_json; the constructors re-run their validation. Malformed
/// documents throw ArgumentError.
FactorInstance factor_instance_from_json(const nlohmann::json& j);
PanelInstance panel_instance_from_json(const nlohmann::json& j);

/// {"name", "params": {...}}.
nlohmann::json to_json(const Construction& c);

/// {"null", "alt", "separation", "info", "construction"}.
nlohmann::json to_json(const FactorPair& pair);
nlohmann::json to_json(const PanelPair& pair);

}  // namespace weakfactor

#endif  // WEAKFACTOR_SERIALIZATION_HPP
