// Copyright 2026 The qlab Authors
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

#pragma once

// JSON file formats for ensembles and rank-1 POVMs (schema_version "1").
//
//   {"schema_version": "1", "dim": 2,
//    "states": [[{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}], ...],
//    "probs": [0.5, ...]}
//
// POVM files use "weights" instead of "probs"; each element is
// weight * |state><state| and the elements must sum to the identity.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlab/ensembles.hpp"

namespace qlab::cli {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr double kFileTol = 1e-9;

/// Malformed or inconsistent file content. The message names the JSON
/// field (e.g. "states[3][1].re") or the parser's line and column.
class FormatError : public Error {
 public:
  using Error::Error;
};

nlohmann::json vector_to_json(const Vector& v);

nlohmann::json ensemble_to_json(const Ensemble& ensemble, const std::optional<PureState>& fiducial = std::nullopt);
Ensemble ensemble_from_json(const nlohmann::json& doc);

nlohmann::json povm_to_json(std::span<const RankOnePovmElement> elements);
std::vector<RankOnePovmElement> povm_elements_from_json(const nlohmann::json& doc);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

Ensemble read_ensemble_file(const std::filesystem::path& path);
void write_ensemble_file(const std::filesystem::path& path, const Ensemble& ensemble,
                         const std::optional<PureState>& fiducial = std::nullopt);

/// Loads and checks completeness and positivity within kFileTol.
Povm read_povm_file(const std::filesystem::path& path);
void write_povm_file(const std::filesystem::path& path, std::span<const RankOnePovmElement> elements);

}  // namespace qlab::cli
