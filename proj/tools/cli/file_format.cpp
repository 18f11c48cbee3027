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

#include "cli/file_format.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qlab::cli {

using nlohmann::json;

namespace {

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw FormatError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(path + (path.empty() ? "" : ".") + key + ": missing field");
  return *it;
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) throw FormatError(path + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw FormatError(path + ": not finite");
  return x;
}

int read_dim(const json& doc) {
  const json& dim = field(doc, "dim", "");
  if (!dim.is_number_integer() || dim.get<long>() < 1) throw FormatError("dim: expected a positive integer");
  return dim.get<int>();
}

void check_schema(const json& doc) {
  const json& version = field(doc, "schema_version", "");
  if (!version.is_string() || version.get<std::string>() != kSchemaVersion)
    throw FormatError(std::string("schema_version: expected \"") + kSchemaVersion + "\"");
}

Vector read_vector(const json& entry, int dim, const std::string& path) {
  if (!entry.is_array()) throw FormatError(path + ": expected an array of complex numbers");
  if (entry.size() != static_cast<std::size_t>(dim))
    throw FormatError(path + ": expected " + std::to_string(dim) + " amplitudes, found " + std::to_string(entry.size()));
  Vector v(dim);
  for (int k = 0; k < dim; ++k) {
    const std::string at = path + "[" + std::to_string(k) + "]";
    v(k) = Complex(number(field(entry[k], "re", at), at + ".re"), number(field(entry[k], "im", at), at + ".im"));
  }
  return v;
}

PureState read_state(const json& entry, int dim, const std::string& path) {
  const Vector v = read_vector(entry, dim, path);
  if (std::abs(v.norm() - 1.0) > kFileTol) throw FormatError(path + ": state is not normalized");
  return PureState::normalized(v);
}

std::vector<double> read_reals(const json& doc, const std::string& key, std::size_t expected) {
  const json& arr = field(doc, key, "");
  if (!arr.is_array()) throw FormatError(key + ": expected an array");
  if (arr.size() != expected)
    throw FormatError(key + ": expected " + std::to_string(expected) + " entries, found " + std::to_string(arr.size()));
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = key + "[" + std::to_string(i) + "]";
    const double x = number(arr[i], at);
    if (x < 0.0) throw FormatError(at + ": must be nonnegative");
    out.push_back(x);
  }
  return out;
}

std::vector<PureState> read_states(const json& doc, int dim) {
  const json& arr = field(doc, "states", "");
  if (!arr.is_array() || arr.empty()) throw FormatError("states: expected a non-empty array");
  std::vector<PureState> states;
  states.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) states.push_back(read_state(arr[i], dim, "states[" + std::to_string(i) + "]"));
  return states;
}

}  // namespace

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back({{"re", v(k).real()}, {"im", v(k).imag()}});
  return arr;
}

json ensemble_to_json(const Ensemble& ensemble, const std::optional<PureState>& fiducial) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = ensemble.dim();
  json states = json::array();
  for (const auto& s : ensemble.states()) states.push_back(vector_to_json(s.amplitudes()));
  doc["states"] = std::move(states);
  doc["probs"] = ensemble.probs();
  if (fiducial) doc["fiducial"] = vector_to_json(fiducial->amplitudes());
  return doc;
}

Ensemble ensemble_from_json(const json& doc) {
  check_schema(doc);
  const int dim = read_dim(doc);
  std::vector<PureState> states = read_states(doc, dim);
  std::vector<double> probs = read_reals(doc, "probs", states.size());
  try {
    return Ensemble(std::move(states), std::move(probs), kFileTol);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("probs: ") + e.what());
  }
}

json povm_to_json(std::span<const RankOnePovmElement> elements) {
  if (elements.empty()) throw Error("povm_to_json: no elements");
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = elements.front().direction.dim();
  json states = json::array();
  json weights = json::array();
  for (const auto& e : elements) {
    states.push_back(vector_to_json(e.direction.amplitudes()));
    weights.push_back(e.weight);
  }
  doc["states"] = std::move(states);
  doc["weights"] = std::move(weights);
  return doc;
}

std::vector<RankOnePovmElement> povm_elements_from_json(const json& doc) {
  check_schema(doc);
  const int dim = read_dim(doc);
  std::vector<PureState> states = read_states(doc, dim);
  const std::vector<double> weights = read_reals(doc, "weights", states.size());
  std::vector<RankOnePovmElement> out;
  for (std::size_t b = 0; b < states.size(); ++b) out.push_back({weights[b], std::move(states[b])});
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open file for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw Error(path.string() + ": write failed");
}

Ensemble read_ensemble_file(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  try {
    return ensemble_from_json(doc);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_ensemble_file(const std::filesystem::path& path, const Ensemble& ensemble,
                         const std::optional<PureState>& fiducial) {
  write_json_file(path, ensemble_to_json(ensemble, fiducial));
}

Povm read_povm_file(const std::filesystem::path& path) {
  const json doc = read_json_file(path);
  try {
    const auto elements = povm_elements_from_json(doc);
    Povm povm = Povm::from_rank_one(elements);
    const PovmValidation check = validate_povm(povm, kFileTol);
    if (!check.passed) {
      std::ostringstream msg;
      msg << "weights/states: not a POVM (positivity margin " << check.positivity_margin << ", completeness residual "
          << check.completeness_residual << ")";
      throw FormatError(msg.str());
    }
    return povm;
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_povm_file(const std::filesystem::path& path, std::span<const RankOnePovmElement> elements) {
  write_json_file(path, povm_to_json(elements));
}

}  // namespace qlab::cli
