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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlab/ensembles.hpp"

namespace qlab::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,         // bad arguments or malformed input files
  kExitVerification = 2,  // a numerical check failed
  kExitSearch = 3,        // a SIC fiducial search failed
};

/// Machine-readable record of one command. `results` holds only
/// deterministic content, so two runs with the same seed and flags produce
/// byte-identical results sections.
struct RunReport {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::optional<std::uint64_t> seed;
  nlohmann::json results = nlohmann::json::array();
  double wall_time = 0.0;

  nlohmann::json to_json() const;
};

struct CommandResult {
  int exit_code;
  RunReport report;
};

nlohmann::json to_json(const std::string& name, const FidelityReport& report);

struct QuantumnessOptions {
  int d = 0;
  bool verify = false;
  std::int64_t samples = 100000;
  std::optional<std::uint64_t> seed;
};

struct SicOptions {
  int d = 0;
  std::optional<std::uint64_t> seed;
  int restarts = 200;
  int max_iters = 1000;
  std::optional<std::filesystem::path> out;
};

struct MubOptions {
  int d = 0;
  std::optional<std::filesystem::path> out;
};

struct FidelityOptions {
  std::filesystem::path ensemble;
  std::optional<std::filesystem::path> povm;
  bool optimize = false;
  bool haar = false;
  int outcomes = 0;  // 0 means d^2
  int restarts = 8;
  std::int64_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> trace;
};

struct GapOptions {
  int d1 = 0;
  int d2 = 0;
  std::optional<std::uint64_t> seed;
};

// Each command prints a human-readable summary to `out`. Library errors
// propagate as exceptions; run() maps them to exit codes.
CommandResult cmd_quantumness(const QuantumnessOptions& opts, std::ostream& out);
CommandResult cmd_sic(const SicOptions& opts, std::ostream& out);
CommandResult cmd_mub(const MubOptions& opts, std::ostream& out);
CommandResult cmd_fidelity(const FidelityOptions& opts, std::ostream& out);
CommandResult cmd_gap(const GapOptions& opts, std::ostream& out);

/// Parses `args` (without the program name), dispatches, and returns the
/// process exit code. With --report FILE the RunReport is written as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlab::cli
