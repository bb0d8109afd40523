// Copyright 2026 The Forge Authors.
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

// End-to-end run: environment, demonstrations, DNF transform, pruning and
// translation, driven by a JSON config file.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/dnf2ltl.hpp"
#include "forge/error.hpp"
#include "forge/formula.hpp"

namespace forge::harness {

// A failure inside one pipeline stage; what() starts with "[stage]".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

struct OracleSource {
  std::string policy = "farsighted";
  std::size_t n = 100;
  std::uint64_t seed = 0;
  // Needed by the "formula" policy.
  std::optional<ltl::ProceduralFormula> formula;
};

struct PipelineConfig {
  std::string env = "mouselab3";
  nlohmann::json env_params = nlohmann::json::object();
  ltl::DnfFormula dnf;
  // Recorded demonstrations; when absent the oracle generates them.
  std::optional<std::string> trajectories;
  OracleSource oracle;
  std::vector<ltl::PredicateRef> allowed;
  std::vector<ltl::PredicateRef> redundant;
  std::optional<std::string> dictionary;
  double epsilon = 1e-6;
  std::optional<std::string> formula_out;
  std::optional<std::string> instructions_out;
  std::optional<std::string> report_out;
};

// Config document:
//   {"format_version": 1, "env": "mouselab3", "env_params": {},
//    "dnf": "<path>" | {"text": "..."},
//    "trajectories": "<path>" | {"oracle": "farsighted", "n": 100, "seed": 0,
//                                "formula": "<path>"},
//    "allowed": [...], "redundant": [...], "dictionary": "<path>",
//    "epsilon": 1e-6,
//    "outputs": {"formula": "<path>", "instructions": "<path>", "report": "<path>"}}
// Relative paths resolve against the config file's directory.
PipelineConfig pipeline_config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");
PipelineConfig load_pipeline_config(const std::string& path);

struct PipelineResult {
  ltl::ProceduralFormula formula;
  std::string formula_text;
  std::string instructions;  // empty without a dictionary
  nlohmann::json report;
  std::vector<std::string> warnings;
};

// Deterministic for fixed inputs. Writes the configured outputs.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace forge::harness
