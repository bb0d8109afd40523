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

// Demonstration trajectories and their line-delimited persistence format.

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/env.hpp"

namespace forge::env {

// A sequence of meta-actions taken on one ground truth. States are not
// stored; they are recovered by replaying the actions through step().
struct Trajectory {
  std::string id;
  std::string env;
  std::uint64_t seed = 0;
  GroundTruth ground_truth;
  std::vector<MetaAction> actions;
  // Final route or plan (a start-to-leaf path), when one was recorded.
  std::optional<std::vector<NodeId>> choice;
  // Wall-clock milliseconds per action; empty for simulated trajectories.
  std::vector<std::optional<std::int64_t>> timestamps;

  std::size_t clicks() const;
  bool ends_with_terminate() const {
    return !actions.empty() && actions.back().is_terminate();
  }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct StateActionPair {
  BeliefState belief;
  MetaAction action;
};

// Replays the trajectory. A trajectory that stopped without TERMINATE
// (budget exhausted) gets one appended, so the result always ends with a
// TERMINATE pair. Throws InvalidArgument when an action is illegal or the
// ground truth does not fit the spec.
std::vector<StateActionPair> replay(const Trajectory& t, const EnvSpec& spec);

// Belief after all recorded actions.
BeliefState final_belief(const Trajectory& t, const EnvSpec& spec);

// One header record followed by one event record per action:
//   {"type":"trajectory","format_version":1,"id":..,"env":..,"seed":..,
//    "ground_truth":[..],"choice":[..]|null}
//   {"type":"event","trajectory":..,"t":0,"ts":null,"action":"click",
//    "node":3,"value":-4}
void write_jsonl(std::ostream& out, const std::vector<Trajectory>& trajs);
std::vector<Trajectory> read_jsonl(std::istream& in);

void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajs);
std::vector<Trajectory> load_trajectories(const std::string& path);

}  // namespace forge::env
