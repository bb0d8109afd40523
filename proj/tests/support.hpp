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

// Shared fixtures for the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "forge/env.hpp"
#include "forge/formula.hpp"

namespace forge::testing {

inline std::string data_path(const std::string& rel) { return std::string(FORGE_TEST_DATA_DIR) + "/" + rel; }

// A fresh, empty directory under the system temp dir.
inline std::string scratch_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("forge-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

// A tree with the given branching per level; node rewards are uniform
// over `support[depth - 1]`.
inline env::EnvSpec tree_spec(const std::vector<std::size_t>& branching,
                              const std::vector<std::vector<double>>& support, double click_cost = 0.0,
                              std::optional<int> budget = std::nullopt) {
  env::EnvDefinition d;
  d.name = "tree";
  d.kind = env::TaskKind::kTree;
  d.click_cost = click_cost;
  d.click_budget = budget;
  d.nodes.push_back({"start", env::RewardModel{env::DiscreteUniform{{0.0}}}});
  std::vector<env::NodeId> frontier = {0};
  for (std::size_t level = 0; level < branching.size(); ++level) {
    std::vector<env::NodeId> next;
    for (auto parent : frontier) {
      for (std::size_t b = 0; b < branching[level]; ++b) {
        const env::NodeId id = d.nodes.size();
        d.nodes.push_back({"n" + std::to_string(id), env::RewardModel{env::DiscreteUniform{support[level]}}});
        d.edges.emplace_back(parent, id);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  return env::EnvSpec(std::move(d));
}

// Random DAG-free trees with at most `max_nodes` nodes (start included)
// and depth at most 3.
inline env::EnvSpec random_tree(std::mt19937_64& rng, std::size_t max_nodes) {
  env::EnvDefinition d;
  d.name = "tree";
  d.nodes.push_back({"start", env::RewardModel{env::DiscreteUniform{{0.0}}}});
  std::vector<int> depth = {0};
  std::uniform_int_distribution<std::size_t> count(2, max_nodes);
  const std::size_t n = count(rng);
  for (std::size_t id = 1; id < n; ++id) {
    std::vector<env::NodeId> parents;
    for (env::NodeId p = 0; p < id; ++p) {
      if (depth[p] < 3) parents.push_back(p);
    }
    const auto parent = parents[std::uniform_int_distribution<std::size_t>(0, parents.size() - 1)(rng)];
    depth.push_back(depth[parent] + 1);
    const double s = 2.0 * depth.back();
    d.nodes.push_back({"n" + std::to_string(id), env::RewardModel{env::DiscreteUniform{{-s, 0.0, s}}}});
    d.edges.emplace_back(parent, id);
  }
  return env::EnvSpec(std::move(d));
}

}  // namespace forge::testing
