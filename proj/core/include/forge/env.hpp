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

// Planning environments as belief-state MDPs over information-acquisition
// actions: clicking a node reveals its hidden reward, TERMINATE stops.
// Costs are stored as negative rewards throughout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge::env {

using NodeId = std::size_t;

struct DiscreteUniform {
  std::vector<double> support;
};

// Normal(mean, sd) conditioned on x >= min.
struct TruncatedNormal {
  double mean = 0.0;
  double sd = 1.0;
  double min = 0.0;
};

// monostate: the node carries no reward (the start node).
using Distribution = std::variant<std::monostate, DiscreteUniform, TruncatedNormal>;

// reward = sign * sample. Mortgage rates are sampled as positive percents
// and stored as negative rewards.
struct RewardModel {
  Distribution dist;
  double sign = 1.0;
};

enum class TaskKind { kTree, kRoadTrip, kMortgage };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& s);

// Exactly one node of `nodes` is overridden with `value` in every ground
// truth (the Road Trip $20 airport).
struct ForcedValue {
  std::vector<NodeId> nodes;
  double value = 0.0;
};

struct Node {
  std::string label;
  RewardModel reward;
};

// Raw description of an environment; EnvSpec validates it.
struct EnvDefinition {
  std::string name;
  TaskKind kind = TaskKind::kTree;
  std::vector<Node> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId start = 0;
  double click_cost = 0.0;
  std::optional<int> click_budget;
  std::optional<ForcedValue> forced;
  // Far-sighted node set; empty means the max-depth nodes.
  std::vector<NodeId> farsighted;
  // Per-depth weight of a node's reward in path totals (depth 1 first);
  // empty means all ones. Mortgage period lengths live here.
  std::vector<double> depth_weights;
  nlohmann::json params = nlohmann::json::object();
};

class EnvSpec {
 public:
  // Throws InvalidArgument on cycles, multiple roots, unreachable nodes or
  // unspecified distributions.
  explicit EnvSpec(EnvDefinition def);

  const std::string& name() const { return def_.name; }
  TaskKind kind() const { return def_.kind; }
  const EnvDefinition& definition() const { return def_; }

  std::size_t size() const { return def_.nodes.size(); }
  NodeId start() const { return def_.start; }
  const Node& node(NodeId n) const { return def_.nodes.at(n); }
  const std::vector<NodeId>& children(NodeId n) const { return children_.at(n); }
  // Longest-path distance from the start node.
  int depth(NodeId n) const { return depth_.at(n); }
  int max_depth() const { return max_depth_; }
  bool is_leaf(NodeId n) const { return children_.at(n).empty(); }
  const std::vector<NodeId>& farsighted() const { return farsighted_; }
  bool is_farsighted(NodeId n) const;
  // Clickable nodes in id order (every node except the start).
  const std::vector<NodeId>& clickable() const { return clickable_; }
  // All start-to-leaf paths, start node excluded.
  const std::vector<std::vector<NodeId>>& paths() const { return paths_; }

  double click_cost() const { return def_.click_cost; }
  std::optional<int> click_budget() const { return def_.click_budget; }
  const std::optional<ForcedValue>& forced() const { return def_.forced; }
  double depth_weight(int depth) const;

  // Largest reward the node can reveal; +inf when unbounded.
  double support_max(NodeId n) const;
  double expected_reward(NodeId n) const;

 private:
  EnvDefinition def_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<int> depth_;
  int max_depth_ = 0;
  std::vector<NodeId> farsighted_;
  std::vector<NodeId> clickable_;
  std::vector<std::vector<NodeId>> paths_;
};

struct GroundTruth {
  std::vector<double> values;  // per node; 0 for the start node

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct MetaAction {
  enum class Kind { kClick, kTerminate };
  Kind kind = Kind::kTerminate;
  NodeId node = 0;

  static MetaAction Click(NodeId n) { return {Kind::kClick, n}; }
  static MetaAction Terminate() { return {Kind::kTerminate, 0}; }
  bool is_click() const { return kind == Kind::kClick; }
  bool is_terminate() const { return kind == Kind::kTerminate; }

  friend bool operator==(const MetaAction&, const MetaAction&) = default;
};

std::string to_string(const MetaAction& a);

struct StepResult;

class BeliefState {
 public:
  BeliefState() = default;
  explicit BeliefState(const EnvSpec& spec) : revealed_(spec.size()) {}

  const std::vector<std::optional<double>>& revealed() const { return revealed_; }
  bool is_revealed(NodeId n) const { return n < revealed_.size() && revealed_[n].has_value(); }
  std::optional<double> value(NodeId n) const { return revealed_.at(n); }
  const std::vector<MetaAction>& history() const { return history_; }
  bool terminated() const { return terminated_; }
  std::size_t clicks() const;
  std::size_t revealed_count() const;
  // Node of the most recent click, if any.
  std::optional<NodeId> last_click() const;

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  friend StepResult step(const BeliefState&, const MetaAction&, const GroundTruth&,
                         const EnvSpec&);

  std::vector<std::optional<double>> revealed_;
  std::vector<MetaAction> history_;
  bool terminated_ = false;
};

struct StepResult {
  BeliefState belief;
  double cost = 0.0;
};

// Empty when legal, otherwise the reason ("already revealed", "budget
// exhausted", ...).
std::optional<std::string> illegal_reason(const BeliefState& b, const MetaAction& a,
                                          const EnvSpec& spec);
bool is_legal(const BeliefState& b, const MetaAction& a, const EnvSpec& spec);
std::vector<NodeId> legal_clicks(const BeliefState& b, const EnvSpec& spec);

// Throws IllegalAction for re-clicks, clicks past the budget and actions
// after termination.
StepResult step(const BeliefState& b, const MetaAction& a, const GroundTruth& gt,
                const EnvSpec& spec);

// Names: mouselab3, roadtrip, mortgage. `params` overrides defaults.
EnvSpec builtin_spec(const std::string& name, const nlohmann::json& params = nlohmann::json::object());

GroundTruth sample_ground_truth(const EnvSpec& spec, std::uint64_t seed);

// Best path by revealed rewards (unrevealed count as zero) minus
// click_cost per click. Throws InvalidArgument when the spec has no paths.
double expected_score(const BeliefState& b, const EnvSpec& spec);

// Weighted percent-years of a plan: sum of weight_i * rate_i.
double mortgage_total_cost(std::span<const double> rates, std::span<const double> weights);
inline double mortgage_total_cost(std::span<const double> rates) {
  static constexpr double kWeights[] = {1.0, 5.0, 25.0};
  return mortgage_total_cost(rates, kWeights);
}

// The path a planner would pick from the current belief: maximum weighted
// sum of revealed rewards, unrevealed nodes at their expected reward.
std::vector<NodeId> best_choice(const BeliefState& b, const EnvSpec& spec);

// Structured config documents ("format_version": 1).
nlohmann::json to_json(const EnvSpec& spec);
EnvSpec spec_from_json(const nlohmann::json& j);
// A builtin name, or a path to a JSON spec file.
EnvSpec load_spec(const std::string& name_or_path, const nlohmann::json& params = nlohmann::json::object());

}  // namespace forge::env
