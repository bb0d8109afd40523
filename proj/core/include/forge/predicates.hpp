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

// Belief-state predicates h(s, a) -> {0, 1} and their evaluation over the
// rows of a demonstration set.
//
// Every predicate is evaluated for all actions of a belief at once. The
// result is an ActionMask with one bit per node (a click on that node) and
// kTerminateBit for TERMINATE. Node predicates are false on TERMINATE;
// state predicates do not depend on the action.

#include <bitset>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "forge/env.hpp"
#include "forge/formula.hpp"
#include "forge/formula_text.hpp"
#include "forge/trajectory.hpp"

namespace forge::pred {

using env::BeliefState;
using env::EnvSpec;
using env::MetaAction;
using env::NodeId;
using ltl::PredicateRef;

inline constexpr std::size_t kMaxNodes = 127;
inline constexpr std::size_t kTerminateBit = 127;
using ActionMask = std::bitset<128>;

std::size_t action_bit(const MetaAction& a);
MetaAction action_of_bit(std::size_t bit);
// Legal actions of the belief, TERMINATE included unless terminated.
ActionMask legal_mask(const BeliefState& b, const EnvSpec& spec);
// Every action slot of the spec: its nodes plus TERMINATE.
ActionMask universe_mask(const EnvSpec& spec);

class Registry {
 public:
  using NodeFn = std::function<bool(const EnvSpec&, const BeliefState&, NodeId)>;
  using StateFn = std::function<bool(const EnvSpec&, const BeliefState&)>;
  enum class Kind { kNode, kState, kAmong, kNot, kConstant };

  // A registry holding the builtin catalog: is_observed, has_largest_depth,
  // is_leaf, are_leaves_observed, is_previous_observed_max, among, not,
  // TRUE, FALSE.
  Registry();

  static const Registry& builtin();

  // Registering an existing name replaces it.
  void add_node_predicate(const std::string& name, NodeFn fn);
  void add_state_predicate(const std::string& name, StateFn fn);

  bool contains(const std::string& name) const;
  // Throws UnknownPredicate.
  Kind kind(const std::string& name) const;
  std::vector<std::string> names() const;

  // Throws UnknownPredicate or ArityMismatch.
  void validate(const PredicateRef& p) const;
  ltl::RefValidator validator() const;

  ActionMask mask(const PredicateRef& p, const EnvSpec& spec, const BeliefState& b) const;
  bool eval(const PredicateRef& p, const EnvSpec& spec, const BeliefState& b,
            const MetaAction& a) const;
  // Conditions are state properties: evaluated with the TERMINATE action.
  bool holds(const ltl::Condition& c, const EnvSpec& spec, const BeliefState& b) const;
  ActionMask body_mask(const ltl::Conjunction& c, const EnvSpec& spec, const BeliefState& b) const;

 private:
  struct Entry {
    Kind kind;
    NodeFn node;
    StateFn state;
  };
  const Entry& entry(const std::string& name) const;

  std::map<std::string, Entry> entries_;
};

bool eval_predicate(const PredicateRef& p, const BeliefState& b, const MetaAction& a,
                    const EnvSpec& spec, const Registry& reg = Registry::builtin());

// Rows of a demonstration set with per-predicate masks computed on demand.
// Not thread-safe: lookups fill an internal cache.
class RowTable {
 public:
  struct Row {
    std::size_t trajectory;
    std::size_t step;
    BeliefState belief;
    MetaAction action;
    ActionMask legal;
  };

  RowTable(const EnvSpec& spec, const std::vector<env::Trajectory>& trajs,
           const Registry& reg = Registry::builtin());

  const EnvSpec& spec() const { return *spec_; }
  const Registry& registry() const { return *reg_; }
  std::size_t size() const { return rows_.size(); }
  const Row& row(std::size_t i) const { return rows_[i]; }
  std::size_t trajectory_count() const { return spans_.size(); }
  // Row range [first, last) of trajectory t; the last row is its TERMINATE.
  std::pair<std::size_t, std::size_t> span(std::size_t t) const { return spans_[t]; }

  const ActionMask& mask(std::size_t row, const PredicateRef& p) const;
  ActionMask body_mask(std::size_t row, const ltl::Conjunction& c) const;
  bool literal(std::size_t row, const ltl::Literal& l) const;
  // Truth of the conjunction on the row's own action.
  bool satisfies(std::size_t row, const ltl::Conjunction& c) const;
  bool holds(std::size_t row, const PredicateRef& p) const;
  bool holds(std::size_t row, const ltl::Condition& c) const;

 private:
  std::size_t intern(const PredicateRef& p) const;

  const EnvSpec* spec_;
  const Registry* reg_;
  std::vector<Row> rows_;
  std::vector<std::pair<std::size_t, std::size_t>> spans_;
  mutable std::map<PredicateRef, std::size_t> ids_;
  // cache_[id][row]; `known_` marks computed entries.
  mutable std::vector<std::vector<ActionMask>> cache_;
  mutable std::vector<std::vector<bool>> known_;
};

struct TruthMatrix {
  struct RowKey {
    std::size_t trajectory;
    std::size_t step;
  };
  std::vector<RowKey> rows;
  std::vector<PredicateRef> columns;
  // entries[row][column]
  std::vector<std::vector<bool>> entries;
};

// One row per state-action pair of every trajectory, the appended
// TERMINATE of budget-exhausted trajectories included.
TruthMatrix truth_matrix(const std::vector<env::Trajectory>& trajs, const std::vector<PredicateRef>& catalog,
                         const EnvSpec& spec, const Registry& reg = Registry::builtin());

}  // namespace forge::pred
