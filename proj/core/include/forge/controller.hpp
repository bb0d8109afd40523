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

// Executable strategies: a controller that runs any procedural formula,
// a reference far-sighted policy, seeded rollouts and an exact metalevel
// solver for small trees.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <string>
#include <vector>

#include "forge/env.hpp"
#include "forge/formula.hpp"
#include "forge/predicates.hpp"
#include "forge/trajectory.hpp"

namespace forge::oracle {

using env::BeliefState;
using env::EnvSpec;
using env::MetaAction;
using env::Trajectory;
using pred::ActionMask;

// What a controller needs to know about one belief state.
class EvalContext {
 public:
  virtual ~EvalContext() = default;
  virtual ActionMask legal() const = 0;
  virtual ActionMask body(const ltl::Conjunction& c) const = 0;
  virtual bool holds(const ltl::Condition& c) const = 0;
};

class LiveContext final : public EvalContext {
 public:
  LiveContext(const EnvSpec& spec, const BeliefState& b, const pred::Registry& reg)
      : spec_(spec), belief_(b), reg_(reg) {}
  ActionMask legal() const override { return pred::legal_mask(belief_, spec_); }
  ActionMask body(const ltl::Conjunction& c) const override { return reg_.body_mask(c, spec_, belief_); }
  bool holds(const ltl::Condition& c) const override { return reg_.holds(c, spec_, belief_); }

 private:
  const EnvSpec& spec_;
  const BeliefState& belief_;
  const pred::Registry& reg_;
};

class RowContext final : public EvalContext {
 public:
  RowContext(const pred::RowTable& table, std::size_t row) : table_(table), row_(row) {}
  ActionMask legal() const override { return table_.row(row_).legal; }
  ActionMask body(const ltl::Conjunction& c) const override { return table_.body_mask(row_, c); }
  bool holds(const ltl::Condition& c) const override { return table_.holds(row_, c); }

 private:
  const pred::RowTable& table_;
  std::size_t row_;
};

// Moves `cursor` to the step that governs the belief and returns the
// actions that step allows. UNLESS holding, or running past the last step
// without a LOOP, leaves TERMINATE as the only option. An UNTIL step
// advances once its condition holds; any step advances when its body
// admits no legal action. A LOOP jumps back at most once per call.
ActionMask resolve(const ltl::ProceduralFormula& f, std::size_t& cursor, const EvalContext& ctx);

class FormulaController {
 public:
  FormulaController(ltl::ProceduralFormula f, const EnvSpec& spec,
                    const pred::Registry& reg = pred::Registry::builtin());

  const ltl::ProceduralFormula& formula() const { return formula_; }
  std::size_t cursor() const { return cursor_; }
  void reset() { cursor_ = 0; }

  // Resolves the cursor against `b` and returns the eligible actions.
  ActionMask eligible(const BeliefState& b);
  // A uniformly random eligible action.
  MetaAction act(const BeliefState& b, std::mt19937_64& rng);

 private:
  ltl::ProceduralFormula formula_;
  const EnvSpec* spec_;
  const pred::Registry* reg_;
  std::size_t cursor_ = 0;
};

// Beliefs visited by the belief's own history, from the empty belief up
// to and including `b`.
std::vector<BeliefState> history_beliefs(const BeliefState& b, const EnvSpec& spec);

// True iff a controller synchronized to the belief's history could emit
// `a` next. An illegal action is never consistent.
bool consistency(const MetaAction& a, const BeliefState& b, const ltl::ProceduralFormula& f,
                 const EnvSpec& spec, const pred::Registry& reg = pred::Registry::builtin());

// Per-action consistency of a whole trajectory, the final TERMINATE
// included when present.
std::vector<bool> consistency_trace(const Trajectory& t, const ltl::ProceduralFormula& f,
                                    const EnvSpec& spec,
                                    const pred::Registry& reg = pred::Registry::builtin());

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual void reset() {}
  virtual MetaAction act(const BeliefState& b, const EnvSpec& spec, std::mt19937_64& rng) = 0;
};

class FormulaPolicy final : public Policy {
 public:
  FormulaPolicy(ltl::ProceduralFormula f, const EnvSpec& spec,
                const pred::Registry& reg = pred::Registry::builtin())
      : ctrl_(std::move(f), spec, reg) {}
  std::string name() const override { return "formula"; }
  void reset() override { ctrl_.reset(); }
  MetaAction act(const BeliefState& b, const EnvSpec&, std::mt19937_64& rng) override {
    return ctrl_.act(b, rng);
  }

 private:
  FormulaController ctrl_;
};

// Clicks unrevealed far-sighted nodes in random order and stops once one
// reveals its best possible value or none is left.
class FarsightedPolicy final : public Policy {
 public:
  std::string name() const override { return "farsighted"; }
  MetaAction act(const BeliefState& b, const EnvSpec& spec, std::mt19937_64& rng) override;
};

// Uniform over legal actions; TERMINATE with probability `stop` whenever a
// click is available.
class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(double stop = 0.2) : stop_(stop) {}
  std::string name() const override { return "random"; }
  MetaAction act(const BeliefState& b, const EnvSpec& spec, std::mt19937_64& rng) override;

 private:
  double stop_;
};

// Seed of the i-th ground truth and policy stream of a rollout batch.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

// One trajectory on a fixed ground truth. Road trip and mortgage episodes
// end with the best path under the final belief as their choice.
Trajectory run_episode(Policy& policy, const EnvSpec& spec, const env::GroundTruth& gt,
                       std::mt19937_64& rng);

// n independent trajectories; ground truth i is sampled with
// derive_seed(seed, i, 0) and the policy draws from derive_seed(seed, i, 1).
// Throws InvalidArgument for n = 0.
std::vector<Trajectory> rollout(Policy& policy, const EnvSpec& spec, std::size_t n, std::uint64_t seed);

// Builds a policy by name: "farsighted", "random" or "formula" (which
// needs `formula`).
std::unique_ptr<Policy> make_policy(const std::string& name, const EnvSpec& spec,
                                    const std::optional<ltl::ProceduralFormula>& formula = std::nullopt);

// Exact Bayes-optimal metalevel policy by backward induction over belief
// states. Only for discrete reward models with at most 16 clickable nodes.
// Stopping collects the best path by revealed values, unrevealed nodes at
// their expected value.
class MetalevelSolver {
 public:
  explicit MetalevelSolver(const EnvSpec& spec);

  double value(const BeliefState& b);
  double q_value(const BeliefState& b, const MetaAction& a);
  std::vector<MetaAction> optimal_actions(const BeliefState& b, double tol = 1e-9);

 private:
  double stop_value(const std::vector<int>& code) const;
  double value(std::vector<int>& code, int clicks);
  std::uint64_t key(const std::vector<int>& code) const;
  std::vector<int> encode(const BeliefState& b) const;

  const EnvSpec& spec_;
  std::vector<std::vector<double>> support_;  // per node; empty for the start
  std::vector<std::uint64_t> radix_;
  std::unordered_map<std::uint64_t, double> memo_;
};

}  // namespace forge::oracle
