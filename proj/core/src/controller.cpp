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

#include "forge/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "forge/error.hpp"

namespace forge::oracle {

using pred::kTerminateBit;

ActionMask resolve(const ltl::ProceduralFormula& f, std::size_t& cursor, const EvalContext& ctx) {
  ActionMask legal = ctx.legal();
  ActionMask stop;
  if (legal.test(kTerminateBit)) stop.set(kTerminateBit);
  bool looped = false;
  for (;;) {
    if (cursor >= f.steps.size()) {
      if (!f.loop) return stop;
      if (looped || (f.loop->unless && ctx.holds(*f.loop->unless))) return stop;
      looped = true;
      cursor = f.loop->target;
      continue;
    }
    const auto& step = f.steps[cursor];
    if (step.unless && ctx.holds(*step.unless)) return stop;
    if (const auto* until = step.until(); until && ctx.holds(*until)) {
      ++cursor;
      continue;
    }
    const ActionMask eligible = legal & ctx.body(step.body);
    if (eligible.none()) {
      ++cursor;
      continue;
    }
    return eligible;
  }
}

FormulaController::FormulaController(ltl::ProceduralFormula f, const EnvSpec& spec,
                                     const pred::Registry& reg)
    : formula_(std::move(f)), spec_(&spec), reg_(&reg) {
  if (!ltl::grammar_check(formula_)) throw InvalidArgument("formula does not follow the procedural grammar");
}

ActionMask FormulaController::eligible(const BeliefState& b) {
  return resolve(formula_, cursor_, LiveContext(*spec_, b, *reg_));
}

namespace {

MetaAction pick(const ActionMask& m, std::mt19937_64& rng) {
  if (m.none()) return MetaAction::Terminate();
  std::uniform_int_distribution<std::size_t> dist(0, m.count() - 1);
  std::size_t k = dist(rng);
  for (std::size_t bit = 0; bit < m.size(); ++bit) {
    if (m.test(bit) && k-- == 0) return pred::action_of_bit(bit);
  }
  return MetaAction::Terminate();
}

}  // namespace

MetaAction FormulaController::act(const BeliefState& b, std::mt19937_64& rng) {
  return pick(eligible(b), rng);
}

std::vector<BeliefState> history_beliefs(const BeliefState& b, const EnvSpec& spec) {
  env::GroundTruth gt;
  gt.values.assign(spec.size(), 0.0);
  for (env::NodeId n = 0; n < spec.size(); ++n) gt.values[n] = b.value(n).value_or(0.0);
  std::vector<BeliefState> out = {BeliefState(spec)};
  for (const auto& a : b.history()) out.push_back(env::step(out.back(), a, gt, spec).belief);
  return out;
}

bool consistency(const MetaAction& a, const BeliefState& b, const ltl::ProceduralFormula& f,
                 const EnvSpec& spec, const pred::Registry& reg) {
  if (!env::is_legal(b, a, spec)) return false;
  FormulaController ctrl(f, spec, reg);
  const auto beliefs = history_beliefs(b, spec);
  for (std::size_t i = 0; i + 1 < beliefs.size(); ++i) ctrl.eligible(beliefs[i]);
  return ctrl.eligible(b).test(pred::action_bit(a));
}

std::vector<bool> consistency_trace(const Trajectory& t, const ltl::ProceduralFormula& f,
                                    const EnvSpec& spec, const pred::Registry& reg) {
  FormulaController ctrl(f, spec, reg);
  std::vector<bool> out;
  BeliefState b(spec);
  for (const auto& a : t.actions) {
    out.push_back(ctrl.eligible(b).test(pred::action_bit(a)));
    b = env::step(b, a, t.ground_truth, spec).belief;
  }
  return out;
}

MetaAction FarsightedPolicy::act(const BeliefState& b, const EnvSpec& spec, std::mt19937_64& rng) {
  if (const auto last = b.last_click(); last && *b.value(*last) >= spec.support_max(*last)) {
    return MetaAction::Terminate();
  }
  std::vector<env::NodeId> options;
  for (env::NodeId n : env::legal_clicks(b, spec)) {
    if (spec.is_farsighted(n)) options.push_back(n);
  }
  if (options.empty()) return MetaAction::Terminate();
  std::uniform_int_distribution<std::size_t> dist(0, options.size() - 1);
  return MetaAction::Click(options[dist(rng)]);
}

MetaAction RandomPolicy::act(const BeliefState& b, const EnvSpec& spec, std::mt19937_64& rng) {
  const auto options = env::legal_clicks(b, spec);
  if (options.empty() || std::bernoulli_distribution(stop_)(rng)) return MetaAction::Terminate();
  std::uniform_int_distribution<std::size_t> dist(0, options.size() - 1);
  return MetaAction::Click(options[dist(rng)]);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
  // splitmix64 over the combined inputs
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index * 2 + stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Trajectory run_episode(Policy& policy, const EnvSpec& spec, const env::GroundTruth& gt,
                       std::mt19937_64& rng) {
  policy.reset();
  Trajectory t;
  t.env = spec.name();
  t.ground_truth = gt;
  BeliefState b(spec);
  // A policy that never stops still ends once every node is revealed.
  const std::size_t limit = spec.clickable().size() + 1;
  while (!b.terminated() && t.actions.size() < limit) {
    MetaAction a = policy.act(b, spec, rng);
    if (!env::is_legal(b, a, spec)) a = MetaAction::Terminate();
    t.actions.push_back(a);
    b = env::step(b, a, gt, spec).belief;
  }
  if (spec.kind() != env::TaskKind::kTree) t.choice = env::best_choice(b, spec);
  return t;
}

std::vector<Trajectory> rollout(Policy& policy, const EnvSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("rollout needs at least one trajectory");
  std::vector<Trajectory> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t gt_seed = derive_seed(seed, i, 0);
    std::mt19937_64 rng(derive_seed(seed, i, 1));
    Trajectory t = run_episode(policy, spec, env::sample_ground_truth(spec, gt_seed), rng);
    t.id = policy.name() + "-" + std::to_string(i);
    t.seed = gt_seed;
    out.push_back(std::move(t));
  }
  return out;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const EnvSpec& spec,
                                    const std::optional<ltl::ProceduralFormula>& formula) {
  if (name == "farsighted") return std::make_unique<FarsightedPolicy>();
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (name == "formula") {
    if (!formula) throw InvalidArgument("the formula policy needs a formula");
    return std::make_unique<FormulaPolicy>(*formula, spec);
  }
  throw InvalidArgument("unknown policy '" + name + "'");
}

// ---------------------------------------------------------------------------
// MetalevelSolver

MetalevelSolver::MetalevelSolver(const EnvSpec& spec) : spec_(spec) {
  if (spec.clickable().size() > 16) throw InvalidArgument("metalevel solver supports at most 16 clickable nodes");
  if (spec.forced()) throw InvalidArgument("metalevel solver does not support forced values");
  support_.resize(spec.size());
  radix_.resize(spec.size(), 1);
  std::uint64_t r = 1;
  for (env::NodeId n = 0; n < spec.size(); ++n) {
    radix_[n] = r;
    if (n == spec.start()) continue;
    const auto& reward = spec.node(n).reward;
    const auto* d = std::get_if<env::DiscreteUniform>(&reward.dist);
    if (!d) throw InvalidArgument("metalevel solver needs discrete reward distributions");
    for (double v : d->support) support_[n].push_back(reward.sign * v);
    r *= support_[n].size() + 1;
  }
}

std::uint64_t MetalevelSolver::key(const std::vector<int>& code) const {
  std::uint64_t k = 0;
  for (env::NodeId n = 0; n < code.size(); ++n) k += radix_[n] * static_cast<std::uint64_t>(code[n] + 1);
  return k;
}

std::vector<int> MetalevelSolver::encode(const BeliefState& b) const {
  std::vector<int> code(spec_.size(), -1);
  for (env::NodeId n = 0; n < spec_.size(); ++n) {
    if (!b.is_revealed(n)) continue;
    const auto& s = support_[n];
    auto it = std::find(s.begin(), s.end(), *b.value(n));
    if (it == s.end()) throw InvalidArgument("revealed value outside the node's support");
    code[n] = static_cast<int>(it - s.begin());
  }
  return code;
}

double MetalevelSolver::stop_value(const std::vector<int>& code) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& path : spec_.paths()) {
    double sum = 0.0;
    for (env::NodeId n : path) {
      sum += spec_.depth_weight(spec_.depth(n)) *
             (code[n] >= 0 ? support_[n][code[n]] : spec_.expected_reward(n));
    }
    best = std::max(best, sum);
  }
  return best;
}

double MetalevelSolver::value(std::vector<int>& code, int clicks) {
  const std::uint64_t k = key(code);
  if (auto it = memo_.find(k); it != memo_.end()) return it->second;
  double best = stop_value(code);
  const bool budget_left = !spec_.click_budget() || clicks < *spec_.click_budget();
  if (budget_left) {
    for (env::NodeId n : spec_.clickable()) {
      if (code[n] >= 0) continue;
      double q = -spec_.click_cost();
      const double p = 1.0 / static_cast<double>(support_[n].size());
      for (std::size_t v = 0; v < support_[n].size(); ++v) {
        code[n] = static_cast<int>(v);
        q += p * value(code, clicks + 1);
      }
      code[n] = -1;
      best = std::max(best, q);
    }
  }
  memo_.emplace(k, best);
  return best;
}

double MetalevelSolver::value(const BeliefState& b) {
  auto code = encode(b);
  return value(code, static_cast<int>(b.clicks()));
}

double MetalevelSolver::q_value(const BeliefState& b, const MetaAction& a) {
  auto code = encode(b);
  if (a.is_terminate()) return stop_value(code);
  if (!env::is_legal(b, a, spec_)) throw IllegalAction("action is not legal in this belief");
  const int clicks = static_cast<int>(b.clicks()) + 1;
  double q = -spec_.click_cost();
  const double p = 1.0 / static_cast<double>(support_[a.node].size());
  for (std::size_t v = 0; v < support_[a.node].size(); ++v) {
    code[a.node] = static_cast<int>(v);
    q += p * value(code, clicks);
  }
  return q;
}

std::vector<MetaAction> MetalevelSolver::optimal_actions(const BeliefState& b, double tol) {
  std::vector<std::pair<MetaAction, double>> qs = {{MetaAction::Terminate(), q_value(b, MetaAction::Terminate())}};
  for (env::NodeId n : env::legal_clicks(b, spec_)) {
    qs.emplace_back(MetaAction::Click(n), q_value(b, MetaAction::Click(n)));
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [_, q] : qs) best = std::max(best, q);
  std::vector<MetaAction> out;
  for (const auto& [a, q] : qs) {
    if (q >= best - tol) out.push_back(a);
  }
  return out;
}

}  // namespace forge::oracle
