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

#include <random>

#include <gtest/gtest.h>

#include "forge/controller.hpp"
#include "forge/error.hpp"
#include "forge/formula_text.hpp"
#include "forge/predicates.hpp"
#include "support.hpp"

namespace {

using namespace forge::pred;
using forge::env::GroundTruth;
using forge::env::sample_ground_truth;
using forge::env::step;

const PredicateRef kObserved("is_observed");
const PredicateRef kDeepest("has_largest_depth");
const PredicateRef kAmong("among", {PredicateRef("not", {kObserved}), kDeepest});

BeliefState reveal(const EnvSpec& spec, const GroundTruth& gt, std::uint32_t subset) {
  BeliefState b(spec);
  for (std::size_t i = 0; i < spec.clickable().size(); ++i) {
    if (subset & (1u << i)) b = step(b, MetaAction::Click(spec.clickable()[i]), gt, spec).belief;
  }
  return b;
}

TEST(Predicates, AmongMatchesUnobservedDeepestOnRandomTrees) {
  std::mt19937_64 rng(3);
  const auto& reg = Registry::builtin();
  for (int tree = 0; tree < 20; ++tree) {
    const auto spec = forge::testing::random_tree(rng, 13);
    const auto gt = sample_ground_truth(spec, tree);
    const std::uint32_t subsets = 1u << spec.clickable().size();
    for (std::uint32_t s = 0; s < subsets; ++s) {
      const auto b = reveal(spec, gt, s);
      ActionMask expected;
      for (auto n : spec.clickable()) {
        if (!b.is_revealed(n) && spec.depth(n) == spec.max_depth()) expected.set(action_bit(MetaAction::Click(n)));
      }
      ASSERT_EQ(reg.mask(kAmong, spec, b), expected) << "tree " << tree << " subset " << s;
      ASSERT_FALSE(reg.eval(kAmong, spec, b, MetaAction::Terminate()));
    }
  }
}

TEST(Predicates, NodePredicatesAreFalseOnTerminate) {
  const auto spec = forge::env::builtin_spec("mouselab3");
  const BeliefState b(spec);
  const auto& reg = Registry::builtin();
  for (const char* name : {"is_observed", "has_largest_depth", "is_leaf"}) {
    EXPECT_FALSE(reg.eval(PredicateRef(name), spec, b, MetaAction::Terminate())) << name;
  }
  EXPECT_FALSE(reg.eval(kObserved, spec, b, MetaAction::Click(4)));
  EXPECT_TRUE(reg.eval(kDeepest, spec, b, MetaAction::Click(spec.farsighted().front())));
  EXPECT_FALSE(reg.eval(kDeepest, spec, b, MetaAction::Click(1)));
}

TEST(Predicates, StatePredicatesIgnoreTheAction) {
  const auto spec = forge::env::builtin_spec("mouselab3");
  const auto gt = sample_ground_truth(spec, 0);
  const auto& reg = Registry::builtin();
  for (std::uint32_t s = 0; s < 64; ++s) {
    const auto b = reveal(spec, gt, s * 67);
    for (const char* name : {"are_leaves_observed", "is_previous_observed_max"}) {
      const auto m = reg.mask(PredicateRef(name), spec, b);
      ASSERT_TRUE(m.none() || m == universe_mask(spec)) << name;
      const bool v = reg.eval(PredicateRef(name), spec, b, MetaAction::Terminate());
      for (auto n : spec.clickable()) ASSERT_EQ(reg.eval(PredicateRef(name), spec, b, MetaAction::Click(n)), v);
    }
  }
}

TEST(Predicates, PreviousObservedMaxComparesWithSupport) {
  const auto spec = forge::env::builtin_spec("mouselab3");
  const auto& reg = Registry::builtin();
  const PredicateRef p("is_previous_observed_max");
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto gt = sample_ground_truth(spec, seed);
    BeliefState b(spec);
    EXPECT_FALSE(reg.holds(forge::ltl::Condition::Of(p), spec, b));
    for (auto n : spec.clickable()) {
      b = step(b, MetaAction::Click(n), gt, spec).belief;
      const auto& support = std::get<forge::env::DiscreteUniform>(spec.node(n).reward.dist).support;
      const double top = *std::max_element(support.begin(), support.end());
      ASSERT_EQ(reg.eval(p, spec, b, MetaAction::Terminate()), gt.values[n] >= top);
    }
  }
}

TEST(Predicates, AreLeavesObservedNeedsEveryDeepestNode) {
  const auto spec = forge::env::builtin_spec("mouselab3");
  const auto gt = sample_ground_truth(spec, 0);
  const auto& reg = Registry::builtin();
  const PredicateRef p("are_leaves_observed");
  BeliefState b(spec);
  for (auto n : spec.farsighted()) {
    EXPECT_FALSE(reg.eval(p, spec, b, MetaAction::Terminate()));
    b = step(b, MetaAction::Click(n), gt, spec).belief;
  }
  EXPECT_TRUE(reg.eval(p, spec, b, MetaAction::Terminate()));
}

TEST(Predicates, NotAndAmongAreMaskAlgebra) {
  std::mt19937_64 rng(8);
  const auto& reg = Registry::builtin();
  const auto spec = forge::testing::random_tree(rng, 9);
  const auto gt = sample_ground_truth(spec, 1);
  const PredicateRef leaf("is_leaf");
  for (std::uint32_t s = 0; s < (1u << spec.clickable().size()); ++s) {
    const auto b = reveal(spec, gt, s);
    const auto x = reg.mask(kObserved, spec, b);
    const auto y = reg.mask(leaf, spec, b);
    ASSERT_EQ(reg.mask(PredicateRef("not", {kObserved}), spec, b), universe_mask(spec) & ~x);
    auto both = x & y;
    both.reset(kTerminateBit);
    ASSERT_EQ(reg.mask(PredicateRef("among", {kObserved, leaf}), spec, b), both);
  }
}

TEST(Registry, CustomPredicatesAndValidation) {
  Registry reg;
  reg.add_node_predicate("is_shallow", [](const EnvSpec& s, const BeliefState&, NodeId n) { return s.depth(n) == 1; });
  reg.add_state_predicate("nothing_clicked", [](const EnvSpec&, const BeliefState& b) { return b.clicks() == 0; });
  EXPECT_TRUE(reg.contains("is_shallow"));
  EXPECT_EQ(reg.kind("nothing_clicked"), Registry::Kind::kState);
  EXPECT_THROW(reg.kind("nope"), forge::UnknownPredicate);
  EXPECT_THROW(reg.validate(PredicateRef("is_shallow", {kObserved})), forge::ArityMismatch);
  EXPECT_THROW(reg.validate(PredicateRef("among", {kObserved})), forge::ArityMismatch);
  EXPECT_NO_THROW(reg.validate(PredicateRef("among", {PredicateRef("not", {kObserved}), PredicateRef("is_shallow")})));
  const auto spec = forge::env::builtin_spec("mouselab3");
  const BeliefState b(spec);
  EXPECT_TRUE(reg.eval(PredicateRef("is_shallow"), spec, b, MetaAction::Click(1)));
  EXPECT_TRUE(reg.holds(forge::ltl::Condition::Of(PredicateRef("nothing_clicked")), spec, b));
  EXPECT_FALSE(Registry::builtin().contains("is_shallow"));
}

TEST(Masks, ActionBitsRoundTrip) {
  EXPECT_EQ(action_bit(MetaAction::Terminate()), kTerminateBit);
  for (NodeId n = 0; n < kMaxNodes; ++n) EXPECT_EQ(action_of_bit(action_bit(MetaAction::Click(n))), MetaAction::Click(n));
  const auto spec = forge::env::builtin_spec("mortgage");
  const BeliefState b(spec);
  const auto legal = legal_mask(b, spec);
  EXPECT_EQ(legal.count(), 10u);
  EXPECT_TRUE(legal.test(kTerminateBit));
  EXPECT_FALSE(legal.test(action_bit(MetaAction::Click(0))));
}

TEST(RowTable, SpansEndWithTerminate) {
  const auto spec = forge::env::builtin_spec("mouselab3");
  forge::oracle::FarsightedPolicy policy;
  const auto trajs = forge::oracle::rollout(policy, spec, 50, 2);
  const RowTable rows(spec, trajs);
  EXPECT_EQ(rows.trajectory_count(), 50u);
  std::size_t expected = 0;
  for (const auto& t : trajs) expected += t.clicks() + 1;
  EXPECT_EQ(rows.size(), expected);
  const forge::ltl::Conjunction body({{kAmong, false}});
  for (std::size_t t = 0; t < rows.trajectory_count(); ++t) {
    const auto [first, last] = rows.span(t);
    ASSERT_TRUE(rows.row(last - 1).action.is_terminate());
    // Every oracle click satisfies the far-sighted body.
    for (std::size_t r = first; r + 1 < last; ++r) ASSERT_TRUE(rows.satisfies(r, body));
  }
}

TEST(RowTable, TruthMatrixMatchesDirectEvaluation) {
  const auto spec = forge::env::builtin_spec("roadtrip");
  forge::oracle::RandomPolicy policy;
  const auto trajs = forge::oracle::rollout(policy, spec, 20, 5);
  const std::vector<PredicateRef> catalog = {kObserved, kDeepest, kAmong, PredicateRef("are_leaves_observed")};
  const auto m = truth_matrix(trajs, catalog, spec);
  ASSERT_EQ(m.columns, catalog);
  ASSERT_EQ(m.rows.size(), m.entries.size());
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const auto pairs = forge::env::replay(trajs[m.rows[r].trajectory], spec);
    const auto& sa = pairs[m.rows[r].step];
    for (std::size_t c = 0; c < catalog.size(); ++c) {
      ASSERT_EQ(m.entries[r][c], eval_predicate(catalog[c], sa.belief, sa.action, spec));
    }
  }
}

}  // namespace
