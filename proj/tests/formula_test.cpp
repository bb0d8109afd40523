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
#include <regex>

#include <gtest/gtest.h>

#include "forge/error.hpp"
#include "forge/formula.hpp"
#include "forge/formula_json.hpp"
#include "forge/formula_text.hpp"
#include "forge/predicates.hpp"

namespace {

using namespace forge::ltl;

const char* kFarsighted = "among(not(is_observed), has_largest_depth) UNTIL (are_leaves_observed OR is_previous_observed_max)";

PredicateRef ref(const std::string& name) { return PredicateRef(name); }

PredicateRef among_ref() {
  return PredicateRef("among", {PredicateRef("not", {ref("is_observed")}), ref("has_largest_depth")});
}

TEST(FormulaText, FarsightedFormulaRoundTrip) {
  const auto f = parse_ltl(kFarsighted);
  ASSERT_EQ(f.steps.size(), 1u);
  EXPECT_FALSE(f.loop);
  const auto& s = f.steps[0];
  ASSERT_EQ(s.body.size(), 1u);
  EXPECT_EQ(s.body.literals()[0].predicate, among_ref());
  ASSERT_NE(s.until(), nullptr);
  EXPECT_EQ(*s.until(), Condition::Of(ref("are_leaves_observed"), ref("is_previous_observed_max")));
  EXPECT_EQ(print_ltl(f), kFarsighted);
}

TEST(FormulaText, KeywordsAreCaseInsensitive) {
  const auto a = parse_ltl("hold is_leaf and next is_observed until true and next loop 1 unless false");
  const auto b = parse_ltl("HOLD is_leaf AND NEXT is_observed UNTIL TRUE AND NEXT LOOP 1 UNLESS FALSE");
  EXPECT_EQ(a, b);
  EXPECT_EQ(operator_skeleton(a), "HNUNLW");
}

TEST(FormulaText, ConditionDisjunctsAreOrderInsensitive) {
  EXPECT_EQ(parse_ltl("is_leaf UNTIL (is_observed OR are_leaves_observed)"),
            parse_ltl("is_leaf UNTIL (are_leaves_observed OR is_observed)"));
}

TEST(FormulaText, SyntaxErrorsCarryPosition) {
  try {
    parse_ltl("is_leaf UNTIL");
    FAIL() << "expected SyntaxError";
  } catch (const forge::SyntaxError& e) {
    // Tokens are counted from 1; the third is the end of input.
    EXPECT_EQ(e.token(), 3u);
  }
  EXPECT_THROW(parse_ltl("is_leaf UNTIL is_observed AND"), forge::SyntaxError);
  EXPECT_THROW(parse_ltl("LOOP 1"), forge::SyntaxError);
  EXPECT_THROW(parse_dnf("is_leaf AND"), forge::SyntaxError);
  EXPECT_THROW(parse_ltl("is_leaf UNTIL (a OR b OR c)"), forge::SyntaxError);
}

TEST(FormulaText, ValidatorRejectsUnknownAndMisAppliedPredicates) {
  const auto& reg = forge::pred::Registry::builtin();
  EXPECT_THROW(parse_ltl("is_loaf UNTIL TRUE", reg.validator()), forge::UnknownPredicate);
  EXPECT_THROW(parse_ltl("among(is_leaf) UNTIL TRUE", reg.validator()), forge::ArityMismatch);
  EXPECT_THROW(parse_dnf("among(is_leaf, is_observed, is_leaf)", reg.validator()), forge::ArityMismatch);
  EXPECT_THROW(parse_dnf("is_leaf(is_observed)", reg.validator()), forge::ArityMismatch);
  EXPECT_NO_THROW(parse_ltl(kFarsighted, reg.validator()));
}

TEST(FormulaText, LoopTargetOutOfRangeIsRejected) {
  EXPECT_ANY_THROW(parse_ltl("is_leaf UNTIL TRUE AND NEXT LOOP 2"));
  EXPECT_ANY_THROW(parse_ltl("is_leaf UNTIL TRUE AND NEXT LOOP 0"));
}

TEST(FormulaText, DnfRoundTrip) {
  const std::string text = "among(not(is_observed), has_largest_depth) AND NOT is_previous_observed_max OR is_leaf";
  const auto d = parse_dnf(text);
  ASSERT_EQ(d.conjunctions.size(), 2u);
  EXPECT_EQ(d.conjunctions[0].size(), 2u);
  EXPECT_EQ(parse_dnf(print_dnf(d)), d);
  EXPECT_EQ(dnf_from_json(to_json(d)), d);
}

// Random ASTs: the grammar is described independently by a regex over the
// operator skeleton.
class RandomFormulas {
 public:
  explicit RandomFormulas(std::uint64_t seed) : rng_(seed) {}

  PredicateRef predicate() {
    static const char* names[] = {"is_observed", "is_leaf", "has_largest_depth", "are_leaves_observed",
                                  "is_previous_observed_max"};
    const auto pick = [&] { return ref(names[die(5)]); };
    // not(...) only appears inside among; at the top level NOT is the
    // literal negation.
    if (die(3) == 0) return PredicateRef("among", {coin() ? PredicateRef("not", {pick()}) : pick(), pick()});
    return pick();
  }

  Conjunction body() {
    std::vector<Literal> lits;
    const auto n = die(4);
    for (std::size_t i = 0; i < n; ++i) lits.push_back({predicate(), coin()});
    return Conjunction(std::move(lits));
  }

  Condition condition() {
    switch (die(4)) {
      case 0:
        return Condition::True();
      case 1:
        return Condition::False();
      case 2:
        return Condition::Of(predicate());
      default:
        return Condition::Of(predicate(), predicate());
    }
  }

  // `valid` = false allows UNLESS on any HOLD.
  ProceduralFormula formula(bool valid) {
    ProceduralFormula f;
    const auto n = 1 + die(4);
    const bool loop = coin();
    for (std::size_t i = 0; i < n; ++i) {
      ProceduralStep s;
      s.body = body();
      if (coin()) s.terminator = Until{condition()};
      const bool final_element = !loop && i + 1 == n;
      if (coin() && (!valid || !s.is_hold() || final_element)) s.unless = condition();
      f.steps.push_back(std::move(s));
    }
    if (loop) {
      Loop l;
      l.target = die(n);
      if (coin()) l.unless = condition();
      f.loop = l;
    }
    return f;
  }

 private:
  std::size_t die(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return die(2) == 1; }

  std::mt19937_64 rng_;
};

bool skeleton_in_grammar(const std::string& skeleton) {
  static const std::regex plain("^((H|UW?)N)*(HW?|UW?)$");
  static const std::regex looped("^((H|UW?)N)+LW?$");
  return std::regex_match(skeleton, plain) || std::regex_match(skeleton, looped);
}

TEST(FormulaProperties, RandomAstTextAndJsonRoundTrip) {
  RandomFormulas gen(7);
  for (int i = 0; i < 1000; ++i) {
    const auto f = gen.formula(true);
    ASSERT_TRUE(grammar_check(f));
    const auto text = print_ltl(f);
    ASSERT_EQ(parse_ltl(text), f) << text;
    ASSERT_EQ(procedural_from_json(to_json(f)), f) << text;
    ASSERT_EQ(load_procedural(to_json(f).dump()), f);
  }
}

TEST(FormulaProperties, GrammarCheckAgreesWithSkeletonRegex) {
  RandomFormulas gen(11);
  int rejected = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto f = gen.formula(false);
    const bool ok = grammar_check(f);
    ASSERT_EQ(ok, skeleton_in_grammar(operator_skeleton(f))) << operator_skeleton(f);
    if (!ok) {
      ++rejected;
      EXPECT_THROW(print_ltl(f), forge::InvalidArgument);
    }
  }
  EXPECT_GT(rejected, 0);
}

TEST(FormulaProperties, EmptyFormulaIsOutsideGrammar) {
  EXPECT_FALSE(grammar_check(ProceduralFormula{}));
}

TEST(Conjunction, WithoutLastLiteralIsTrue) {
  const Conjunction c({{ref("is_leaf"), false}});
  EXPECT_TRUE(c.without(0).is_true());
  EXPECT_TRUE(Conjunction::False().is_false());
}

}  // namespace
