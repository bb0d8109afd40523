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

#include <gtest/gtest.h>

#include "forge/error.hpp"
#include "forge/formula_text.hpp"
#include "forge/translate.hpp"
#include "support.hpp"

namespace {

using namespace forge::nl;
using forge::ltl::parse_ltl;
using forge::testing::data_path;

const char* kFarsighted = "among(not(is_observed), has_largest_depth) UNTIL (are_leaves_observed OR is_previous_observed_max)";

std::string render(const std::string& formula, const std::string& dict) {
  return translate(parse_ltl(formula), load_dictionary(data_path("dictionaries/" + dict + ".json")));
}

TEST(Translate, MortgageGolden) {
  EXPECT_EQ(render(kFarsighted, "mortgage"),
            "Click the most long-term interest rates that you have not clicked yet. Repeat this step until all "
            "the long-term interest rates are clicked or you have encountered the lowest possible interest rate.");
}

TEST(Translate, MortgageAppendixVariant) {
  EXPECT_EQ(render(kFarsighted, "mortgage_appendix"),
            "Click the most long-term interest rates that you have not clicked yet. Repeat this step until all "
            "the long-term interest rates are clicked, or you have encountered the lowest possible interest rate.");
}

TEST(Translate, RoadTripGolden) {
  EXPECT_EQ(render(kFarsighted, "roadtrip"),
            "Look up the prices of the most distant hotels that you have not looked up yet. Repeat this step "
            "until all the distant hotels' prices are looked up or you have encountered the lowest possible hotel "
            "price.");
}

TEST(Translate, HoldAndConstants) {
  EXPECT_EQ(render("HOLD has_largest_depth", "mouselab3"),
            "Click the nodes on the outermost level. Repeat this step as long as possible.");
  EXPECT_EQ(render("TRUE UNTIL is_previous_observed_max", "mouselab3"),
            "Stop planning right away or click some random nodes and then stop planning. Repeat this step until "
            "you have uncovered the highest possible reward.");
  EXPECT_EQ(render("FALSE UNTIL TRUE", "mouselab3"), "Do not click anything.");
}

TEST(Translate, UnlessAndNumberedSteps) {
  EXPECT_EQ(render("is_leaf UNTIL is_previous_observed_max AND NEXT HOLD among(not(is_observed), "
                   "has_largest_depth) UNLESS are_leaves_observed",
                   "mouselab3"),
            "1. Click the leaf nodes. Repeat this step until you have uncovered the highest possible reward.\n"
            "2. Click the nodes on the outermost level that you have not clicked yet. Unless all the nodes on the "
            "outermost level are clicked, in which case stop at the previous step. Repeat this step as long as "
            "possible.");
}

TEST(Translate, LoopBecomesGoto) {
  const auto text = render("is_leaf UNTIL is_previous_observed_max AND NEXT has_largest_depth UNTIL "
                           "are_leaves_observed AND NEXT LOOP 1",
                           "mouselab3");
  EXPECT_NE(text.find("2. Click the nodes on the outermost level."), std::string::npos) << text;
  EXPECT_EQ(text.substr(text.size() - std::string("GOTO step 1.").size()), "GOTO step 1.");
}

TEST(Translate, NegatedLiteralsBecomeBullets) {
  const auto text = render("HOLD (among(not(is_observed), has_largest_depth) AND NOT is_previous_observed_max)",
                           "mouselab3");
  EXPECT_EQ(text,
            "Click the nodes on the outermost level that you have not clicked yet.\n"
            "   Do not click:\n"
            "   - when you have uncovered the highest possible reward\n"
            "   Repeat this step as long as possible.");
}

TEST(Translate, MissingTemplateNamesPredicate) {
  try {
    render("HOLD is_shallow", "mortgage");
    FAIL() << "expected MissingTemplate";
  } catch (const forge::MissingTemplate& e) {
    EXPECT_EQ(e.predicate(), "is_shallow");
  }
}

TEST(Translate, RejectsFormulasOutsideGrammar) {
  forge::ltl::ProceduralFormula f;
  EXPECT_THROW(translate(f, load_dictionary(data_path("dictionaries/mouselab3.json"))), forge::InvalidArgument);
}

TEST(Dictionary, JsonRoundTripAndFill) {
  const auto d = load_dictionary(data_path("dictionaries/roadtrip.json"));
  EXPECT_EQ(dictionary_from_json(to_json(d)), d);
  EXPECT_EQ(d.fill("{ACT} {REW} of {OBJ}"), "look up the prices of hotels");
  EXPECT_THROW(dictionary_from_json(nlohmann::json::array()), forge::InvalidArgument);
}

TEST(SplitSteps, LoopAttachesToFinalStep) {
  const auto steps = split_steps(parse_ltl("HOLD is_leaf AND NEXT is_observed UNTIL TRUE AND NEXT LOOP 1"));
  ASSERT_EQ(steps.size(), 2u);
  EXPECT_FALSE(steps[0].loop);
  ASSERT_TRUE(steps[1].loop);
  EXPECT_EQ(steps[1].loop->target, 0u);
}

}  // namespace
