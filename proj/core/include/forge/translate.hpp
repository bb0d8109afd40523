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

// Renders procedural formulas as numbered natural-language instructions
// using a per-task dictionary of phrases.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/formula.hpp"

namespace forge::nl {

// Domain wording. Templates may use the slots {ACT}, {ACT_PAST}, {OBJ}
// and {REW}. Template maps are keyed by the printed predicate ref
// ("is_leaf", "among(...)") with a fallback to the bare name.
struct Dictionary {
  std::string task;
  std::string act;       // "click"
  std::string act_past;  // "clicked"
  std::string obj;       // "interest rates"
  std::string rew;       // "the prices"
  // Noun phrase selected by a positive body predicate.
  std::map<std::string, std::string> predicate_templates;
  // Clause appended for a negated argument of among(...), e.g.
  // is_observed -> "that you have not {ACT_PAST} yet".
  std::map<std::string, std::string> relative_clauses;
  // Clause appended for a second positive argument of among(...).
  std::map<std::string, std::string> qualifiers;
  // Clause for a state predicate used as an UNTIL/UNLESS condition or as a
  // negated body literal.
  std::map<std::string, std::string> condition_templates;
  std::string disjunction_joiner = " or ";

  std::string fill(const std::string& text) const;

  friend bool operator==(const Dictionary&, const Dictionary&) = default;
};

nlohmann::json to_json(const Dictionary& d);
Dictionary dictionary_from_json(const nlohmann::json& j);
Dictionary load_dictionary(const std::string& path);

// One rendered unit: a step, plus the LOOP when it is the final step.
struct StepView {
  ltl::ProceduralStep step;
  std::optional<ltl::Loop> loop;
};

std::vector<StepView> split_steps(const ltl::ProceduralFormula& f);

// Renders a single step without numbering.
std::string translate_step(const StepView& s, const Dictionary& d);

// Steps are numbered "1." onward only when there is more than one.
// Throws MissingTemplate naming the first predicate without wording and
// InvalidArgument for formulas outside the grammar.
std::string translate(const ltl::ProceduralFormula& f, const Dictionary& d);

}  // namespace forge::nl
