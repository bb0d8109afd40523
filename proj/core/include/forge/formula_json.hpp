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

// Structured (JSON) documents for formulas, for tooling that prefers nested
// objects over the text syntax. Documents carry "format_version": 1.

#include <nlohmann/json.hpp>

#include "forge/formula.hpp"

namespace forge::ltl {

inline constexpr int kFormulaFormatVersion = 1;

nlohmann::json to_json(const PredicateRef& p);
nlohmann::json to_json(const Conjunction& c);
nlohmann::json to_json(const Condition& c);
nlohmann::json to_json(const DnfFormula& f);
nlohmann::json to_json(const ProceduralFormula& f);

PredicateRef predicate_from_json(const nlohmann::json& j);
Conjunction conjunction_from_json(const nlohmann::json& j);
Condition condition_from_json(const nlohmann::json& j);
DnfFormula dnf_from_json(const nlohmann::json& j);
ProceduralFormula procedural_from_json(const nlohmann::json& j);

// Reads a formula from either the text syntax or a JSON document (detected
// by a leading '{').
ProceduralFormula load_procedural(const std::string& text);
DnfFormula load_dnf(const std::string& text);

}  // namespace forge::ltl
