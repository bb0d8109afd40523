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

// Surface syntax for both formula kinds.
//
//   dnf      := conj (OR conj)*
//   conj     := literal (AND literal)* | '(' conj ')'
//   literal  := NOT literal | TRUE | FALSE | ref
//   ref      := name [ '(' ref (',' ref)* ')' ]
//
//   formula  := element (AND NEXT element)*
//   element  := HOLD body [UNLESS cond]
//             | body UNTIL cond [UNLESS cond]
//             | LOOP <step number> [UNLESS cond]        (final element only)
//   cond     := TRUE | FALSE | ref | '(' ref OR ref ')'
//
// Keywords are case-insensitive. Step numbers are 1-based.

#include <functional>
#include <string>
#include <string_view>

#include "forge/formula.hpp"

namespace forge::ltl {

// Called on every top-level predicate ref that is parsed; throws to reject
// it (e.g. UnknownPredicate). An empty validator accepts any name.
using RefValidator = std::function<void(const PredicateRef&)>;

DnfFormula parse_dnf(std::string_view text, const RefValidator& validate = {});
std::string print_dnf(const DnfFormula& f);

ProceduralFormula parse_ltl(std::string_view text, const RefValidator& validate = {});
// Throws InvalidArgument when `f` fails grammar_check.
std::string print_ltl(const ProceduralFormula& f);

PredicateRef parse_predicate_ref(std::string_view text);
std::string print_condition(const Condition& c);
std::string print_conjunction(const Conjunction& c);

}  // namespace forge::ltl
