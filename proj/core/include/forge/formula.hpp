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

// Abstract syntax for strategy descriptions: DNF formulas over predicates
// and procedural (extended LTL) formulas built from NEXT, UNTIL, UNLESS,
// HOLD and LOOP.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace forge::ltl {

// A predicate applied to arguments. Arguments are nested predicate refs
// (as in `among(not(is_observed), has_largest_depth)`) or bare selectors,
// which are represented as argument-free refs.
struct PredicateRef {
  std::string name;
  std::vector<PredicateRef> args;

  PredicateRef() = default;
  explicit PredicateRef(std::string n, std::vector<PredicateRef> a = {})
      : name(std::move(n)), args(std::move(a)) {}

  friend bool operator==(const PredicateRef&, const PredicateRef&) = default;
  friend std::strong_ordering operator<=>(const PredicateRef& a, const PredicateRef& b);

  std::string str() const;
  // Every predicate name used in this ref, including nested ones.
  void collect_names(std::vector<std::string>& out) const;
};

struct Literal {
  PredicateRef predicate;
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);

  std::string str() const;
};

// An ordered list of literals. The empty conjunction is the distinguished
// TRUE conjunction. Equality ignores literal order.
class Conjunction {
 public:
  Conjunction() = default;
  explicit Conjunction(std::vector<Literal> literals);

  static Conjunction True() { return Conjunction(); }
  // A conjunction holding the single constant literal FALSE.
  static Conjunction False();

  const std::vector<Literal>& literals() const { return literals_; }
  bool is_true() const { return literals_.empty(); }
  bool is_false() const;
  std::size_t size() const { return literals_.size(); }

  // Removes the literal at `index`; an emptied conjunction becomes TRUE.
  Conjunction without(std::size_t index) const;

  friend bool operator==(const Conjunction& a, const Conjunction& b);

 private:
  std::vector<Literal> literals_;
};

struct DnfFormula {
  std::vector<Conjunction> conjunctions;

  friend bool operator==(const DnfFormula&, const DnfFormula&) = default;
};

// UNTIL/UNLESS condition: TRUE, FALSE, or a disjunction of one or two
// predicates. Disjuncts are kept sorted by name so that equality and
// rendering do not depend on construction order.
class Condition {
 public:
  enum class Kind { kTrue, kFalse, kDisjunction };

  static Condition True() { return Condition(Kind::kTrue, {}); }
  static Condition False() { return Condition(Kind::kFalse, {}); }
  static Condition Of(PredicateRef p) { return Condition(Kind::kDisjunction, {std::move(p)}); }
  static Condition Of(PredicateRef a, PredicateRef b);

  Kind kind() const { return kind_; }
  bool is_true() const { return kind_ == Kind::kTrue; }
  bool is_false() const { return kind_ == Kind::kFalse; }
  const std::vector<PredicateRef>& disjuncts() const { return disjuncts_; }

  friend bool operator==(const Condition&, const Condition&) = default;

 private:
  Condition(Kind kind, std::vector<PredicateRef> disjuncts);

  Kind kind_ = Kind::kTrue;
  std::vector<PredicateRef> disjuncts_;
};

struct Hold {
  friend bool operator==(const Hold&, const Hold&) = default;
};

struct Until {
  Condition condition;
  friend bool operator==(const Until&, const Until&) = default;
};

using Terminator = std::variant<Hold, Until>;

struct ProceduralStep {
  Conjunction body;
  Terminator terminator = Hold{};
  std::optional<Condition> unless;

  bool is_hold() const { return std::holds_alternative<Hold>(terminator); }
  const Condition* until() const {
    const auto* u = std::get_if<Until>(&terminator);
    return u ? &u->condition : nullptr;
  }

  friend bool operator==(const ProceduralStep&, const ProceduralStep&) = default;
};

// Trailing LOOP element: jump back to `target` (0-based step index),
// optionally guarded by UNLESS.
struct Loop {
  std::size_t target = 0;
  std::optional<Condition> unless;

  friend bool operator==(const Loop&, const Loop&) = default;
};

struct ProceduralFormula {
  std::vector<ProceduralStep> steps;
  std::optional<Loop> loop;

  friend bool operator==(const ProceduralFormula&, const ProceduralFormula&) = default;
};

// Operator skeleton of a formula, one symbol per operator, e.g. "UWN H" for
// [c1 U p W q, HOLD c2]. H = HOLD, U = UNTIL, W = UNLESS, N = NEXT,
// L = LOOP. Used by grammar_check and its independent regex oracle.
std::string operator_skeleton(const ProceduralFormula& f);

// True iff `f` follows the procedural grammar: NEXT-joined steps, each
// HOLD- or UNTIL(+UNLESS)-terminated, where only the final element may be
// a HOLD with UNLESS, and the final element may instead be an optionally
// UNLESS-guarded LOOP to an earlier step.
bool grammar_check(const ProceduralFormula& f);

}  // namespace forge::ltl
