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

#include "forge/formula.hpp"

#include <algorithm>

namespace forge::ltl {

std::strong_ordering operator<=>(const PredicateRef& a, const PredicateRef& b) {
  if (auto c = a.name <=> b.name; c != 0) return c;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(),
                                                b.args.end());
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return a.negated <=> b.negated;
}

std::string PredicateRef::str() const {
  if (args.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += args[i].str();
  }
  return out + ")";
}

void PredicateRef::collect_names(std::vector<std::string>& out) const {
  out.push_back(name);
  for (const auto& a : args) a.collect_names(out);
}

std::string Literal::str() const { return negated ? "NOT " + predicate.str() : predicate.str(); }

Conjunction::Conjunction(std::vector<Literal> literals) {
  for (auto& lit : literals) {
    // TRUE is the identity of conjunction.
    if (!lit.negated && lit.predicate.name == "TRUE" && lit.predicate.args.empty()) continue;
    if (std::find(literals_.begin(), literals_.end(), lit) != literals_.end()) continue;
    literals_.push_back(std::move(lit));
  }
}

Conjunction Conjunction::False() {
  Conjunction c;
  c.literals_.push_back(Literal{PredicateRef("FALSE"), false});
  return c;
}

bool Conjunction::is_false() const {
  return std::any_of(literals_.begin(), literals_.end(), [](const Literal& l) {
    return !l.negated && l.predicate.name == "FALSE" && l.predicate.args.empty();
  });
}

Conjunction Conjunction::without(std::size_t index) const {
  Conjunction c;
  for (std::size_t i = 0; i < literals_.size(); ++i) {
    if (i != index) c.literals_.push_back(literals_[i]);
  }
  return c;
}

bool operator==(const Conjunction& a, const Conjunction& b) {
  if (a.literals_.size() != b.literals_.size()) return false;
  auto x = a.literals_;
  auto y = b.literals_;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

Condition::Condition(Kind kind, std::vector<PredicateRef> disjuncts)
    : kind_(kind), disjuncts_(std::move(disjuncts)) {}

Condition Condition::Of(PredicateRef a, PredicateRef b) {
  if (a == b) return Of(std::move(a));
  if (b < a) std::swap(a, b);
  return Condition(Kind::kDisjunction, {std::move(a), std::move(b)});
}

std::string operator_skeleton(const ProceduralFormula& f) {
  std::string out;
  for (std::size_t i = 0; i < f.steps.size(); ++i) {
    if (i > 0) out += 'N';
    const auto& s = f.steps[i];
    out += s.is_hold() ? 'H' : 'U';
    if (s.unless) out += 'W';
  }
  if (f.loop) {
    if (!out.empty()) out += 'N';
    out += 'L';
    if (f.loop->unless) out += 'W';
  }
  return out;
}

bool grammar_check(const ProceduralFormula& f) {
  if (f.steps.empty()) return false;
  if (f.loop && f.loop->target >= f.steps.size()) return false;
  for (std::size_t i = 0; i < f.steps.size(); ++i) {
    const auto& s = f.steps[i];
    const bool final_element = !f.loop && i + 1 == f.steps.size();
    // A non-final HOLD carries no UNLESS.
    if (s.is_hold() && s.unless && !final_element) return false;
  }
  return true;
}

}  // namespace forge::ltl
