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

#include "forge/predicates.hpp"

#include <algorithm>

#include "forge/error.hpp"

namespace forge::pred {

std::size_t action_bit(const MetaAction& a) {
  if (a.is_terminate()) return kTerminateBit;
  if (a.node >= kMaxNodes) throw InvalidArgument("node id exceeds the predicate mask width");
  return a.node;
}

MetaAction action_of_bit(std::size_t bit) {
  return bit == kTerminateBit ? MetaAction::Terminate() : MetaAction::Click(bit);
}

ActionMask universe_mask(const EnvSpec& spec) {
  if (spec.size() > kMaxNodes) throw InvalidArgument("environment has too many nodes for predicate masks");
  ActionMask m;
  for (NodeId n = 0; n < spec.size(); ++n) m.set(n);
  m.set(kTerminateBit);
  return m;
}

ActionMask legal_mask(const BeliefState& b, const EnvSpec& spec) {
  ActionMask m;
  if (b.terminated()) return m;
  for (NodeId n : env::legal_clicks(b, spec)) m.set(action_bit(MetaAction::Click(n)));
  m.set(kTerminateBit);
  return m;
}

// ---------------------------------------------------------------------------
// Registry

Registry::Registry() {
  add_node_predicate("is_observed",
                     [](const EnvSpec&, const BeliefState& b, NodeId n) { return b.is_revealed(n); });
  add_node_predicate("has_largest_depth", [](const EnvSpec& spec, const BeliefState&, NodeId n) {
    return n != spec.start() && spec.depth(n) == spec.max_depth();
  });
  add_node_predicate("is_leaf", [](const EnvSpec& spec, const BeliefState&, NodeId n) {
    return n != spec.start() && spec.is_leaf(n);
  });
  add_state_predicate("are_leaves_observed", [](const EnvSpec& spec, const BeliefState& b) {
    for (NodeId n : spec.clickable()) {
      if (spec.depth(n) == spec.max_depth() && !b.is_revealed(n)) return false;
    }
    return true;
  });
  add_state_predicate("is_previous_observed_max", [](const EnvSpec& spec, const BeliefState& b) {
    const auto last = b.last_click();
    return last && *b.value(*last) >= spec.support_max(*last);
  });
  entries_["among"] = {Kind::kAmong, {}, {}};
  entries_["not"] = {Kind::kNot, {}, {}};
  entries_["TRUE"] = {Kind::kConstant, {}, {}};
  entries_["FALSE"] = {Kind::kConstant, {}, {}};
}

const Registry& Registry::builtin() {
  static const Registry reg;
  return reg;
}

void Registry::add_node_predicate(const std::string& name, NodeFn fn) {
  entries_[name] = {Kind::kNode, std::move(fn), {}};
}

void Registry::add_state_predicate(const std::string& name, StateFn fn) {
  entries_[name] = {Kind::kState, {}, std::move(fn)};
}

bool Registry::contains(const std::string& name) const { return entries_.count(name) != 0; }

const Registry::Entry& Registry::entry(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw UnknownPredicate(name);
  return it->second;
}

Registry::Kind Registry::kind(const std::string& name) const { return entry(name).kind; }

std::vector<std::string> Registry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

void Registry::validate(const PredicateRef& p) const {
  const auto k = kind(p.name);
  const std::size_t expected = k == Kind::kAmong ? 2 : k == Kind::kNot ? 1 : 0;
  if (p.args.size() != expected) {
    throw ArityMismatch("predicate '" + p.name + "' takes " + std::to_string(expected) +
                        " argument(s), got " + std::to_string(p.args.size()));
  }
  for (const auto& a : p.args) validate(a);
}

ltl::RefValidator Registry::validator() const {
  return [this](const PredicateRef& p) { validate(p); };
}

ActionMask Registry::mask(const PredicateRef& p, const EnvSpec& spec, const BeliefState& b) const {
  const auto& e = entry(p.name);
  const ActionMask all = universe_mask(spec);
  switch (e.kind) {
    case Kind::kNode: {
      ActionMask m;
      for (NodeId n = 0; n < spec.size(); ++n) {
        if (e.node(spec, b, n)) m.set(n);
      }
      return m;
    }
    case Kind::kState:
      return e.state(spec, b) ? all : ActionMask();
    case Kind::kConstant:
      return p.name == "TRUE" ? all : ActionMask();
    case Kind::kNot:
      if (p.args.size() != 1) throw ArityMismatch("not takes exactly one argument");
      return all & ~mask(p.args[0], spec, b);
    case Kind::kAmong: {
      if (p.args.size() != 2) throw ArityMismatch("among takes exactly two arguments");
      ActionMask m = mask(p.args[0], spec, b) & mask(p.args[1], spec, b);
      m.reset(kTerminateBit);
      return m;
    }
  }
  return {};
}

bool Registry::eval(const PredicateRef& p, const EnvSpec& spec, const BeliefState& b,
                    const MetaAction& a) const {
  return mask(p, spec, b).test(action_bit(a));
}

bool Registry::holds(const ltl::Condition& c, const EnvSpec& spec, const BeliefState& b) const {
  if (c.is_true()) return true;
  if (c.is_false()) return false;
  return std::any_of(c.disjuncts().begin(), c.disjuncts().end(), [&](const PredicateRef& p) {
    return mask(p, spec, b).test(kTerminateBit);
  });
}

ActionMask Registry::body_mask(const ltl::Conjunction& c, const EnvSpec& spec,
                               const BeliefState& b) const {
  const ActionMask all = universe_mask(spec);
  ActionMask m = all;
  for (const auto& l : c.literals()) {
    const ActionMask lit = mask(l.predicate, spec, b);
    m &= l.negated ? all & ~lit : lit;
  }
  return m;
}

bool eval_predicate(const PredicateRef& p, const BeliefState& b, const MetaAction& a,
                    const EnvSpec& spec, const Registry& reg) {
  return reg.eval(p, spec, b, a);
}

// ---------------------------------------------------------------------------
// RowTable

RowTable::RowTable(const EnvSpec& spec, const std::vector<env::Trajectory>& trajs, const Registry& reg)
    : spec_(&spec), reg_(&reg) {
  universe_mask(spec);  // rejects oversized environments up front
  for (std::size_t t = 0; t < trajs.size(); ++t) {
    const std::size_t first = rows_.size();
    auto pairs = env::replay(trajs[t], spec);
    for (std::size_t s = 0; s < pairs.size(); ++s) {
      const ActionMask legal = legal_mask(pairs[s].belief, spec);
      rows_.push_back({t, s, std::move(pairs[s].belief), pairs[s].action, legal});
    }
    spans_.emplace_back(first, rows_.size());
  }
}

std::size_t RowTable::intern(const PredicateRef& p) const {
  auto [it, inserted] = ids_.emplace(p, cache_.size());
  if (inserted) {
    reg_->validate(p);
    cache_.emplace_back(rows_.size());
    known_.emplace_back(rows_.size(), false);
  }
  return it->second;
}

const ActionMask& RowTable::mask(std::size_t row, const PredicateRef& p) const {
  const std::size_t id = intern(p);
  if (!known_[id][row]) {
    cache_[id][row] = reg_->mask(p, *spec_, rows_[row].belief);
    known_[id][row] = true;
  }
  return cache_[id][row];
}

ActionMask RowTable::body_mask(std::size_t row, const ltl::Conjunction& c) const {
  const ActionMask all = universe_mask(*spec_);
  ActionMask m = all;
  for (const auto& l : c.literals()) {
    const ActionMask& lit = mask(row, l.predicate);
    m &= l.negated ? all & ~lit : lit;
  }
  return m;
}

bool RowTable::literal(std::size_t row, const ltl::Literal& l) const {
  return mask(row, l.predicate).test(action_bit(rows_[row].action)) != l.negated;
}

bool RowTable::satisfies(std::size_t row, const ltl::Conjunction& c) const {
  return std::all_of(c.literals().begin(), c.literals().end(),
                     [&](const ltl::Literal& l) { return literal(row, l); });
}

bool RowTable::holds(std::size_t row, const PredicateRef& p) const {
  return mask(row, p).test(kTerminateBit);
}

bool RowTable::holds(std::size_t row, const ltl::Condition& c) const {
  if (c.is_true()) return true;
  if (c.is_false()) return false;
  return std::any_of(c.disjuncts().begin(), c.disjuncts().end(),
                     [&](const PredicateRef& p) { return holds(row, p); });
}

TruthMatrix truth_matrix(const std::vector<env::Trajectory>& trajs, const std::vector<PredicateRef>& catalog,
                         const EnvSpec& spec, const Registry& reg) {
  for (const auto& p : catalog) reg.validate(p);
  RowTable table(spec, trajs, reg);
  TruthMatrix m;
  m.columns = catalog;
  m.rows.reserve(table.size());
  m.entries.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.row(r);
    m.rows.push_back({row.trajectory, row.step});
    std::vector<bool> entries;
    entries.reserve(catalog.size());
    for (const auto& p : catalog) entries.push_back(table.mask(r, p).test(action_bit(row.action)));
    m.entries.push_back(std::move(entries));
  }
  return m;
}

}  // namespace forge::pred
