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

// Compiles a DNF strategy description plus demonstrations into procedural
// formulas, then prunes the result greedily by likelihood.
//
// Pipeline: remove_redundant -> segment -> build_transition_graph ->
// max_sequences -> assign_classes -> per-class formula assembly with
// UNTIL/UNLESS selection -> prune.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/formula.hpp"
#include "forge/predicates.hpp"

namespace forge::compile {

using ltl::Condition;
using ltl::Conjunction;
using ltl::DnfFormula;
using ltl::PredicateRef;
using ltl::ProceduralFormula;
using pred::RowTable;

inline constexpr std::size_t kMaxConjunctions = 12;

// Drops every literal whose predicate is in `r`; an emptied conjunction
// becomes TRUE.
std::vector<Conjunction> remove_redundant(const std::vector<Conjunction>& c, const std::set<PredicateRef>& r);

// Maximal run of rows of one trajectory during which one conjunction is
// the active one. Rows are [first, last).
struct Segment {
  std::size_t conjunction = 0;
  std::size_t first = 0;
  std::size_t last = 0;
};

// Per trajectory, the segments covering every row but the final
// TERMINATE. A conjunction stays active while it holds; when it stops
// holding, the lowest-index conjunction that just became true takes over,
// or else the lowest-index true one. Throws UnsatisfiedDemonstrations when
// a row satisfies no conjunction.
std::vector<std::vector<Segment>> segment(const std::vector<Conjunction>& c, const RowTable& rows);

struct TransitionGraph {
  std::size_t node_count = 0;
  // Conjunctions active somewhere in the demonstrations.
  std::vector<bool> used;
  // Trajectories whose first segment is on each conjunction.
  std::vector<std::size_t> starts;
  // (from, to) -> number of segment switches from `from` to `to`.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edges;
  std::vector<std::vector<Segment>> segments;

  bool has_edge(std::size_t a, std::size_t b) const { return edges.count({a, b}) != 0; }
};

TransitionGraph build_transition_graph(const std::vector<Conjunction>& c, const RowTable& rows);

// A conjunction sequence, optionally followed by a LOOP back to
// sequence[loop_target].
struct Signature {
  std::vector<std::size_t> sequence;
  std::optional<std::size_t> loop_target;

  std::size_t size() const { return sequence.size(); }
  // Step index of a position in the unrolled sequence, or nullopt past the
  // end of a loop-free signature.
  std::optional<std::size_t> step_at(std::size_t position) const;
  std::string str() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// Maximal simple paths starting at conjunctions that begin some
// trajectory. A path whose last node has an edge back onto the path ends
// in a LOOP to that node, one signature per target. Paths that are
// subsequences of another signature with the same loop are dropped.
// Throws InvalidArgument for more than kMaxConjunctions nodes.
std::vector<Signature> max_sequences(const TransitionGraph& g);

struct Member {
  std::size_t trajectory = 0;
  // Position of each segment in the unrolled signature.
  std::vector<std::size_t> positions;
};

struct EquivalenceClass {
  Signature signature;
  std::vector<Member> members;
};

// Leftmost embedding of a conjunction sequence into the unrolled
// signature; nullopt when it is not a subsequence.
std::optional<std::vector<std::size_t>> embed(const std::vector<std::size_t>& sequence, const Signature& s);

// Every trajectory joins every class whose signature embeds its sequence.
// Empty classes are dropped. Throws UnsatisfiedDemonstrations when a
// trajectory fits no signature.
std::vector<EquivalenceClass> assign_classes(const std::vector<Signature>& signatures, const TransitionGraph& g);

// Singletons, then unordered pairs, in the order of `p`.
std::vector<Condition> candidate_conditions(const std::vector<PredicateRef>& p);

// Rows on which a condition must be false and rows on which it must be
// true.
struct RowConstraints {
  std::vector<std::size_t> must_be_false;
  std::vector<std::size_t> must_be_true;

  bool needed() const { return !must_be_true.empty(); }
};

RowConstraints until_constraints(const EquivalenceClass& e, const TransitionGraph& g, const RowTable& rows,
                                 std::size_t step);
RowConstraints unless_constraints(const EquivalenceClass& e, const TransitionGraph& g, const RowTable& rows,
                                  std::size_t step);
RowConstraints loop_unless_constraints(const EquivalenceClass& e, const TransitionGraph& g, const RowTable& rows);

std::vector<Condition> filter_conditions(const RowConstraints& k, const RowTable& rows,
                                         const std::vector<Condition>& candidates);

// Candidates that stay false while the step is active and turn true where
// the demonstrations leave it.
std::vector<Condition> matching_conditions(const EquivalenceClass& e, const TransitionGraph& g,
                                           const RowTable& rows, std::size_t step,
                                           const std::vector<Condition>& candidates);

struct LikelihoodModel {
  double epsilon = 1e-6;
};

// Sum over rows of log(1/|eligible|) for eligible actions and log(epsilon)
// otherwise, with a fresh controller per trajectory. `subset` restricts
// the sum to the listed trajectories.
double loglikelihood(const RowTable& rows, const ProceduralFormula& f, const LikelihoodModel& model = {},
                     const std::vector<std::size_t>* subset = nullptr);

struct TransformOptions {
  std::vector<PredicateRef> allowed;
  std::set<PredicateRef> redundant;
  LikelihoodModel model;
};

struct TransformResult {
  std::vector<ProceduralFormula> disjuncts;
  std::vector<Signature> signatures;
  std::vector<std::string> warnings;
  bool retried_without_redundant = false;
};

TransformResult transform(const DnfFormula& f, const RowTable& rows, const TransformOptions& options);

struct PruneResult {
  ProceduralFormula formula;
  std::size_t chosen = 0;
  double loglik_unpruned = 0.0;  // best disjunct before pruning
  double loglik = 0.0;
  std::vector<std::string> dropped;
};

// Greedy pass over each disjunct's body literals, steps in order: a
// literal is dropped when that strictly raises the likelihood. Returns the
// pruned disjunct with the highest likelihood, the first on ties.
PruneResult prune(const std::vector<ProceduralFormula>& psi, const RowTable& rows,
                  const LikelihoodModel& model = {});

}  // namespace forge::compile
