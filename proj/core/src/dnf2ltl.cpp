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

#include "forge/dnf2ltl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "forge/controller.hpp"
#include "forge/error.hpp"
#include "forge/formula_text.hpp"

namespace forge::compile {

std::vector<Conjunction> remove_redundant(const std::vector<Conjunction>& c, const std::set<PredicateRef>& r) {
  std::vector<Conjunction> out;
  out.reserve(c.size());
  for (const auto& conj : c) {
    std::vector<ltl::Literal> kept;
    for (const auto& l : conj.literals()) {
      if (!r.count(l.predicate)) kept.push_back(l);
    }
    out.emplace_back(std::move(kept));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Segmentation and the transition graph

std::vector<std::vector<Segment>> segment(const std::vector<Conjunction>& c, const RowTable& rows) {
  if (c.empty()) throw InvalidArgument("DNF formula has no conjunctions");
  std::vector<std::vector<Segment>> out(rows.trajectory_count());
  std::vector<bool> truth(c.size()), previous(c.size());
  for (std::size_t t = 0; t < rows.trajectory_count(); ++t) {
    const auto [first, last] = rows.span(t);
    std::optional<std::size_t> active;
    for (std::size_t r = first; r + 1 < last; ++r) {
      for (std::size_t j = 0; j < c.size(); ++j) truth[j] = rows.satisfies(r, c[j]);
      if (active && truth[*active]) {
        out[t].back().last = r + 1;
      } else {
        std::optional<std::size_t> next;
        if (active) {
          for (std::size_t j = 0; j < c.size() && !next; ++j) {
            if (truth[j] && !previous[j]) next = j;
          }
        }
        for (std::size_t j = 0; j < c.size() && !next; ++j) {
          if (truth[j]) next = j;
        }
        if (!next) {
          throw UnsatisfiedDemonstrations("DNF not satisfied by demonstrations: trajectory " +
                                          std::to_string(t) + " row " + std::to_string(r - first) +
                                          " satisfies no conjunction");
        }
        active = next;
        out[t].push_back({*next, r, r + 1});
      }
      previous = truth;
    }
  }
  return out;
}

TransitionGraph build_transition_graph(const std::vector<Conjunction>& c, const RowTable& rows) {
  if (c.size() > kMaxConjunctions) {
    throw InvalidArgument("DNF has " + std::to_string(c.size()) + " conjunctions; at most " +
                          std::to_string(kMaxConjunctions) + " are supported");
  }
  TransitionGraph g;
  g.node_count = c.size();
  g.used.assign(c.size(), false);
  g.starts.assign(c.size(), 0);
  g.segments = segment(c, rows);
  for (const auto& segs : g.segments) {
    if (segs.empty()) continue;
    ++g.starts[segs.front().conjunction];
    for (std::size_t j = 0; j < segs.size(); ++j) {
      g.used[segs[j].conjunction] = true;
      if (j > 0) ++g.edges[{segs[j - 1].conjunction, segs[j].conjunction}];
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Signatures and classes

std::optional<std::size_t> Signature::step_at(std::size_t position) const {
  const std::size_t k = sequence.size();
  if (position < k) return position;
  if (!loop_target) return std::nullopt;
  return *loop_target + (position - k) % (k - *loop_target);
}

std::string Signature::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < sequence.size(); ++i) out << (i ? " " : "") << 'c' << sequence[i] + 1;
  if (loop_target) out << " LOOP c" << sequence[*loop_target] + 1;
  return out.str();
}

namespace {

bool is_subsequence(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  std::size_t i = 0;
  for (std::size_t x : b) {
    if (i < a.size() && a[i] == x) ++i;
  }
  return i == a.size();
}

std::optional<std::size_t> loop_node(const Signature& s) {
  if (!s.loop_target) return std::nullopt;
  return s.sequence[*s.loop_target];
}

}  // namespace

std::vector<Signature> max_sequences(const TransitionGraph& g) {
  if (g.node_count > kMaxConjunctions) throw InvalidArgument("transition graph has too many conjunctions");
  std::vector<std::vector<std::size_t>> succ(g.node_count);
  for (const auto& [edge, _] : g.edges) succ[edge.first].push_back(edge.second);

  std::vector<Signature> found;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(g.node_count, false);
  auto extend = [&](auto&& self, std::size_t v) -> void {
    path.push_back(v);
    on_path[v] = true;
    bool extended = false;
    for (std::size_t w : succ[v]) {
      if (!on_path[w]) {
        extended = true;
        self(self, w);
      }
    }
    if (!extended) {
      bool looped = false;
      for (std::size_t w : succ[v]) {
        const auto at = std::find(path.begin(), path.end(), w) - path.begin();
        found.push_back({path, static_cast<std::size_t>(at)});
        looped = true;
      }
      if (!looped) found.push_back({path, std::nullopt});
    }
    on_path[v] = false;
    path.pop_back();
  };
  for (std::size_t v = 0; v < g.node_count; ++v) {
    if (g.starts[v] > 0) extend(extend, v);
  }

  std::vector<Signature> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    bool covered = false;
    for (std::size_t j = 0; j < found.size() && !covered; ++j) {
      if (i == j || loop_node(found[i]) != loop_node(found[j])) continue;
      const bool longer = found[j].size() > found[i].size();
      const bool earlier_duplicate = j < i && found[j] == found[i];
      covered = earlier_duplicate || (longer && is_subsequence(found[i].sequence, found[j].sequence));
    }
    if (!covered) out.push_back(found[i]);
  }
  return out;
}

std::optional<std::vector<std::size_t>> embed(const std::vector<std::size_t>& sequence, const Signature& s) {
  std::vector<std::size_t> positions;
  std::size_t cursor = 0;
  for (std::size_t x : sequence) {
    std::optional<std::size_t> hit;
    for (std::size_t p = cursor; p <= cursor + s.size(); ++p) {
      const auto step = s.step_at(p);
      if (!step) break;
      if (s.sequence[*step] == x) {
        hit = p;
        break;
      }
    }
    if (!hit) return std::nullopt;
    positions.push_back(*hit);
    cursor = *hit + 1;
  }
  return positions;
}

std::vector<EquivalenceClass> assign_classes(const std::vector<Signature>& signatures, const TransitionGraph& g) {
  std::vector<EquivalenceClass> classes;
  for (const auto& s : signatures) classes.push_back({s, {}});
  for (std::size_t t = 0; t < g.segments.size(); ++t) {
    std::vector<std::size_t> seq;
    for (const auto& seg : g.segments[t]) seq.push_back(seg.conjunction);
    bool assigned = false;
    for (auto& e : classes) {
      if (auto pos = embed(seq, e.signature)) {
        e.members.push_back({t, std::move(*pos)});
        assigned = true;
      }
    }
    if (!assigned) {
      throw UnsatisfiedDemonstrations("trajectory " + std::to_string(t) +
                                      " fits no maximal conjunction sequence");
    }
  }
  classes.erase(std::remove_if(classes.begin(), classes.end(),
                               [](const EquivalenceClass& e) { return e.members.empty(); }),
                classes.end());
  return classes;
}

// ---------------------------------------------------------------------------
// Conditions

std::vector<Condition> candidate_conditions(const std::vector<PredicateRef>& p) {
  std::vector<Condition> out;
  for (const auto& a : p) out.push_back(Condition::Of(a));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] != p[j]) out.push_back(Condition::Of(p[i], p[j]));
    }
  }
  return out;
}

namespace {

// Visits the segment transitions of a member. `f(step, exit_row, wraps)`
// is called for every step the cursor passes through when leaving segment
// j, `wraps` marking the LOOP jump.
template <typename F>
void for_each_pass(const Member& m, const std::vector<Segment>& segs, const Signature& s, F&& f) {
  for (std::size_t j = 0; j + 1 < segs.size(); ++j) {
    for (std::size_t q = m.positions[j]; q < m.positions[j + 1]; ++q) {
      const bool wraps = q + 1 >= s.size();
      f(*s.step_at(q), segs[j].last, wraps);
    }
  }
}

void add_rows(std::vector<std::size_t>& out, std::size_t first, std::size_t last) {
  for (std::size_t r = first; r < last; ++r) out.push_back(r);
}

// Step on which a member stops, and the row where it does.
std::pair<std::size_t, std::size_t> terminal(const Member& m, const std::vector<Segment>& segs,
                                             const Signature& s, const RowTable& rows) {
  if (segs.empty()) return {0, rows.span(m.trajectory).first};
  return {*s.step_at(m.positions.back()), segs.back().last};
}

}  // namespace

RowConstraints until_constraints(const EquivalenceClass& e, const TransitionGraph& g, const RowTable& rows,
                                 std::size_t step) {
  RowConstraints k;
  const auto& s = e.signature;
  const std::size_t last_step = s.size() - 1;
  for (const auto& m : e.members) {
    const auto& segs = g.segments[m.trajectory];
    for (std::size_t j = 0; j < segs.size(); ++j) {
      if (*s.step_at(m.positions[j]) == step) add_rows(k.must_be_false, segs[j].first, segs[j].last);
    }
    for_each_pass(m, segs, s, [&](std::size_t st, std::size_t row, bool) {
      if (st == step) k.must_be_true.push_back(row);
    });
    const auto [end_step, end_row] = terminal(m, segs, s, rows);
    if (step == last_step && end_step == last_step) k.must_be_true.push_back(end_row);
  }
  return k;
}

RowConstraints unless_constraints(const EquivalenceClass& e, const TransitionGraph& g, const RowTable& rows,
                                  std::size_t step) {
  RowConstraints k;
  const auto& s = e.signature;
  if (step + 1 >= s.size()) return k;
  for (const auto& m : e.members) {
    const auto& segs = g.segments[m.trajectory];
    for (std::size_t j = 0; j < segs.size(); ++j) {
      if (*s.step_at(m.positions[j]) == step) add_rows(k.must_be_false, segs[j].first, segs[j].last);
    }
    for_each_pass(m, segs, s, [&](std::size_t st, std::size_t row, bool) {
      if (st == step) k.must_be_false.push_back(row);
    });
    const auto [end_step, end_row] = terminal(m, segs, s, rows);
    if (end_step == step) k.must_be_true.push_back(end_row);
  }
  return k;
}

RowConstraints loop_unless_constraints(const EquivalenceClass& e, const TransitionGraph& g, const RowTable& rows) {
  RowConstraints k;
  const auto& s = e.signature;
  if (!s.loop_target) return k;
  const std::size_t last_step = s.size() - 1;
  for (const auto& m : e.members) {
    const auto& segs = g.segments[m.trajectory];
    for_each_pass(m, segs, s, [&](std::size_t, std::size_t row, bool wraps) {
      if (wraps) k.must_be_false.push_back(row);
    });
    const auto [end_step, end_row] = terminal(m, segs, s, rows);
    if (end_step == last_step && !segs.empty()) k.must_be_true.push_back(end_row);
  }
  return k;
}

std::vector<Condition> filter_conditions(const RowConstraints& k, const RowTable& rows,
                                         const std::vector<Condition>& candidates) {
  std::vector<Condition> out;
  for (const auto& c : candidates) {
    const bool ok =
        std::none_of(k.must_be_false.begin(), k.must_be_false.end(), [&](std::size_t r) { return rows.holds(r, c); }) &&
        std::all_of(k.must_be_true.begin(), k.must_be_true.end(), [&](std::size_t r) { return rows.holds(r, c); });
    if (ok) out.push_back(c);
  }
  return out;
}

std::vector<Condition> matching_conditions(const EquivalenceClass& e, const TransitionGraph& g,
                                           const RowTable& rows, std::size_t step,
                                           const std::vector<Condition>& candidates) {
  return filter_conditions(until_constraints(e, g, rows, step), rows, candidates);
}

// ---------------------------------------------------------------------------
// Likelihood

double loglikelihood(const RowTable& rows, const ProceduralFormula& f, const LikelihoodModel& model,
                     const std::vector<std::size_t>* subset) {
  if (!(model.epsilon > 0.0 && model.epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  const double log_eps = std::log(model.epsilon);
  double total = 0.0;
  auto score = [&](std::size_t t) {
    std::size_t cursor = 0;
    const auto [first, last] = rows.span(t);
    for (std::size_t r = first; r < last; ++r) {
      const auto eligible = oracle::resolve(f, cursor, oracle::RowContext(rows, r));
      if (eligible.test(pred::action_bit(rows.row(r).action))) {
        total -= std::log(static_cast<double>(eligible.count()));
      } else {
        total += log_eps;
      }
    }
  };
  if (subset) {
    for (std::size_t t : *subset) score(t);
  } else {
    for (std::size_t t = 0; t < rows.trajectory_count(); ++t) score(t);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Transform

namespace {

std::size_t predicate_count(const Condition& c) {
  std::vector<std::string> names;
  for (const auto& p : c.disjuncts()) p.collect_names(names);
  return names.size();
}

bool clearly_better(double a, double b) { return a > b + 1e-9 * std::max(1.0, std::abs(b)); }

// Preference among equally likely conditions: fewer disjuncts, fewer
// predicates, then text order.
bool simpler(const Condition& a, const Condition& b) {
  const auto ka = std::make_tuple(a.disjuncts().size(), predicate_count(a), ltl::print_condition(a));
  const auto kb = std::make_tuple(b.disjuncts().size(), predicate_count(b), ltl::print_condition(b));
  return ka < kb;
}

template <typename Score>
Condition select(const std::vector<Condition>& options, Score&& score) {
  std::optional<Condition> best;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (const auto& c : options) {
    const double ll = score(c);
    if (!best || clearly_better(ll, best_ll) || (!clearly_better(best_ll, ll) && simpler(c, *best))) {
      best = c;
      best_ll = ll;
    }
  }
  return *best;
}

struct Retry {};

ProceduralFormula with_tail(std::vector<ltl::ProceduralStep> steps) {
  steps.push_back({Conjunction::True(), ltl::Hold{}, std::nullopt});
  return {std::move(steps), std::nullopt};
}

ProceduralFormula assemble(const EquivalenceClass& e, const TransitionGraph& g, const RowTable& rows,
                           const std::vector<Conjunction>& conjs, const std::vector<Condition>& candidates,
                           bool removed, const LikelihoodModel& model, std::vector<std::string>& warnings) {
  const auto& sig = e.signature;
  const std::size_t k = sig.size();
  std::vector<std::size_t> members;
  for (const auto& m : e.members) members.push_back(m.trajectory);
  auto ll = [&](const ProceduralFormula& f) { return loglikelihood(rows, f, model, &members); };
  auto complete = [&](std::vector<ltl::ProceduralStep> steps, std::optional<Condition> loop_unless) {
    ProceduralFormula f{std::move(steps), std::nullopt};
    if (sig.loop_target) f.loop = ltl::Loop{*sig.loop_target, std::move(loop_unless)};
    return f;
  };
  auto candidate_formula = [&](const std::vector<ltl::ProceduralStep>& steps, std::size_t i) {
    return i + 1 < k ? with_tail(steps) : complete(steps, std::nullopt);
  };

  std::vector<ltl::ProceduralStep> steps;
  for (std::size_t i = 0; i < k; ++i) {
    ltl::ProceduralStep step{conjs[sig.sequence[i]], ltl::Hold{}, std::nullopt};
    const auto untils = filter_conditions(until_constraints(e, g, rows, i), rows, candidates);
    if (untils.empty()) {
      if (removed) throw Retry{};
      warnings.push_back("class " + sig.str() + ": no UNTIL condition matches step " + std::to_string(i + 1) +
                         "; using HOLD");
    } else {
      step.terminator = ltl::Until{select(untils, [&](const Condition& c) {
        auto trial = steps;
        trial.push_back({step.body, ltl::Until{c}, std::nullopt});
        return ll(candidate_formula(trial, i));
      })};
    }

    const auto unless_rows = unless_constraints(e, g, rows, i);
    if (unless_rows.needed()) {
      if (step.is_hold()) {
        warnings.push_back("class " + sig.str() + ": step " + std::to_string(i + 1) +
                           " is HOLD, so its early stops get no UNLESS");
      } else {
        const auto unlesses = filter_conditions(unless_rows, rows, candidates);
        if (unlesses.empty()) {
          if (removed) throw Retry{};
          warnings.push_back("class " + sig.str() + ": no UNLESS condition matches step " +
                             std::to_string(i + 1) + "; using FALSE");
          step.unless = Condition::False();
        } else {
          step.unless = select(unlesses, [&](const Condition& c) {
            auto trial = steps;
            trial.push_back(step);
            trial.back().unless = c;
            return ll(candidate_formula(trial, i));
          });
        }
      }
    }
    steps.push_back(std::move(step));
  }

  std::optional<Condition> loop_unless;
  if (sig.loop_target) {
    const auto loop_rows = loop_unless_constraints(e, g, rows);
    if (loop_rows.needed()) {
      const auto unlesses = filter_conditions(loop_rows, rows, candidates);
      if (unlesses.empty()) {
        if (removed) throw Retry{};
        warnings.push_back("class " + sig.str() + ": no UNLESS condition matches the loop; using FALSE");
        loop_unless = Condition::False();
      } else {
        loop_unless = select(unlesses, [&](const Condition& c) { return ll(complete(steps, c)); });
      }
    }
  }
  return complete(std::move(steps), std::move(loop_unless));
}

TransformResult run(const DnfFormula& f, const RowTable& rows, const TransformOptions& options,
                    const std::set<PredicateRef>& redundant) {
  TransformResult result;
  std::vector<Conjunction> conjs;
  bool removed = false;
  const auto reduced = remove_redundant(f.conjunctions, redundant);
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    removed |= reduced[i].size() != f.conjunctions[i].size();
    if (std::find(conjs.begin(), conjs.end(), reduced[i]) == conjs.end()) conjs.push_back(reduced[i]);
  }
  if (conjs.empty()) throw InvalidArgument("DNF formula has no conjunctions");
  if (conjs.size() > kMaxConjunctions) {
    throw InvalidArgument("DNF has " + std::to_string(conjs.size()) + " conjunctions; at most " +
                          std::to_string(kMaxConjunctions) + " are supported");
  }
  if (!removed && conjs.size() == 1) {
    // Still reject demonstrations the formula cannot explain.
    segment(conjs, rows);
    result.disjuncts.push_back({{{conjs[0], ltl::Hold{}, std::nullopt}}, std::nullopt});
    return result;
  }

  const auto g = build_transition_graph(conjs, rows);
  result.signatures = max_sequences(g);
  if (result.signatures.empty()) throw UnsatisfiedDemonstrations("the demonstrations contain no clicks");
  const auto classes = assign_classes(result.signatures, g);
  const auto candidates = candidate_conditions(options.allowed);
  if (candidates.empty()) result.warnings.push_back("no allowed predicates: every step falls back to HOLD");
  for (const auto& e : classes) {
    auto formula = assemble(e, g, rows, conjs, candidates, removed, options.model, result.warnings);
    if (std::find(result.disjuncts.begin(), result.disjuncts.end(), formula) == result.disjuncts.end()) {
      result.disjuncts.push_back(std::move(formula));
    }
  }
  return result;
}

}  // namespace

TransformResult transform(const DnfFormula& f, const RowTable& rows, const TransformOptions& options) {
  for (const auto& p : options.allowed) rows.registry().validate(p);
  for (const auto& p : options.redundant) rows.registry().validate(p);
  try {
    return run(f, rows, options, options.redundant);
  } catch (const Retry&) {
  }
  try {
    auto result = run(f, rows, options, {});
    result.retried_without_redundant = true;
    result.warnings.insert(result.warnings.begin(),
                           "no condition matched after removing redundant predicates; retried with none removed");
    return result;
  } catch (const Retry&) {
    throw UnsatisfiedDemonstrations("no procedural formula matches the demonstrations");
  }
}

// ---------------------------------------------------------------------------
// Pruning

PruneResult prune(const std::vector<ProceduralFormula>& psi, const RowTable& rows, const LikelihoodModel& model) {
  if (psi.empty()) throw InvalidArgument("nothing to prune: empty disjunction");
  PruneResult best;
  bool have = false;
  double best_unpruned = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < psi.size(); ++d) {
    ProceduralFormula current = psi[d];
    double current_ll = loglikelihood(rows, current, model);
    best_unpruned = std::max(best_unpruned, current_ll);
    std::vector<std::string> dropped;
    for (std::size_t s = 0; s < current.steps.size(); ++s) {
      std::size_t i = 0;
      while (i < current.steps[s].body.size()) {
        ProceduralFormula trial = current;
        trial.steps[s].body = current.steps[s].body.without(i);
        const double trial_ll = loglikelihood(rows, trial, model);
        if (clearly_better(trial_ll, current_ll)) {
          dropped.push_back(current.steps[s].body.literals()[i].str());
          current = std::move(trial);
          current_ll = trial_ll;
        } else {
          ++i;
        }
      }
    }
    if (!have || clearly_better(current_ll, best.loglik)) {
      best.formula = std::move(current);
      best.chosen = d;
      best.loglik = current_ll;
      best.dropped = std::move(dropped);
      have = true;
    }
  }
  best.loglik_unpruned = best_unpruned;
  return best;
}

}  // namespace forge::compile
