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

#include "forge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "forge/controller.hpp"
#include "forge/error.hpp"

namespace forge::metrics {

double expected_strategy_clicks(const ltl::ProceduralFormula& f, const EnvSpec& spec,
                                const env::GroundTruth& gt, std::size_t n_sims, std::uint64_t seed,
                                const pred::Registry& reg) {
  if (n_sims == 0) throw InvalidArgument("n_sims must be at least 1");
  oracle::FormulaPolicy policy(f, spec, reg);
  double total = 0.0;
  for (std::size_t i = 0; i < n_sims; ++i) {
    std::mt19937_64 rng(oracle::derive_seed(seed, i, 1));
    total += static_cast<double>(oracle::run_episode(policy, spec, gt, rng).clicks());
  }
  return total / static_cast<double>(n_sims);
}

AgreementReport click_agreement(const Trajectory& t, const ltl::ProceduralFormula& f, const EnvSpec& spec,
                                std::size_t n_sims, std::uint64_t seed, const pred::Registry& reg) {
  if (!t.env.empty() && t.env != spec.name()) {
    throw InvalidArgument("trajectory '" + t.id + "' was recorded on " + t.env + ", not " + spec.name());
  }
  if (t.ground_truth.values.size() != spec.size()) {
    throw InvalidArgument("trajectory '" + t.id + "' does not match environment " + spec.name());
  }
  const auto trace = oracle::consistency_trace(t, f, spec, reg);
  AgreementReport r;
  for (std::size_t i = 0; i < t.actions.size(); ++i) {
    if (!t.actions[i].is_click()) continue;
    (trace[i] ? r.consistent : r.inconsistent) += 1;
  }
  if (t.ends_with_terminate() && !trace.back()) {
    const double expected = expected_strategy_clicks(f, spec, t.ground_truth, n_sims, seed, reg);
    r.missed = std::max(0.0, expected - static_cast<double>(t.clicks()));
  }
  const double denom = static_cast<double>(r.consistent + r.inconsistent) + r.missed;
  r.agreement = denom > 0 ? static_cast<double>(r.consistent) / denom : 1.0;
  return r;
}

FsqReport fsq(const Trajectory& t, const EnvSpec& spec, FsqEmpty empty) {
  std::vector<env::NodeId> clicks;
  for (const auto& a : t.actions) {
    if (a.is_click()) clicks.push_back(a.node);
  }
  FsqReport r;
  r.k = std::min(spec.farsighted().size(), clicks.size());
  for (std::size_t i = 0; i < r.k; ++i) r.farsighted_first_k += spec.is_farsighted(clicks[i]);
  if (r.k > 0) {
    r.fsq = static_cast<double>(r.farsighted_first_k) / static_cast<double>(r.k);
  } else if (empty == FsqEmpty::kZero) {
    r.fsq = 0.0;
  }
  return r;
}

PerformanceReport task_performance(const Trajectory& t, const EnvSpec& spec) {
  PerformanceReport r;
  r.kind = spec.kind();
  if (spec.kind() == env::TaskKind::kTree) {
    r.score = env::expected_score(env::final_belief(t, spec), spec);
    return r;
  }
  if (!t.choice) throw InvalidArgument("trajectory '" + t.id + "' has no final choice");
  const auto& paths = spec.paths();
  if (std::find(paths.begin(), paths.end(), *t.choice) == paths.end()) {
    throw InvalidArgument("trajectory '" + t.id + "' chose a route that is not a start-to-end path");
  }
  if (spec.kind() == env::TaskKind::kRoadTrip) {
    double route = 0.0;
    for (env::NodeId n : *t.choice) route += t.ground_truth.values[n];
    r.score = kRoadTripBudget + route - spec.click_cost() * static_cast<double>(t.clicks());
    return r;
  }
  auto plan_cost = [&](const std::vector<env::NodeId>& plan) {
    std::vector<double> rates, weights;
    for (env::NodeId n : plan) {
      rates.push_back(-t.ground_truth.values[n]);
      weights.push_back(spec.depth_weight(spec.depth(n)));
    }
    return env::mortgage_total_cost(rates, weights);
  };
  r.score = plan_cost(*t.choice);
  double best = r.score;
  for (const auto& p : paths) best = std::min(best, plan_cost(p));
  r.optimal = r.score <= best + 1e-9 * std::max(1.0, std::abs(best));
  return r;
}

std::string to_string(Deviation d) {
  switch (d) {
    case Deviation::kNoClicks:
      return "no_clicks";
    case Deviation::kImmediateFirst:
      return "first_click_immediate";
    case Deviation::kIntermediateFirst:
      return "first_click_intermediate";
    case Deviation::kFarsightedThenDeviated:
      return "farsighted_then_deviated";
  }
  return "unknown";
}

std::size_t DeviationProfile::non_compliant() const {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  return n;
}

std::array<double, kDeviationKinds> DeviationProfile::fractions() const {
  std::array<double, kDeviationKinds> out{};
  const std::size_t n = non_compliant();
  if (n == 0) return out;
  for (std::size_t i = 0; i < kDeviationKinds; ++i) out[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  return out;
}

Deviation classify_deviation(const Trajectory& t, const EnvSpec& spec) {
  for (const auto& a : t.actions) {
    if (!a.is_click()) continue;
    if (spec.is_farsighted(a.node)) return Deviation::kFarsightedThenDeviated;
    return spec.depth(a.node) == 1 ? Deviation::kImmediateFirst : Deviation::kIntermediateFirst;
  }
  return Deviation::kNoClicks;
}

DeviationProfile deviation_profile(const std::vector<Trajectory>& trajs, const ltl::ProceduralFormula& f,
                                   const EnvSpec& spec, const pred::Registry& reg) {
  DeviationProfile p;
  for (const auto& t : trajs) {
    const auto trace = oracle::consistency_trace(t, f, spec, reg);
    if (std::all_of(trace.begin(), trace.end(), [](bool b) { return b; })) {
      ++p.compliant;
    } else {
      ++p.counts[static_cast<std::size_t>(classify_deviation(t, spec))];
    }
  }
  return p;
}

}  // namespace forge::metrics
