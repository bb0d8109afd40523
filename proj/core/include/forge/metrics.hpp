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

// Evaluation measures for recorded or simulated trials.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/env.hpp"
#include "forge/formula.hpp"
#include "forge/predicates.hpp"
#include "forge/trajectory.hpp"

namespace forge::metrics {

using env::EnvSpec;
using env::Trajectory;

struct AgreementReport {
  std::size_t consistent = 0;
  std::size_t inconsistent = 0;
  // Expected clicks the strategy would still have made after an early stop.
  double missed = 0.0;
  // consistent / (consistent + inconsistent + missed); 1 when nothing was
  // clicked and nothing was missed.
  double agreement = 1.0;
};

// Mean number of clicks of the formula's controller over `n_sims` seeded
// runs on a fixed ground truth.
double expected_strategy_clicks(const ltl::ProceduralFormula& f, const EnvSpec& spec,
                                const env::GroundTruth& gt, std::size_t n_sims, std::uint64_t seed,
                                const pred::Registry& reg = pred::Registry::builtin());

// Classifies every click by consistency with the formula. When the trial
// ended with a TERMINATE the strategy would not have taken, the shortfall
// against expected_strategy_clicks counts as missed.
AgreementReport click_agreement(const Trajectory& t, const ltl::ProceduralFormula& f, const EnvSpec& spec,
                                std::size_t n_sims = 1000, std::uint64_t seed = 0,
                                const pred::Registry& reg = pred::Registry::builtin());

enum class FsqEmpty { kZero, kExclude };

struct FsqReport {
  std::size_t k = 0;
  std::size_t farsighted_first_k = 0;
  // nullopt only for a zero-click trial under FsqEmpty::kExclude.
  std::optional<double> fsq;
};

// Share of far-sighted nodes among the first k clicks, k being the number
// of far-sighted nodes, reduced to the number of clicks when fewer.
FsqReport fsq(const Trajectory& t, const EnvSpec& spec, FsqEmpty empty = FsqEmpty::kZero);

struct PerformanceReport {
  env::TaskKind kind = env::TaskKind::kTree;
  // Tree: expected score. Road trip: remaining budget out of 500.
  // Mortgage: weighted total cost of the chosen plan (lower is better).
  double score = 0.0;
  // Mortgage only: the chosen plan has the lowest total cost.
  std::optional<bool> optimal;
};

inline constexpr double kRoadTripBudget = 500.0;

// Throws InvalidArgument when a road trip or mortgage trial has no valid
// final choice.
PerformanceReport task_performance(const Trajectory& t, const EnvSpec& spec);

enum class Deviation { kNoClicks, kImmediateFirst, kIntermediateFirst, kFarsightedThenDeviated };
inline constexpr std::size_t kDeviationKinds = 4;
std::string to_string(Deviation d);

struct DeviationProfile {
  std::array<std::size_t, kDeviationKinds> counts{};
  std::size_t compliant = 0;

  std::size_t non_compliant() const;
  // Fractions over non-compliant trials; all zero when there are none.
  std::array<double, kDeviationKinds> fractions() const;
};

// Trials with at least one action the formula would not take, classified
// by how they started.
DeviationProfile deviation_profile(const std::vector<Trajectory>& trajs, const ltl::ProceduralFormula& f,
                                   const EnvSpec& spec, const pred::Registry& reg = pred::Registry::builtin());
Deviation classify_deviation(const Trajectory& t, const EnvSpec& spec);

}  // namespace forge::metrics
