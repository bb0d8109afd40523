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

#include "forge/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "forge/error.hpp"

namespace forge::env {

using nlohmann::json;

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kTree:
      return "tree";
    case TaskKind::kRoadTrip:
      return "roadtrip";
    case TaskKind::kMortgage:
      return "mortgage";
  }
  return "tree";
}

TaskKind task_kind_from_string(const std::string& s) {
  if (s == "tree") return TaskKind::kTree;
  if (s == "roadtrip") return TaskKind::kRoadTrip;
  if (s == "mortgage") return TaskKind::kMortgage;
  throw InvalidArgument("unknown task kind '" + s + "'");
}

std::string to_string(const MetaAction& a) {
  return a.is_click() ? "click(" + std::to_string(a.node) + ")" : "terminate";
}

// ---------------------------------------------------------------------------
// EnvSpec

EnvSpec::EnvSpec(EnvDefinition def) : def_(std::move(def)) {
  const std::size_t n = def_.nodes.size();
  if (n < 2) throw InvalidArgument("environment needs a start node and at least one other node");
  if (def_.start >= n) throw InvalidArgument("start node out of range");
  if (def_.click_cost < 0) throw InvalidArgument("click cost must be non-negative");
  if (def_.click_budget && *def_.click_budget < 0) throw InvalidArgument("negative click budget");

  children_.assign(n, {});
  std::vector<int> indegree(n, 0);
  for (auto [from, to] : def_.edges) {
    if (from >= n || to >= n) throw InvalidArgument("edge references an unknown node");
    if (from == to) throw InvalidArgument("self loops are not allowed");
    children_[from].push_back(to);
    ++indegree[to];
  }
  for (auto& c : children_) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  for (NodeId v = 0; v < n; ++v) {
    if (v == def_.start && indegree[v] != 0) throw InvalidArgument("start node has incoming edges");
    if (v != def_.start && indegree[v] == 0) {
      throw InvalidArgument("node " + std::to_string(v) + " is unreachable from the start node");
    }
  }

  // Kahn's algorithm gives a topological order and detects cycles.
  std::vector<int> remaining(n, 0);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId c : children_[v]) ++remaining[c];
  std::vector<NodeId> order;
  std::vector<NodeId> ready = {def_.start};
  while (!ready.empty()) {
    const NodeId v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (NodeId c : children_[v]) {
      if (--remaining[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() != n) throw InvalidArgument("environment graph has a cycle");

  depth_.assign(n, 0);
  for (NodeId v : order) {
    for (NodeId c : children_[v]) depth_[c] = std::max(depth_[c], depth_[v] + 1);
  }
  max_depth_ = *std::max_element(depth_.begin(), depth_.end());

  for (NodeId v = 0; v < n; ++v) {
    if (v == def_.start) continue;
    clickable_.push_back(v);
    if (std::holds_alternative<std::monostate>(def_.nodes[v].reward.dist)) {
      throw InvalidArgument("node " + std::to_string(v) + " has no reward distribution");
    }
    if (const auto* d = std::get_if<DiscreteUniform>(&def_.nodes[v].reward.dist)) {
      if (d->support.empty()) throw InvalidArgument("empty support on node " + std::to_string(v));
    }
    if (const auto* t = std::get_if<TruncatedNormal>(&def_.nodes[v].reward.dist)) {
      if (!(t->sd > 0)) throw InvalidArgument("non-positive sd on node " + std::to_string(v));
    }
  }
  if (def_.forced) {
    if (def_.forced->nodes.empty()) throw InvalidArgument("forced value needs candidate nodes");
    for (NodeId v : def_.forced->nodes) {
      if (v >= n || v == def_.start) throw InvalidArgument("forced value on an invalid node");
    }
  }

  if (def_.farsighted.empty()) {
    for (NodeId v : clickable_)
      if (depth_[v] == max_depth_) farsighted_.push_back(v);
  } else {
    farsighted_ = def_.farsighted;
    std::sort(farsighted_.begin(), farsighted_.end());
    for (NodeId v : farsighted_) {
      if (v >= n || v == def_.start) throw InvalidArgument("far-sighted set names an invalid node");
    }
  }

  std::vector<NodeId> path;
  auto walk = [&](auto&& self, NodeId v) -> void {
    if (v != def_.start) path.push_back(v);
    if (children_[v].empty()) {
      paths_.push_back(path);
    } else {
      for (NodeId c : children_[v]) self(self, c);
    }
    if (v != def_.start) path.pop_back();
  };
  walk(walk, def_.start);
}

bool EnvSpec::is_farsighted(NodeId n) const {
  return std::binary_search(farsighted_.begin(), farsighted_.end(), n);
}

double EnvSpec::depth_weight(int depth) const {
  if (def_.depth_weights.empty()) return 1.0;
  if (depth < 1 || static_cast<std::size_t>(depth) > def_.depth_weights.size()) return 1.0;
  return def_.depth_weights[depth - 1];
}

double EnvSpec::support_max(NodeId n) const {
  const auto& reward = node(n).reward;
  double best = -std::numeric_limits<double>::infinity();
  if (const auto* d = std::get_if<DiscreteUniform>(&reward.dist)) {
    for (double v : d->support) best = std::max(best, reward.sign * v);
  } else if (const auto* t = std::get_if<TruncatedNormal>(&reward.dist)) {
    best = reward.sign < 0 ? -t->min : std::numeric_limits<double>::infinity();
  } else {
    best = 0.0;
  }
  if (def_.forced) {
    const auto& f = def_.forced->nodes;
    if (std::find(f.begin(), f.end(), n) != f.end()) best = std::max(best, def_.forced->value);
  }
  return best;
}

namespace {

double truncated_normal_mean(const TruncatedNormal& t) {
  const double alpha = (t.min - t.mean) / t.sd;
  const double pdf = std::exp(-0.5 * alpha * alpha) / std::sqrt(2.0 * M_PI);
  const double tail = 0.5 * std::erfc(alpha / std::sqrt(2.0));
  return t.mean + t.sd * pdf / tail;
}

}  // namespace

double EnvSpec::expected_reward(NodeId n) const {
  const auto& reward = node(n).reward;
  double base = 0.0;
  if (const auto* d = std::get_if<DiscreteUniform>(&reward.dist)) {
    base = reward.sign * std::accumulate(d->support.begin(), d->support.end(), 0.0) /
           static_cast<double>(d->support.size());
  } else if (const auto* t = std::get_if<TruncatedNormal>(&reward.dist)) {
    base = reward.sign * truncated_normal_mean(*t);
  }
  if (def_.forced) {
    const auto& f = def_.forced->nodes;
    if (std::find(f.begin(), f.end(), n) != f.end()) {
      const double k = static_cast<double>(f.size());
      base = def_.forced->value / k + base * (k - 1.0) / k;
    }
  }
  return base;
}

// ---------------------------------------------------------------------------
// BeliefState and dynamics

std::size_t BeliefState::clicks() const {
  return static_cast<std::size_t>(std::count_if(history_.begin(), history_.end(),
                                                [](const MetaAction& a) { return a.is_click(); }));
}

std::size_t BeliefState::revealed_count() const {
  return static_cast<std::size_t>(std::count_if(revealed_.begin(), revealed_.end(),
                                                [](const auto& v) { return v.has_value(); }));
}

std::optional<NodeId> BeliefState::last_click() const {
  for (auto it = history_.rbegin(); it != history_.rend(); ++it) {
    if (it->is_click()) return it->node;
  }
  return std::nullopt;
}

std::optional<std::string> illegal_reason(const BeliefState& b, const MetaAction& a,
                                          const EnvSpec& spec) {
  if (b.terminated()) return "trial already terminated";
  if (a.is_terminate()) return std::nullopt;
  if (a.node >= spec.size()) return "unknown node " + std::to_string(a.node);
  if (a.node == spec.start()) return "the start node cannot be clicked";
  if (b.is_revealed(a.node)) return "node " + std::to_string(a.node) + " already revealed";
  if (spec.click_budget() && b.clicks() >= static_cast<std::size_t>(*spec.click_budget())) {
    return "budget exhausted: only " + std::to_string(*spec.click_budget()) + " clicks allowed";
  }
  return std::nullopt;
}

bool is_legal(const BeliefState& b, const MetaAction& a, const EnvSpec& spec) {
  return !illegal_reason(b, a, spec).has_value();
}

std::vector<NodeId> legal_clicks(const BeliefState& b, const EnvSpec& spec) {
  std::vector<NodeId> out;
  if (b.terminated()) return out;
  if (spec.click_budget() && b.clicks() >= static_cast<std::size_t>(*spec.click_budget())) return out;
  for (NodeId n : spec.clickable()) {
    if (!b.is_revealed(n)) out.push_back(n);
  }
  return out;
}

StepResult step(const BeliefState& b, const MetaAction& a, const GroundTruth& gt,
                const EnvSpec& spec) {
  if (b.revealed_.size() != spec.size() || gt.values.size() != spec.size()) {
    throw InvalidArgument("belief or ground truth does not match the environment");
  }
  if (auto why = illegal_reason(b, a, spec)) throw IllegalAction(*why);
  StepResult r{b, 0.0};
  r.belief.history_.push_back(a);
  if (a.is_click()) {
    r.belief.revealed_[a.node] = gt.values[a.node];
    r.cost = spec.click_cost();
  } else {
    r.belief.terminated_ = true;
  }
  return r;
}

double expected_score(const BeliefState& b, const EnvSpec& spec) {
  if (spec.paths().empty()) throw InvalidArgument("expected score needs a path structure");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& path : spec.paths()) {
    double sum = 0.0;
    for (NodeId n : path) sum += b.value(n).value_or(0.0);
    best = std::max(best, sum);
  }
  return best - spec.click_cost() * static_cast<double>(b.clicks());
}

double mortgage_total_cost(std::span<const double> rates, std::span<const double> weights) {
  if (rates.size() != weights.size()) throw InvalidArgument("rates and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) total += rates[i] * weights[i];
  return total;
}

std::vector<NodeId> best_choice(const BeliefState& b, const EnvSpec& spec) {
  const std::vector<NodeId>* best = nullptr;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& path : spec.paths()) {
    double sum = 0.0;
    for (NodeId n : path) {
      sum += spec.depth_weight(spec.depth(n)) * b.value(n).value_or(spec.expected_reward(n));
    }
    if (sum > best_value) {
      best_value = sum;
      best = &path;
    }
  }
  return best ? *best : std::vector<NodeId>{};
}

// ---------------------------------------------------------------------------
// Ground truth

namespace {

double sample(const RewardModel& reward, std::mt19937_64& rng) {
  if (const auto* d = std::get_if<DiscreteUniform>(&reward.dist)) {
    std::uniform_int_distribution<std::size_t> pick(0, d->support.size() - 1);
    return reward.sign * d->support[pick(rng)];
  }
  if (const auto* t = std::get_if<TruncatedNormal>(&reward.dist)) {
    std::normal_distribution<double> normal(t->mean, t->sd);
    for (;;) {
      const double x = normal(rng);
      if (x >= t->min) return reward.sign * x;
    }
  }
  return 0.0;
}

}  // namespace

GroundTruth sample_ground_truth(const EnvSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GroundTruth gt;
  gt.values.assign(spec.size(), 0.0);
  for (NodeId n : spec.clickable()) gt.values[n] = sample(spec.node(n).reward, rng);
  if (const auto& forced = spec.forced()) {
    std::uniform_int_distribution<std::size_t> pick(0, forced->nodes.size() - 1);
    gt.values[forced->nodes[pick(rng)]] = forced->value;
  }
  return gt;
}

// ---------------------------------------------------------------------------
// Builtin environments

namespace {

template <typename T>
T param(const json& params, const char* key, T fallback) {
  if (!params.contains(key)) return fallback;
  try {
    return params.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument(std::string("invalid value for parameter '") + key + "'");
  }
}

void reject_unknown(const json& params, std::initializer_list<const char*> known) {
  if (!params.is_object()) throw InvalidArgument("environment params must be an object");
  for (const auto& [key, _] : params.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw InvalidArgument("unknown environment parameter '" + key + "'");
    }
  }
}

// Equal-probability bins of Normal(0, sd), each represented by its
// mid-quantile rounded to an integer.
std::vector<double> discretized_normal(double sd, int bins) {
  boost::math::normal_distribution<double> standard;
  std::vector<double> support;
  for (int i = 0; i < bins; ++i) {
    const double q = (2.0 * i + 1.0) / (2.0 * bins);
    support.push_back(std::round(sd * boost::math::quantile(standard, q)));
  }
  return support;
}

EnvSpec mouselab3(const json& params) {
  reject_unknown(params, {"sds", "branching", "bins", "click_cost"});
  const auto sds = param<std::vector<double>>(params, "sds", {6.0, 12.0, 24.0});
  const auto branching = param<std::vector<int>>(params, "branching", {3, 1, 2});
  const int bins = param<int>(params, "bins", 4);
  if (sds.empty() || sds.size() != branching.size()) {
    throw InvalidArgument("mouselab3 needs one sd and one branching factor per level");
  }
  if (bins < 2) throw InvalidArgument("mouselab3 needs at least two bins");
  for (std::size_t i = 0; i < sds.size(); ++i) {
    if (!(sds[i] > 0) || branching[i] < 1) throw InvalidArgument("invalid mouselab3 level");
    if (i > 0 && !(sds[i] > sds[i - 1])) {
      throw InvalidArgument("mouselab3 sds must increase with depth");
    }
  }

  EnvDefinition def;
  def.name = "mouselab3";
  def.kind = TaskKind::kTree;
  def.click_cost = param<double>(params, "click_cost", 1.0);
  def.params = params;
  def.nodes.push_back({"start", {}});
  std::vector<NodeId> frontier = {0};
  for (std::size_t level = 0; level < sds.size(); ++level) {
    const auto support = discretized_normal(sds[level], bins);
    std::vector<NodeId> next;
    for (NodeId parent : frontier) {
      for (int b = 0; b < branching[level]; ++b) {
        const NodeId id = def.nodes.size();
        def.nodes.push_back({"node " + std::to_string(id), {DiscreteUniform{support}, 1.0}});
        def.edges.emplace_back(parent, id);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
  }
  return EnvSpec(std::move(def));
}

const char* const kCityNames[] = {
    "Ruby Ridge", "Ashford",    "Birchwood", "Cold Creek", "Dunmore",  "Elkton",
    "Fairhaven",  "Glenrock",   "Harlow",    "Ironwood",   "Juniper",  "Kingsbay",
    "Larkspur",   "Millbrook",  "Northgate", "Oakvale",    "Pinecrest", "Quarry Hill",
    "Riverton",   "Stonebridge", "Thornbury", "Upton",     "Valemont", "Westfield"};

EnvSpec roadtrip(const json& params) {
  reject_unknown(params, {"layers", "airports", "click_cost"});
  const auto layers = param<std::vector<int>>(params, "layers", {3, 3});
  const int airports = param<int>(params, "airports", 3);
  if (airports < 1) throw InvalidArgument("roadtrip needs at least one airport");
  for (int w : layers)
    if (w < 1) throw InvalidArgument("roadtrip layers must be non-empty");

  std::vector<int> widths = layers;
  widths.push_back(airports);
  std::size_t total = 1;
  for (int w : widths) total += static_cast<std::size_t>(w);
  if (total > std::size(kCityNames)) throw InvalidArgument("roadtrip map too large");

  EnvDefinition def;
  def.name = "roadtrip";
  def.kind = TaskKind::kRoadTrip;
  def.click_cost = param<double>(params, "click_cost", 10.0);
  def.params = params;
  def.nodes.push_back({kCityNames[0], {}});
  const DiscreteUniform stopover{{-30.0, -35.0, -40.0, -45.0}};
  const DiscreteUniform airport{{-260.0, -290.0, -320.0, -350.0, -380.0}};

  std::vector<NodeId> previous = {0};
  for (std::size_t layer = 0; layer < widths.size(); ++layer) {
    const bool last = layer + 1 == widths.size();
    std::vector<NodeId> current;
    for (int i = 0; i < widths[layer]; ++i) {
      const NodeId id = def.nodes.size();
      std::string label = kCityNames[id];
      if (last) label += " (airport)";
      def.nodes.push_back({label, {last ? airport : stopover, 1.0}});
      current.push_back(id);
    }
    // Roads join cities in adjacent layers whose positions, scaled to the
    // wider layer, are at most one slot apart.
    const double scale = previous.size() == 1 ? 0.0
                                              : double(current.size() - 1) / double(previous.size() - 1);
    for (std::size_t b = 0; b < current.size(); ++b) {
      bool linked = false;
      std::size_t nearest = 0;
      for (std::size_t a = 0; a < previous.size(); ++a) {
        const double gap = std::abs(double(a) * scale - double(b));
        if (gap < std::abs(double(nearest) * scale - double(b))) nearest = a;
        if (previous.size() == 1 || current.size() == 1 || gap <= 1.0 + 1e-9) {
          def.edges.emplace_back(previous[a], current[b]);
          linked = true;
        }
      }
      if (!linked) def.edges.emplace_back(previous[nearest], current[b]);
    }
    if (last) def.forced = ForcedValue{current, -20.0};
    previous = std::move(current);
  }
  return EnvSpec(std::move(def));
}

EnvSpec mortgage(const json& params) {
  reject_unknown(params, {"sd", "means", "weights", "budget", "min"});
  const double sd = param<double>(params, "sd", 0.44);
  const double min = param<double>(params, "min", 0.0);
  const auto means = param<std::vector<std::vector<double>>>(
      params, "means", {{0.5, 1.5, 2.5}, {1.5, 1.5, 1.5}, {2.5, 1.5, 0.5}});
  const auto weights = param<std::vector<double>>(params, "weights", {1.0, 5.0, 25.0});
  const int budget = param<int>(params, "budget", 3);
  if (!(sd > 0)) throw InvalidArgument("mortgage sd must be positive");
  if (means.empty()) throw InvalidArgument("mortgage needs at least one plan");
  for (const auto& plan : means) {
    if (plan.size() != weights.size()) {
      throw InvalidArgument("every mortgage plan needs one mean per period");
    }
  }

  EnvDefinition def;
  def.name = "mortgage";
  def.kind = TaskKind::kMortgage;
  def.click_cost = 0.0;
  def.click_budget = budget;
  def.depth_weights = weights;
  def.params = params;
  def.nodes.push_back({"bank", {}});
  static const char* const kPeriods[] = {"2022", "2023-2027", "2028-2052"};
  for (std::size_t p = 0; p < means.size(); ++p) {
    NodeId parent = 0;
    for (std::size_t q = 0; q < means[p].size(); ++q) {
      const NodeId id = def.nodes.size();
      std::string label = std::string("Plan ") + char('A' + p) + " ";
      label += q < std::size(kPeriods) ? kPeriods[q] : "period " + std::to_string(q + 1);
      def.nodes.push_back({label, {TruncatedNormal{means[p][q], sd, min}, -1.0}});
      def.edges.emplace_back(parent, id);
      parent = id;
    }
  }
  return EnvSpec(std::move(def));
}

}  // namespace

EnvSpec builtin_spec(const std::string& name, const json& params) {
  if (name == "mouselab3") return mouselab3(params);
  if (name == "roadtrip") return roadtrip(params);
  if (name == "mortgage") return mortgage(params);
  throw InvalidArgument("unknown environment '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json distribution_to_json(const RewardModel& r) {
  if (const auto* d = std::get_if<DiscreteUniform>(&r.dist)) {
    return {{"type", "discrete_uniform"}, {"support", d->support}, {"sign", r.sign}};
  }
  if (const auto* t = std::get_if<TruncatedNormal>(&r.dist)) {
    return {{"type", "truncated_normal"}, {"mean", t->mean}, {"sd", t->sd}, {"min", t->min},
            {"sign", r.sign}};
  }
  return nullptr;
}

RewardModel distribution_from_json(const json& j) {
  if (j.is_null()) return {};
  RewardModel r;
  r.sign = j.value("sign", 1.0);
  const auto type = j.at("type").get<std::string>();
  if (type == "discrete_uniform") {
    r.dist = DiscreteUniform{j.at("support").get<std::vector<double>>()};
  } else if (type == "truncated_normal") {
    r.dist = TruncatedNormal{j.at("mean").get<double>(), j.at("sd").get<double>(),
                             j.value("min", -std::numeric_limits<double>::infinity())};
  } else {
    throw InvalidArgument("unknown distribution type '" + type + "'");
  }
  return r;
}

}  // namespace

json to_json(const EnvSpec& spec) {
  const auto& d = spec.definition();
  json nodes = json::array();
  for (std::size_t i = 0; i < d.nodes.size(); ++i) {
    nodes.push_back({{"id", i}, {"label", d.nodes[i].label}, {"reward", distribution_to_json(d.nodes[i].reward)}});
  }
  json edges = json::array();
  for (auto [a, b] : d.edges) edges.push_back({a, b});
  json j = {{"format_version", 1},
            {"name", d.name},
            {"kind", to_string(d.kind)},
            {"start", d.start},
            {"click_cost", d.click_cost},
            {"nodes", nodes},
            {"edges", edges}};
  j["click_budget"] = d.click_budget ? json(*d.click_budget) : json(nullptr);
  if (d.forced) j["forced"] = {{"nodes", d.forced->nodes}, {"value", d.forced->value}};
  if (!d.farsighted.empty()) j["farsighted"] = d.farsighted;
  if (!d.depth_weights.empty()) j["depth_weights"] = d.depth_weights;
  if (!d.params.empty()) j["params"] = d.params;
  return j;
}

EnvSpec spec_from_json(const json& j) {
  if (j.value("format_version", 0) != 1) throw InvalidArgument("unsupported environment format_version");
  if (j.contains("builtin")) {
    return builtin_spec(j.at("builtin").get<std::string>(), j.value("params", json::object()));
  }
  try {
    EnvDefinition d;
    d.name = j.at("name").get<std::string>();
    d.kind = task_kind_from_string(j.value("kind", std::string("tree")));
    d.start = j.value("start", std::size_t{0});
    d.click_cost = j.value("click_cost", 0.0);
    if (j.contains("click_budget") && !j.at("click_budget").is_null()) {
      d.click_budget = j.at("click_budget").get<int>();
    }
    const auto& nodes = j.at("nodes");
    d.nodes.resize(nodes.size());
    for (const auto& n : nodes) {
      const auto id = n.at("id").get<std::size_t>();
      if (id >= d.nodes.size()) throw InvalidArgument("node id out of range");
      d.nodes[id] = {n.value("label", "node " + std::to_string(id)), distribution_from_json(n.value("reward", json(nullptr)))};
    }
    for (const auto& e : j.at("edges")) d.edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    if (j.contains("forced")) {
      d.forced = ForcedValue{j.at("forced").at("nodes").get<std::vector<NodeId>>(),
                             j.at("forced").at("value").get<double>()};
    }
    if (j.contains("farsighted")) d.farsighted = j.at("farsighted").get<std::vector<NodeId>>();
    if (j.contains("depth_weights")) d.depth_weights = j.at("depth_weights").get<std::vector<double>>();
    if (j.contains("params")) d.params = j.at("params");
    return EnvSpec(std::move(d));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed environment document: ") + e.what());
  }
}

EnvSpec load_spec(const std::string& name_or_path, const json& params) {
  if (name_or_path == "mouselab3" || name_or_path == "roadtrip" || name_or_path == "mortgage") {
    return builtin_spec(name_or_path, params);
  }
  std::ifstream in(name_or_path);
  if (!in) throw InvalidArgument("cannot open environment file '" + name_or_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return spec_from_json(json::parse(ss.str()));
}

}  // namespace forge::env
