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

#include "forge/harness/session.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "forge/controller.hpp"
#include "forge/formula_json.hpp"
#include "forge/harness/pipeline.hpp"
#include "forge/metrics.hpp"
#include "forge/translate.hpp"

#ifndef FORGE_DEFAULT_RESOURCE_DIR
#define FORGE_DEFAULT_RESOURCE_DIR "data"
#endif

namespace forge::harness {

namespace fs = std::filesystem;
using env::MetaAction;
using env::NodeId;
using nlohmann::json;

std::string to_string(Condition c) { return c == Condition::kAided ? "aided" : "control"; }

Condition condition_from_string(const std::string& s) {
  if (s == "aided") return Condition::kAided;
  if (s == "control") return Condition::kControl;
  throw InvalidArgument("unknown condition '" + s + "' (expected aided or control)");
}

std::string default_data_dir() {
  const char* dir = std::getenv("FORGE_DATA_DIR");
  return dir && *dir ? dir : "forge-data";
}

std::string default_resource_dir() {
  const char* dir = std::getenv("FORGE_RESOURCE_DIR");
  return dir && *dir ? dir : FORGE_DEFAULT_RESOURCE_DIR;
}

namespace {

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

// Request bodies come from clients; type errors become InvalidArgument.
template <typename F>
auto parse_request(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("invalid request: ") + e.what());
  }
}

std::optional<std::uint64_t> optional_seed(const json& j) {
  if (!j.contains("seed") || j.at("seed").is_null()) return std::nullopt;
  if (!j.at("seed").is_number_unsigned()) throw InvalidArgument("seed must be a non-negative integer");
  return j.at("seed").get<std::uint64_t>();
}

void append_line(const fs::path& path, const json& record) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  out << record.dump() << '\n';
  out.flush();
  if (!out) throw Error("cannot append to '" + path.string() + "'");
}

std::vector<json> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::vector<json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::parse_error&) {
      throw InvalidArgument(path.string() + ":" + std::to_string(n) + ": malformed record");
    }
  }
  return out;
}

json action_json(const MetaAction& a) {
  if (a.is_terminate()) return {{"action", "terminate"}};
  return {{"action", "click"}, {"node", a.node}};
}

}  // namespace

CreateRequest create_request_from_json(const json& j) {
  return parse_request([&] {
    if (!j.is_object()) throw InvalidArgument("request body must be an object");
    CreateRequest req;
    req.env = j.value("env", req.env);
    if (j.contains("params")) {
      if (!j.at("params").is_object()) throw InvalidArgument("params must be an object");
      req.params = j.at("params");
    }
    req.condition = condition_from_string(j.value("condition", std::string("control")));
    req.seed = optional_seed(j);
    return req;
  });
}

MetaAction action_from_json(const json& j, const env::EnvSpec& spec) {
  return parse_request([&] {
    if (!j.is_object()) throw InvalidArgument("request body must be an object");
    const auto kind = j.at("action").get<std::string>();
    if (kind == "terminate") return MetaAction::Terminate();
    if (kind != "click") throw InvalidArgument("unknown action '" + kind + "'");
    if (j.contains("label")) {
      const auto label = j.at("label").get<std::string>();
      for (NodeId n = 0; n < spec.size(); ++n) {
        if (spec.node(n).label == label) return MetaAction::Click(n);
      }
      throw InvalidArgument("no node labelled '" + label + "'");
    }
    if (!j.at("node").is_number_unsigned()) throw InvalidArgument("node must be a non-negative integer");
    const auto node = j.at("node").get<NodeId>();
    if (node >= spec.size()) throw InvalidArgument("node " + std::to_string(node) + " out of range");
    return MetaAction::Click(node);
  });
}

StudyRequest study_request_from_json(const json& j) {
  return parse_request([&] {
    if (!j.is_object()) throw InvalidArgument("request body must be an object");
    StudyRequest req;
    req.condition = condition_from_string(j.value("condition", std::string("control")));
    if (j.contains("blocks")) req.blocks = j.at("blocks").get<std::vector<std::string>>();
    req.trials_per_block = j.value("trials_per_block", req.trials_per_block);
    if (req.blocks.empty()) throw InvalidArgument("a study needs at least one block");
    if (req.trials_per_block == 0) throw InvalidArgument("trials_per_block must be positive");
    for (const auto& b : req.blocks) env::builtin_spec(b);
    req.seed = optional_seed(j);
    return req;
  });
}

struct SessionService::Session {
  Session(env::EnvSpec s, env::GroundTruth g) : spec(std::move(s)), belief(spec) {
    traj.ground_truth = std::move(g);
  }

  mutable std::mutex mutex;
  std::string id;
  json params;
  Condition condition = Condition::kControl;
  std::optional<std::string> study;
  std::optional<std::size_t> trial;
  std::int64_t created = 0;
  env::EnvSpec spec;
  env::BeliefState belief;
  env::Trajectory traj;
  std::optional<std::string> aid_text;
  std::optional<json> report;
  fs::path log;

  json snapshot() const {
    json nodes = json::array();
    for (NodeId n = 0; n < spec.size(); ++n) {
      const auto v = belief.value(n);
      nodes.push_back({{"id", n},
                       {"label", spec.node(n).label},
                       {"depth", spec.depth(n)},
                       {"revealed", v.has_value()},
                       {"value", v ? json(*v) : json(nullptr)}});
    }
    json out = {{"format_version", 1},
                {"id", id},
                {"env", spec.name()},
                {"condition", to_string(condition)},
                {"seed", traj.seed},
                {"study", study ? json(*study) : json(nullptr)},
                {"trial", trial ? json(*trial) : json(nullptr)},
                {"nodes", nodes},
                {"edges", spec.definition().edges},
                {"start", spec.start()},
                {"clicks", belief.clicks()},
                {"click_budget", spec.click_budget() ? json(*spec.click_budget()) : json(nullptr)},
                {"click_cost", spec.click_cost()},
                {"legal_clicks", env::legal_clicks(belief, spec)},
                {"terminated", belief.terminated()},
                {"finished", traj.choice.has_value()},
                {"choice", traj.choice ? json(*traj.choice) : json(nullptr)},
                {"events", traj.actions.size() + (traj.choice ? 1 : 0)}};
    if (aid_text) out["aid_text"] = *aid_text;
    return out;
  }

  void commit(const MetaAction& a, std::optional<std::int64_t> ts) {
    belief = env::step(belief, a, traj.ground_truth, spec).belief;
    traj.actions.push_back(a);
    traj.timestamps.push_back(ts);
  }
};

struct SessionService::Study {
  mutable std::mutex mutex;
  std::string id;
  Condition condition = Condition::kControl;
  std::uint64_t seed = 0;
  std::vector<std::string> blocks;  // in presentation order
  std::size_t trials_per_block = 8;
  std::vector<std::string> sessions;

  std::size_t total() const { return blocks.size() * trials_per_block; }

  json snapshot() const {
    return {{"format_version", 1},
            {"id", id},
            {"condition", to_string(condition)},
            {"seed", seed},
            {"blocks", blocks},
            {"trials_per_block", trials_per_block},
            {"trials", total()},
            {"sessions", sessions},
            {"current", sessions.empty() ? json(nullptr) : json(sessions.back())},
            {"started", sessions.size()}};
  }
};

namespace {

json compute_report(const env::Trajectory& t, const ltl::ProceduralFormula& f, const env::EnvSpec& spec,
                    std::size_t sims) {
  const auto agreement = metrics::click_agreement(t, f, spec, sims, t.seed);
  const auto fsq = metrics::fsq(t, spec);
  const auto perf = metrics::task_performance(t, spec);
  json performance = {{"kind", env::to_string(perf.kind)}, {"score", perf.score}};
  if (perf.optimal) performance["optimal"] = *perf.optimal;
  return {{"format_version", 1},
          {"id", t.id},
          {"env", t.env},
          {"clicks", t.clicks()},
          {"agreement",
           {{"consistent", agreement.consistent},
            {"inconsistent", agreement.inconsistent},
            {"missed", agreement.missed},
            {"agreement", agreement.agreement}}},
          {"fsq", {{"k", fsq.k}, {"farsighted_first_k", fsq.farsighted_first_k}, {"fsq", *fsq.fsq}}},
          {"performance", performance}};
}

}  // namespace

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  strategy_ = ltl::load_procedural(
      read_text_file((fs::path(options_.resource_dir) / "formulas" / "farsighted.ltl").string()));
  std::random_device rd;
  rng_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  fs::create_directories(fs::path(options_.data_dir) / "sessions");
  fs::create_directories(fs::path(options_.data_dir) / "studies");
  load();
}

SessionService::~SessionService() = default;

std::string SessionService::fresh_id() {
  std::lock_guard lock(rng_mutex_);
  rng_state_ = oracle::derive_seed(rng_state_, 1, 0);
  std::ostringstream ss;
  ss << std::hex;
  ss.width(16);
  ss.fill('0');
  ss << rng_state_;
  return ss.str();
}

void SessionService::append_index(const json& record) {
  std::lock_guard lock(index_mutex_);
  append_line(fs::path(options_.data_dir) / "index.jsonl", record);
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::shared_lock lock(registry_mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
  return it->second;
}

std::shared_ptr<SessionService::Study> SessionService::find_study(const std::string& id) const {
  std::shared_lock lock(registry_mutex_);
  const auto it = studies_.find(id);
  if (it == studies_.end()) throw NotFound("unknown study '" + id + "'");
  return it->second;
}

std::shared_ptr<SessionService::Session> SessionService::open(const CreateRequest& req, std::uint64_t seed,
                                                              const std::string& id,
                                                              std::optional<std::string> study,
                                                              std::optional<std::size_t> trial,
                                                              std::int64_t ts) {
  auto spec = env::builtin_spec(req.env, req.params);
  auto gt = env::sample_ground_truth(spec, seed);
  auto s = std::make_shared<Session>(std::move(spec), std::move(gt));
  s->id = id;
  s->params = req.params;
  s->condition = req.condition;
  s->study = std::move(study);
  s->trial = trial;
  s->created = ts;
  s->traj.id = id;
  s->traj.env = s->spec.name();
  s->traj.seed = seed;
  s->log = fs::path(options_.data_dir) / "sessions" / (id + ".jsonl");
  if (req.condition == Condition::kAided) {
    const auto dict = fs::path(options_.resource_dir) / "dictionaries" / (req.env + ".json");
    if (!fs::exists(dict)) throw InvalidArgument("no decision aid available for env '" + req.env + "'");
    s->aid_text = nl::translate(strategy_, nl::load_dictionary(dict.string()));
  }
  return s;
}

json SessionService::create(const CreateRequest& req) {
  std::uint64_t seed;
  if (req.seed) {
    seed = *req.seed;
  } else {
    std::lock_guard lock(rng_mutex_);
    rng_state_ = oracle::derive_seed(rng_state_, 2, 0);
    seed = rng_state_;
  }
  const auto ts = now_ms();
  auto s = open(req, seed, fresh_id(), std::nullopt, std::nullopt, ts);
  const json header = {{"type", "session"}, {"format_version", 1}, {"id", s->id},
                       {"env", req.env},    {"params", req.params},   {"seed", seed},
                       {"condition", to_string(req.condition)},      {"study", nullptr},
                       {"trial", nullptr},  {"ts", ts}};
  append_line(s->log, header);
  append_index({{"type", "session"}, {"id", s->id}, {"file", "sessions/" + s->id + ".jsonl"}});
  std::unique_lock lock(registry_mutex_);
  sessions_[s->id] = s;
  return s->snapshot();
}

json SessionService::state(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->snapshot();
}

json SessionService::act(const std::string& id, const json& body) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->traj.choice) throw Conflict("session '" + id + "' is finished");
  const auto a = action_from_json(body, s->spec);
  if (const auto why = env::illegal_reason(s->belief, a, s->spec)) throw IllegalAction(*why);
  const auto ts = now_ms();
  json event = action_json(a);
  event["type"] = "act";
  event["t"] = s->traj.actions.size();
  event["ts"] = ts;
  append_line(s->log, event);
  s->commit(a, ts);
  return s->snapshot();
}

json SessionService::choose(const std::string& id, const std::vector<NodeId>& choice) {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->traj.choice) throw Conflict("session '" + id + "' is finished");
  const auto& paths = s->spec.paths();
  if (std::find(paths.begin(), paths.end(), choice) == paths.end()) {
    throw InvalidArgument("choice is not a start-to-leaf path");
  }
  const auto ts = now_ms();
  append_line(s->log, {{"type", "choose"}, {"t", s->traj.actions.size()}, {"ts", ts}, {"choice", choice}});
  if (!s->belief.terminated()) s->commit(MetaAction::Terminate(), ts);
  s->traj.choice = choice;
  s->report = compute_report(s->traj, strategy_, s->spec, options_.agreement_sims);
  return s->snapshot();
}

json SessionService::aid(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  json out = {{"id", s->id}, {"condition", to_string(s->condition)}};
  out["aid_text"] = s->aid_text ? json(*s->aid_text) : json(nullptr);
  return out;
}

json SessionService::report(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (!s->report) throw Conflict("session '" + id + "' has no final choice yet");
  return *s->report;
}

env::Trajectory SessionService::trajectory(const std::string& id) const {
  const auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->traj;
}

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock lock(registry_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

namespace {

// Fisher-Yates driven by derive_seed so the order does not depend on the
// standard library's distributions.
std::vector<std::string> block_order(std::vector<std::string> blocks, std::uint64_t seed) {
  for (std::size_t i = blocks.size(); i > 1; --i) {
    const auto j = oracle::derive_seed(seed, i, 3) % i;
    std::swap(blocks[i - 1], blocks[j]);
  }
  return blocks;
}

}  // namespace

json SessionService::create_study(const StudyRequest& req) {
  auto st = std::make_shared<Study>();
  st->id = fresh_id();
  st->condition = req.condition;
  if (req.seed) {
    st->seed = *req.seed;
  } else {
    std::lock_guard lock(rng_mutex_);
    rng_state_ = oracle::derive_seed(rng_state_, 3, 0);
    st->seed = rng_state_;
  }
  st->blocks = block_order(req.blocks, st->seed);
  st->trials_per_block = req.trials_per_block;
  const auto file = fs::path(options_.data_dir) / "studies" / (st->id + ".jsonl");
  append_line(file, {{"type", "study"},
                     {"format_version", 1},
                     {"id", st->id},
                     {"condition", to_string(st->condition)},
                     {"seed", st->seed},
                     {"blocks", st->blocks},
                     {"trials_per_block", st->trials_per_block},
                     {"ts", now_ms()}});
  append_index({{"type", "study"}, {"id", st->id}, {"file", "studies/" + st->id + ".jsonl"}});
  std::unique_lock lock(registry_mutex_);
  studies_[st->id] = st;
  return st->snapshot();
}

json SessionService::study(const std::string& id) const {
  const auto st = find_study(id);
  std::lock_guard lock(st->mutex);
  return st->snapshot();
}

json SessionService::next_trial(const std::string& id) {
  const auto st = find_study(id);
  std::lock_guard lock(st->mutex);
  if (st->sessions.size() == st->total()) throw Conflict("study '" + id + "' has no trials left");
  if (!st->sessions.empty()) {
    const auto prev = find(st->sessions.back());
    std::lock_guard prev_lock(prev->mutex);
    if (!prev->traj.choice) throw Conflict("trial " + std::to_string(st->sessions.size() - 1) + " is not finished");
  }
  const auto trial = st->sessions.size();
  CreateRequest req;
  req.env = st->blocks[trial / st->trials_per_block];
  req.condition = st->condition;
  const auto seed = oracle::derive_seed(st->seed, trial, 2);
  const auto ts = now_ms();
  auto s = open(req, seed, fresh_id(), st->id, trial, ts);
  append_line(s->log, {{"type", "session"}, {"format_version", 1}, {"id", s->id},
                       {"env", req.env},    {"params", req.params},   {"seed", seed},
                       {"condition", to_string(req.condition)},      {"study", st->id},
                       {"trial", trial},    {"ts", ts}});
  append_index({{"type", "session"}, {"id", s->id}, {"file", "sessions/" + s->id + ".jsonl"}});
  st->sessions.push_back(s->id);
  {
    std::unique_lock reg_lock(registry_mutex_);
    sessions_[s->id] = s;
  }
  std::lock_guard s_lock(s->mutex);
  return s->snapshot();
}

void SessionService::load() {
  const auto index = fs::path(options_.data_dir) / "index.jsonl";
  if (!fs::exists(index)) return;
  std::vector<std::pair<std::size_t, std::shared_ptr<Session>>> study_sessions;
  for (const auto& entry : read_lines(index)) {
    const auto file = fs::path(options_.data_dir) / entry.at("file").get<std::string>();
    const auto records = read_lines(file);
    if (records.empty()) throw InvalidArgument(file.string() + ": empty log");
    const auto& h = records.front();
    if (h.value("format_version", 0) != 1) throw InvalidArgument(file.string() + ": unsupported format_version");
    if (entry.at("type") == "study") {
      auto st = std::make_shared<Study>();
      st->id = h.at("id");
      st->condition = condition_from_string(h.at("condition"));
      st->seed = h.at("seed");
      st->blocks = h.at("blocks").get<std::vector<std::string>>();
      st->trials_per_block = h.at("trials_per_block");
      studies_[st->id] = st;
      continue;
    }
    CreateRequest req;
    req.env = h.at("env");
    req.params = h.at("params");
    req.condition = condition_from_string(h.at("condition"));
    std::optional<std::string> study;
    std::optional<std::size_t> trial;
    if (!h.at("study").is_null()) {
      study = h.at("study").get<std::string>();
      trial = h.at("trial").get<std::size_t>();
    }
    auto s = open(req, h.at("seed"), h.at("id"), study, trial, h.at("ts"));
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& e = records[i];
      const auto ts = e.at("ts").get<std::int64_t>();
      if (e.at("type") == "act") {
        s->commit(action_from_json(e, s->spec), ts);
      } else if (e.at("type") == "choose") {
        if (!s->belief.terminated()) s->commit(MetaAction::Terminate(), ts);
        s->traj.choice = e.at("choice").get<std::vector<NodeId>>();
        s->report = compute_report(s->traj, strategy_, s->spec, options_.agreement_sims);
      } else {
        throw InvalidArgument(file.string() + ": unknown event type");
      }
    }
    if (trial) study_sessions.emplace_back(*trial, s);
    sessions_[s->id] = s;
  }
  std::sort(study_sessions.begin(), study_sessions.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [trial, s] : study_sessions) {
    const auto it = studies_.find(*s->study);
    if (it == studies_.end()) throw InvalidArgument("session '" + s->id + "' references an unknown study");
    it->second->sessions.push_back(s->id);
  }
}

}  // namespace forge::harness
