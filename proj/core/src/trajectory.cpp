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

#include "forge/trajectory.hpp"

#include <fstream>
#include <map>

#include "forge/error.hpp"

namespace forge::env {

using nlohmann::json;

std::size_t Trajectory::clicks() const {
  std::size_t n = 0;
  for (const auto& a : actions) n += a.is_click();
  return n;
}

std::vector<StateActionPair> replay(const Trajectory& t, const EnvSpec& spec) {
  if (t.ground_truth.values.size() != spec.size()) {
    throw InvalidArgument("trajectory '" + t.id + "' does not match environment " + spec.name());
  }
  std::vector<StateActionPair> pairs;
  pairs.reserve(t.actions.size() + 1);
  BeliefState belief(spec);
  for (std::size_t i = 0; i < t.actions.size(); ++i) {
    const auto& a = t.actions[i];
    if (auto why = illegal_reason(belief, a, spec)) {
      throw InvalidArgument("trajectory '" + t.id + "' action " + std::to_string(i) + ": " + *why);
    }
    pairs.push_back({belief, a});
    belief = step(belief, a, t.ground_truth, spec).belief;
  }
  if (!belief.terminated()) pairs.push_back({belief, MetaAction::Terminate()});
  return pairs;
}

BeliefState final_belief(const Trajectory& t, const EnvSpec& spec) {
  BeliefState belief(spec);
  for (const auto& a : t.actions) belief = step(belief, a, t.ground_truth, spec).belief;
  return belief;
}

void write_jsonl(std::ostream& out, const std::vector<Trajectory>& trajs) {
  for (const auto& t : trajs) {
    json header = {{"type", "trajectory"},  {"format_version", 1}, {"id", t.id},
                   {"env", t.env},          {"seed", t.seed},      {"ground_truth", t.ground_truth.values}};
    header["choice"] = t.choice ? json(*t.choice) : json(nullptr);
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      const auto& a = t.actions[i];
      json ev = {{"type", "event"}, {"trajectory", t.id}, {"t", i}};
      ev["ts"] = i < t.timestamps.size() && t.timestamps[i] ? json(*t.timestamps[i]) : json(nullptr);
      ev["action"] = a.is_click() ? "click" : "terminate";
      if (a.is_click()) {
        ev["node"] = a.node;
        ev["value"] = a.node < t.ground_truth.values.size() ? t.ground_truth.values[a.node] : 0.0;
      }
      out << ev.dump() << '\n';
    }
  }
}

std::vector<Trajectory> read_jsonl(std::istream& in) {
  std::vector<Trajectory> out;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "trajectory file line " + std::to_string(lineno) + ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(where + e.what());
    }
    try {
      const auto type = j.at("type").get<std::string>();
      if (type == "trajectory") {
        if (j.value("format_version", 0) != 1) throw InvalidArgument(where + "unsupported format_version");
        Trajectory t;
        t.id = j.at("id").get<std::string>();
        t.env = j.value("env", std::string());
        t.seed = j.value("seed", std::uint64_t{0});
        t.ground_truth.values = j.at("ground_truth").get<std::vector<double>>();
        if (j.contains("choice") && !j.at("choice").is_null()) {
          t.choice = j.at("choice").get<std::vector<NodeId>>();
        }
        if (!index.emplace(t.id, out.size()).second) {
          throw InvalidArgument(where + "duplicate trajectory id '" + t.id + "'");
        }
        out.push_back(std::move(t));
      } else if (type == "event") {
        auto it = index.find(j.at("trajectory").get<std::string>());
        if (it == index.end()) throw InvalidArgument(where + "event for an unknown trajectory");
        auto& t = out[it->second];
        if (j.at("t").get<std::size_t>() != t.actions.size()) {
          throw InvalidArgument(where + "events out of order");
        }
        const auto action = j.at("action").get<std::string>();
        if (action == "click") {
          t.actions.push_back(MetaAction::Click(j.at("node").get<NodeId>()));
        } else if (action == "terminate") {
          t.actions.push_back(MetaAction::Terminate());
        } else {
          throw InvalidArgument(where + "unknown action '" + action + "'");
        }
        const auto& ts = j.value("ts", json(nullptr));
        t.timestamps.push_back(ts.is_null() ? std::nullopt : std::optional(ts.get<std::int64_t>()));
      } else {
        throw InvalidArgument(where + "unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw InvalidArgument(where + e.what());
    }
  }
  // Simulated trajectories carry no timestamps at all.
  for (auto& t : out) {
    bool any = false;
    for (const auto& ts : t.timestamps) any |= ts.has_value();
    if (!any) t.timestamps.clear();
  }
  return out;
}

void save_trajectories(const std::string& path, const std::vector<Trajectory>& trajs) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_jsonl(out, trajs);
}

std::vector<Trajectory> load_trajectories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open trajectory file '" + path + "'");
  return read_jsonl(in);
}

}  // namespace forge::env
