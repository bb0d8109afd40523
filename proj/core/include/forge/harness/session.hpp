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

// Live task sessions: one ground truth per session, an append-only event
// log per session under a data directory, and per-trial metrics once the
// participant has made a final choice. Studies group sessions into blocks
// of trials.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/env.hpp"
#include "forge/error.hpp"
#include "forge/formula.hpp"
#include "forge/trajectory.hpp"

namespace forge::harness {

class NotFound : public Error {
 public:
  using Error::Error;
};

// The request is well-formed but conflicts with the resource state.
class Conflict : public Error {
 public:
  using Error::Error;
};

enum class Condition { kAided, kControl };
std::string to_string(Condition c);
Condition condition_from_string(const std::string& s);

// $FORGE_DATA_DIR, else "./forge-data".
std::string default_data_dir();
// $FORGE_RESOURCE_DIR, else the data directory of the source tree.
std::string default_resource_dir();

struct ServiceOptions {
  // Holds index.jsonl, sessions/ and studies/.
  std::string data_dir = default_data_dir();
  // Holds formulas/farsighted.ltl and dictionaries/<env>.json.
  std::string resource_dir = default_resource_dir();
  // Samples per agreement report.
  std::size_t agreement_sims = 1000;
};

struct CreateRequest {
  std::string env = "mortgage";
  nlohmann::json params = nlohmann::json::object();
  Condition condition = Condition::kControl;
  std::optional<std::uint64_t> seed;
};

CreateRequest create_request_from_json(const nlohmann::json& j);
env::MetaAction action_from_json(const nlohmann::json& j, const env::EnvSpec& spec);

struct StudyRequest {
  Condition condition = Condition::kControl;
  std::vector<std::string> blocks = {"mortgage", "roadtrip"};
  std::size_t trials_per_block = 8;
  std::optional<std::uint64_t> seed;
};

StudyRequest study_request_from_json(const nlohmann::json& j);

class SessionService {
 public:
  // Replays every session and study found in the data directory.
  explicit SessionService(ServiceOptions options);
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // Each returns the session snapshot after the operation. Throws NotFound
  // for unknown ids, IllegalAction or InvalidArgument for bad input and
  // Conflict for acting on a finished session.
  nlohmann::json create(const CreateRequest& req);
  nlohmann::json state(const std::string& id) const;
  nlohmann::json act(const std::string& id, const nlohmann::json& action);
  // Finalizes the trial with a start-to-leaf path, terminating first if
  // needed.
  nlohmann::json choose(const std::string& id, const std::vector<env::NodeId>& choice);
  nlohmann::json aid(const std::string& id) const;
  // Conflict until the session has a choice.
  nlohmann::json report(const std::string& id) const;

  // The recorded trajectory of a session.
  env::Trajectory trajectory(const std::string& id) const;

  nlohmann::json create_study(const StudyRequest& req);
  nlohmann::json study(const std::string& id) const;
  // Starts the next trial; Conflict while the current one has no choice or
  // when every trial has been started.
  nlohmann::json next_trial(const std::string& id);

  std::vector<std::string> session_ids() const;
  const ServiceOptions& options() const { return options_; }

 private:
  struct Session;
  struct Study;

  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<Study> find_study(const std::string& id) const;
  std::shared_ptr<Session> open(const CreateRequest& req, std::uint64_t seed, const std::string& id,
                                std::optional<std::string> study, std::optional<std::size_t> trial,
                                std::int64_t ts);
  std::string fresh_id();
  void append_index(const nlohmann::json& record);
  void load();

  ServiceOptions options_;
  ltl::ProceduralFormula strategy_;

  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, std::shared_ptr<Study>> studies_;
  std::mutex index_mutex_;
  std::mutex rng_mutex_;
  std::uint64_t rng_state_;
};

}  // namespace forge::harness
