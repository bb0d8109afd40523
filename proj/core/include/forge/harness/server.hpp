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

// HTTP front end of the session service. Routes live under /api/v1:
//
//   POST /sessions                 {"env","params","condition","seed"}
//   GET  /sessions/{id}
//   POST /sessions/{id}/act        {"action":"click","node"|"label"} or {"action":"terminate"}
//   POST /sessions/{id}/choose     {"choice":[node ids]}
//   GET  /sessions/{id}/aid
//   GET  /sessions/{id}/report
//   POST /studies                  {"condition","blocks","trials_per_block","seed"}
//   GET  /studies/{id}
//   POST /studies/{id}/next
//   GET  /envs/{name}
//
// Errors are {"error": message} with 400 for invalid input or illegal
// actions, 404 for unknown resources and 409 for state conflicts.

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "forge/harness/session.hpp"

namespace forge::harness {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Dispatches one request; never throws.
ApiResponse handle_request(SessionService& service, const std::string& method, const std::string& path,
                           const std::string& body);

class ApiServer {
 public:
  explicit ApiServer(SessionService& service);
  ~ApiServer();

  // Port 0 picks a free port. Returns the bound port; throws Error when
  // binding fails.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace forge::harness
