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

#include "forge/harness/server.hpp"

#include <regex>

#include <httplib.h>

namespace forge::harness {

using nlohmann::json;

namespace {

const std::regex kSession(R"(/api/v1/sessions/([0-9a-f]+))");
const std::regex kSessionOp(R"(/api/v1/sessions/([0-9a-f]+)/(act|choose|aid|report))");
const std::regex kStudy(R"(/api/v1/studies/([0-9a-f]+))");
const std::regex kStudyNext(R"(/api/v1/studies/([0-9a-f]+)/next)");
const std::regex kEnv(R"(/api/v1/envs/([A-Za-z0-9_]+))");

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error&) {
    throw InvalidArgument("request body is not valid JSON");
  }
}

json dispatch(SessionService& service, const std::string& method, const std::string& path,
              const std::string& body, int& status) {
  std::smatch m;
  const bool get = method == "GET";
  const bool post = method == "POST";
  if (path == "/api/v1/sessions" && post) {
    status = 201;
    return service.create(create_request_from_json(parse_body(body)));
  }
  if (std::regex_match(path, m, kSession) && get) return service.state(m[1]);
  if (std::regex_match(path, m, kSessionOp)) {
    const std::string id = m[1];
    const std::string op = m[2];
    if (op == "act" && post) return service.act(id, parse_body(body));
    if (op == "choose" && post) {
      const auto j = parse_body(body);
      if (!j.is_object() || !j.contains("choice") || !j.at("choice").is_array()) {
        throw InvalidArgument("choose needs a \"choice\" array of node ids");
      }
      std::vector<env::NodeId> choice;
      for (const auto& n : j.at("choice")) {
        if (!n.is_number_unsigned()) throw InvalidArgument("choice entries must be node ids");
        choice.push_back(n.get<env::NodeId>());
      }
      return service.choose(id, choice);
    }
    if (op == "aid" && get) return service.aid(id);
    if (op == "report" && get) return service.report(id);
  }
  if (path == "/api/v1/studies" && post) {
    status = 201;
    return service.create_study(study_request_from_json(parse_body(body)));
  }
  if (std::regex_match(path, m, kStudy) && get) return service.study(m[1]);
  if (std::regex_match(path, m, kStudyNext) && post) {
    status = 201;
    return service.next_trial(m[1]);
  }
  if (std::regex_match(path, m, kEnv) && get) {
    try {
      return env::to_json(env::builtin_spec(m[1]));
    } catch (const InvalidArgument&) {
      throw NotFound("unknown env '" + m[1].str() + "'");
    }
  }
  throw NotFound("no route for " + method + " " + path);
}

}  // namespace

ApiResponse handle_request(SessionService& service, const std::string& method, const std::string& path,
                           const std::string& body) {
  ApiResponse r;
  try {
    r.body = dispatch(service, method, path, body, r.status);
  } catch (const NotFound& e) {
    r = {404, {{"error", e.what()}}};
  } catch (const Conflict& e) {
    r = {409, {{"error", e.what()}}};
  } catch (const IllegalAction& e) {
    r = {400, {{"error", e.what()}}};
  } catch (const InvalidArgument& e) {
    r = {400, {{"error", e.what()}}};
  } catch (const std::exception& e) {
    r = {500, {{"error", e.what()}}};
  }
  return r;
}

struct ApiServer::Impl {
  SessionService& service;
  httplib::Server server;
};

ApiServer::ApiServer(SessionService& service) : impl_(new Impl{service, {}}) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    const auto r = handle_request(impl_->service, req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
}

ApiServer::~ApiServer() = default;

int ApiServer::bind(const std::string& host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void ApiServer::run() { impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

}  // namespace forge::harness
