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

#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "forge/error.hpp"
#include "forge/formula_text.hpp"
#include "forge/harness/pipeline.hpp"
#include "forge/harness/server.hpp"
#include "forge/harness/session.hpp"
#include "forge/controller.hpp"
#include "support.hpp"

namespace {

namespace fs = std::filesystem;
using namespace forge::harness;
using forge::testing::data_path;
using nlohmann::json;

const char* kMortgageAid =
    "Click the most long-term interest rates that you have not clicked yet. Repeat this step until all the "
    "long-term interest rates are clicked or you have encountered the lowest possible interest rate.";

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("forge-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Pipeline, ShippedMortgageConfigGivesPublishedAid) {
  const auto r = run_pipeline(load_pipeline_config(data_path("pipelines/mortgage.json")));
  EXPECT_EQ(r.instructions, kMortgageAid);
  EXPECT_EQ(r.formula_text,
            "among(not(is_observed), has_largest_depth) UNTIL (are_leaves_observed OR is_previous_observed_max)");
  EXPECT_TRUE(r.report.contains("loglik_before_pruning"));
  EXPECT_TRUE(r.report.contains("loglik_after_pruning"));
  EXPECT_GE(r.report["loglik_after_pruning"].get<double>(), r.report["loglik_before_pruning"].get<double>());
}

TEST(Pipeline, EmptyAllowedSetFallsBackToHold) {
  const auto r = run_pipeline(load_pipeline_config(data_path("pipelines/empty_allowed.json")));
  EXPECT_TRUE(r.formula.steps.front().is_hold());
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_FALSE(r.report["warnings"].empty());
}

TEST(Pipeline, RepeatedRunsWriteIdenticalFiles) {
  const auto dir = scratch_dir("pipeline");
  std::string outputs[2][3];
  for (int run = 0; run < 2; ++run) {
    auto cfg = load_pipeline_config(data_path("pipelines/roadtrip.json"));
    const auto out = dir / std::to_string(run);
    cfg.formula_out = (out / "formula.ltl").string();
    cfg.instructions_out = (out / "instructions.txt").string();
    cfg.report_out = (out / "report.json").string();
    run_pipeline(cfg);
    outputs[run][0] = read_text_file(*cfg.formula_out);
    outputs[run][1] = read_text_file(*cfg.instructions_out);
    outputs[run][2] = read_text_file(*cfg.report_out);
  }
  for (int i = 0; i < 3; ++i) EXPECT_EQ(outputs[0][i], outputs[1][i]);
  fs::remove_all(dir);
}

TEST(Pipeline, ErrorsCarryStageLabels) {
  json cfg = {{"format_version", 1}, {"dnf", {{"text", "is_loaf"}}}};
  try {
    pipeline_config_from_json(cfg);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "config");
    EXPECT_NE(std::string(e.what()).find("is_loaf"), std::string::npos);
  }
  cfg["dnf"] = {{"text", "is_leaf"}};
  cfg["env"] = "chess";
  try {
    run_pipeline(pipeline_config_from_json(cfg));
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "environment");
    EXPECT_EQ(std::string(e.what()).rfind("[environment] ", 0), 0u);
  }
  // Demonstrations that violate the DNF fail in the transform stage.
  cfg["env"] = "mouselab3";
  cfg["dnf"] = {{"text", "is_observed"}};
  try {
    run_pipeline(pipeline_config_from_json(cfg));
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "transform");
  }
  EXPECT_THROW(load_pipeline_config("/nonexistent/config.json"), StageError);
  EXPECT_THROW(pipeline_config_from_json({{"format_version", 2}}), StageError);
}

class SessionTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    opts.data_dir = dir.string();
    opts.resource_dir = FORGE_TEST_DATA_DIR;
    opts.agreement_sims = 200;
  }
  void TearDown() override { fs::remove_all(dir); }

  CreateRequest request(const std::string& env, Condition c, std::uint64_t seed) {
    CreateRequest r;
    r.env = env;
    r.condition = c;
    r.seed = seed;
    return r;
  }

  fs::path dir;
  ServiceOptions opts;
};

json click(forge::env::NodeId n) { return {{"action", "click"}, {"node", n}}; }

TEST_F(SessionTest, AidedMortgageSessionStartsHiddenWithAid) {
  SessionService svc(opts);
  const auto s = svc.create(request("mortgage", Condition::kAided, 1));
  std::size_t hidden = 0;
  for (const auto& n : s["nodes"]) hidden += n["id"] != 0 && !n["revealed"].get<bool>();
  EXPECT_EQ(hidden, 9u);
  EXPECT_EQ(s["aid_text"], kMortgageAid);
  EXPECT_EQ(svc.aid(s["id"])["aid_text"], kMortgageAid);
}

TEST_F(SessionTest, FourthMortgageClickFails) {
  SessionService svc(opts);
  const std::string id = svc.create(request("mortgage", Condition::kControl, 1))["id"];
  for (int n : {3, 6, 9}) svc.act(id, click(n));
  try {
    svc.act(id, click(1));
    FAIL() << "expected IllegalAction";
  } catch (const forge::IllegalAction& e) {
    EXPECT_NE(std::string(e.what()).find("budget exhausted"), std::string::npos);
  }
  EXPECT_EQ(svc.state(id)["clicks"], 3);
}

TEST_F(SessionTest, FollowingTheAidGivesFullAgreement) {
  SessionService svc(opts);
  const auto spec = forge::env::builtin_spec("mortgage");
  const auto f = forge::ltl::parse_ltl(
      "among(not(is_observed), has_largest_depth) UNTIL (are_leaves_observed OR is_previous_observed_max)");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::string id = svc.create(request("mortgage", Condition::kAided, seed))["id"];
    forge::oracle::FormulaPolicy policy(f, spec);
    std::mt19937_64 rng(seed);
    forge::env::BeliefState b(spec);
    for (;;) {
      const auto a = policy.act(b, spec, rng);
      if (a.is_terminate()) break;
      svc.act(id, click(a.node));
      const auto t = svc.trajectory(id);
      b = forge::env::final_belief(t, spec);
    }
    EXPECT_THROW(svc.report(id), Conflict);
    svc.choose(id, forge::env::best_choice(b, spec));
    const auto r = svc.report(id);
    EXPECT_NEAR(r["agreement"]["agreement"].get<double>(), 1.0, 1e-12) << r.dump();
    EXPECT_NEAR(r["fsq"]["fsq"].get<double>(), 1.0, 1e-12);
    EXPECT_THROW(svc.act(id, click(1)), Conflict);
    EXPECT_THROW(svc.choose(id, {1, 2, 3}), Conflict);
  }
}

TEST_F(SessionTest, ControlSessionsNeverExposeAidText) {
  SessionService svc(opts);
  const std::string id = svc.create(request("roadtrip", Condition::kControl, 2))["id"];
  const std::string aid = kMortgageAid;
  std::vector<json> responses = {svc.state(id), svc.act(id, click(1)), svc.aid(id)};
  responses.push_back(svc.choose(id, forge::env::builtin_spec("roadtrip").paths().front()));
  responses.push_back(svc.report(id));
  for (const auto& r : responses) {
    EXPECT_FALSE(r.contains("aid_text") && !r["aid_text"].is_null()) << r.dump();
    EXPECT_EQ(r.dump().find("Repeat this step"), std::string::npos);
  }
}

TEST_F(SessionTest, InvalidChoicesAndUnknownSessions) {
  SessionService svc(opts);
  const std::string id = svc.create(request("mortgage", Condition::kControl, 5))["id"];
  EXPECT_THROW(svc.choose(id, {1, 5, 9}), forge::InvalidArgument);
  EXPECT_THROW(svc.state("ffff"), NotFound);
  EXPECT_THROW(svc.act(id, {{"action", "jump"}}), forge::InvalidArgument);
  EXPECT_THROW(svc.act(id, {{"action", "click"}, {"node", 99}}), forge::InvalidArgument);
  EXPECT_THROW(svc.act(id, {{"action", "click"}, {"node", "x"}}), forge::InvalidArgument);
  EXPECT_THROW(svc.act(id, click(0)), forge::IllegalAction);
  EXPECT_THROW(svc.create(request("chess", Condition::kControl, 1)), forge::InvalidArgument);
  EXPECT_THROW(create_request_from_json({{"condition", "placebo"}}), forge::InvalidArgument);
}

TEST_F(SessionTest, LogsReplayAfterRestart) {
  std::string id;
  json before;
  {
    SessionService svc(opts);
    id = svc.create(request("roadtrip", Condition::kAided, 8))["id"];
    EXPECT_THROW(svc.act(id, click(0)), forge::IllegalAction);
  }
  opts.agreement_sims = 200;
  {
    SessionService svc(opts);
    EXPECT_EQ(svc.state(id)["clicks"], 0);
  }
  {
    SessionService svc(opts);
    const auto spec = forge::env::builtin_spec("roadtrip");
    for (auto n : spec.farsighted()) svc.act(id, click(n));
    svc.choose(id, spec.paths().back());
    before = {svc.state(id), svc.report(id)};
  }
  SessionService reloaded(opts);
  const json after = {reloaded.state(id), reloaded.report(id)};
  EXPECT_EQ(after, before);
  const auto t = reloaded.trajectory(id);
  const auto spec = forge::env::builtin_spec("roadtrip");
  const auto b = forge::env::final_belief(t, spec);
  for (std::size_t n = 0; n < spec.size(); ++n) {
    EXPECT_EQ(after[0]["nodes"][n]["revealed"].get<bool>(), b.is_revealed(n));
  }
  EXPECT_TRUE(fs::exists(dir / "index.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "sessions" / (id + ".jsonl")));
}

// Events without timestamps, for comparing logs across runs.
std::vector<json> events_of(const fs::path& log) {
  std::vector<json> out;
  std::ifstream in(log);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    auto j = json::parse(line);
    j.erase("ts");
    out.push_back(j);
  }
  return out;
}

TEST_F(SessionTest, ConcurrentSessionsMatchSerialExecution) {
  const auto spec = forge::env::builtin_spec("mouselab3");
  constexpr int kSessions = 8;
  auto script = [&](int i) {
    std::vector<forge::env::NodeId> nodes = spec.clickable();
    std::mt19937_64 rng(i);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    nodes.resize(3 + i % 5);
    return nodes;
  };
  auto run = [&](bool parallel) {
    SessionService svc(opts);
    std::vector<std::string> ids;
    for (int i = 0; i < kSessions; ++i) ids.push_back(svc.create(request("mouselab3", Condition::kControl, i))["id"]);
    auto drive = [&](int i) {
      for (auto n : script(i)) svc.act(ids[i], click(n));
      svc.choose(ids[i], spec.paths()[i % spec.paths().size()]);
    };
    if (parallel) {
      std::vector<std::thread> threads;
      for (int i = 0; i < kSessions; ++i) threads.emplace_back(drive, i);
      for (auto& t : threads) t.join();
    } else {
      for (int i = 0; i < kSessions; ++i) drive(i);
    }
    std::vector<std::vector<json>> logs;
    std::vector<json> reports;
    for (const auto& id : ids) {
      logs.push_back(events_of(dir / "sessions" / (id + ".jsonl")));
      reports.push_back(svc.report(id));
      reports.back().erase("id");
    }
    return std::make_pair(logs, reports);
  };
  const auto serial = run(false);
  const auto parallel = run(true);
  EXPECT_EQ(serial.first, parallel.first);
  EXPECT_EQ(serial.second, parallel.second);
}

TEST_F(SessionTest, StudiesSequenceBlocksOfTrials) {
  SessionService svc(opts);
  StudyRequest req;
  req.condition = Condition::kAided;
  req.seed = 4;
  const auto st = svc.create_study(req);
  EXPECT_EQ(st["trials"], 16);
  const auto blocks = st["blocks"].get<std::vector<std::string>>();
  ASSERT_EQ(blocks.size(), 2u);
  std::vector<std::string> envs;
  for (int i = 0; i < 16; ++i) {
    const auto s = svc.next_trial(st["id"]);
    EXPECT_EQ(s["trial"], i);
    EXPECT_TRUE(s.contains("aid_text"));
    envs.push_back(s["env"]);
    EXPECT_THROW(svc.next_trial(st["id"]), Conflict);
    const auto spec = forge::env::builtin_spec(s["env"]);
    svc.choose(s["id"], spec.paths().front());
  }
  EXPECT_THROW(svc.next_trial(st["id"]), Conflict);
  for (int i = 0; i < 16; ++i) EXPECT_EQ(envs[i], blocks[i / 8]);

  // Block order depends on the study seed: both orders occur.
  std::set<std::string> firsts;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    req.seed = seed;
    firsts.insert(svc.create_study(req)["blocks"][0].get<std::string>());
  }
  EXPECT_EQ(firsts.size(), 2u);

  SessionService reloaded(opts);
  EXPECT_EQ(reloaded.study(st["id"])["sessions"], svc.study(st["id"])["sessions"]);
}

TEST_F(SessionTest, HttpRoutesMapErrorsToStatusCodes) {
  SessionService svc(opts);
  auto call = [&](const std::string& m, const std::string& p, const json& body = nullptr) {
    return handle_request(svc, m, p, body.is_null() ? "" : body.dump());
  };
  const auto created = call("POST", "/api/v1/sessions", {{"env", "mortgage"}, {"condition", "aided"}, {"seed", 3}});
  ASSERT_EQ(created.status, 201);
  const std::string id = created.body["id"];
  const std::string base = "/api/v1/sessions/" + id;
  EXPECT_EQ(call("GET", base).status, 200);
  EXPECT_EQ(call("GET", "/api/v1/sessions/abc123").status, 404);
  for (int n : {3, 6, 9}) EXPECT_EQ(call("POST", base + "/act", click(n)).status, 200);
  const auto fourth = call("POST", base + "/act", click(1));
  EXPECT_EQ(fourth.status, 400);
  EXPECT_NE(fourth.body["error"].get<std::string>().find("budget exhausted"), std::string::npos);
  EXPECT_EQ(call("GET", base + "/report").status, 409);
  EXPECT_EQ(call("POST", base + "/choose", {{"choice", {1, 2}}}).status, 400);
  EXPECT_EQ(call("POST", base + "/choose", {{"choice", {7, 8, 9}}}).status, 200);
  EXPECT_EQ(call("POST", base + "/act", click(1)).status, 409);
  const auto report = call("GET", base + "/report");
  EXPECT_EQ(report.status, 200);
  EXPECT_NEAR(report.body["agreement"]["agreement"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(call("GET", base + "/aid").body["aid_text"], kMortgageAid);
  EXPECT_EQ(handle_request(svc, "POST", "/api/v1/sessions", "{not json").status, 400);
  EXPECT_EQ(call("GET", "/api/v1/envs/roadtrip").status, 200);
  EXPECT_EQ(call("GET", "/api/v1/envs/chess").status, 404);
  EXPECT_EQ(call("DELETE", base).status, 404);

  const auto study = call("POST", "/api/v1/studies", {{"condition", "control"}, {"seed", 1}});
  ASSERT_EQ(study.status, 201);
  const std::string sid = study.body["id"];
  const auto trial = call("POST", "/api/v1/studies/" + sid + "/next");
  EXPECT_EQ(trial.status, 201);
  EXPECT_FALSE(trial.body.contains("aid_text"));
  EXPECT_EQ(call("GET", "/api/v1/studies/" + sid).body["started"], 1);
}

TEST_F(SessionTest, ServesOverHttp) {
  SessionService svc(opts);
  ApiServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  std::thread t([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  const auto res = client.Post("/api/v1/sessions", R"({"env":"roadtrip","condition":"aided","seed":1})",
                               "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  const auto body = json::parse(res->body);
  const auto aid = client.Get(("/api/v1/sessions/" + body["id"].get<std::string>() + "/aid").c_str());
  ASSERT_TRUE(aid);
  EXPECT_EQ(json::parse(aid->body)["aid_text"].get<std::string>().rfind("Look up the prices", 0), 0u);
  server.stop();
  t.join();
}

}  // namespace
