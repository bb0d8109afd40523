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

// forge: command-line entry point.
//
//   forge transform --dnf F [--trajs T | --env E --oracle P --n N --seed S]
//                   [--allow p,q] [--drop p,q] [--emit ltl|json]
//   forge translate --formula F --dict D
//   forge rollout   --policy P --env E --n N --seed S [--formula F] [--out T]
//   forge eval      --trajs T --formula F [--env E] [--fsq-empty zero|exclude]
//   forge pipeline  CONFIG [--out-dir D]
//   forge serve     [--host H] [--port P] [--data-dir D] [--resources R]

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forge/controller.hpp"
#include "forge/formula_json.hpp"
#include "forge/formula_text.hpp"
#include "forge/harness/pipeline.hpp"
#include "forge/harness/server.hpp"
#include "forge/harness/session.hpp"
#include "forge/metrics.hpp"
#include "forge/translate.hpp"

namespace {

using nlohmann::json;
namespace h = forge::harness;

json parse_params(const std::string& text) {
  if (text.empty()) return json::object();
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw forge::InvalidArgument("--params is not valid JSON");
  }
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

struct TransformArgs {
  std::string dnf;
  std::string trajs;
  std::string env = "mouselab3";
  std::string params;
  std::string oracle = "farsighted";
  std::size_t n = 100;
  std::uint64_t seed = 0;
  std::vector<std::string> allow;
  std::vector<std::string> drop;
  double epsilon = 1e-6;
  std::string emit = "ltl";
  std::string report;
};

int run_transform(const TransformArgs& a) {
  json cfg = {{"format_version", 1},
              {"env", a.env},
              {"env_params", parse_params(a.params)},
              {"dnf", a.dnf},
              {"allowed", a.allow},
              {"redundant", a.drop},
              {"epsilon", a.epsilon}};
  if (!a.trajs.empty()) {
    cfg["trajectories"] = a.trajs;
  } else {
    cfg["trajectories"] = {{"oracle", a.oracle}, {"n", a.n}, {"seed", a.seed}};
  }
  if (!a.report.empty()) cfg["outputs"] = {{"report", a.report}};
  const auto result = h::run_pipeline(h::pipeline_config_from_json(cfg, "."));
  print_warnings(result.warnings);
  if (a.emit == "json") {
    std::cout << forge::ltl::to_json(result.formula).dump(2) << '\n';
  } else {
    std::cout << result.formula_text << '\n';
  }
  return 0;
}

int run_translate(const std::string& formula, const std::string& dict) {
  const auto f = forge::ltl::load_procedural(h::read_text_file(formula));
  std::cout << forge::nl::translate(f, forge::nl::load_dictionary(dict)) << '\n';
  return 0;
}

struct RolloutArgs {
  std::string policy = "farsighted";
  std::string env = "mouselab3";
  std::string params;
  std::size_t n = 100;
  std::uint64_t seed = 0;
  std::string formula;
  std::string out;
};

int run_rollout(const RolloutArgs& a) {
  const auto spec = forge::env::load_spec(a.env, parse_params(a.params));
  std::optional<forge::ltl::ProceduralFormula> f;
  if (!a.formula.empty()) f = forge::ltl::load_procedural(h::read_text_file(a.formula));
  auto policy = forge::oracle::make_policy(a.policy, spec, f);
  const auto trajs = forge::oracle::rollout(*policy, spec, a.n, a.seed);
  if (a.out.empty()) {
    forge::env::write_jsonl(std::cout, trajs);
  } else {
    forge::env::save_trajectories(a.out, trajs);
  }
  return 0;
}

struct EvalArgs {
  std::string trajs;
  std::string formula;
  std::string env;
  std::string params;
  std::string fsq_empty = "zero";
  std::size_t sims = 1000;
  std::uint64_t seed = 0;
};

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

int run_eval(const EvalArgs& a) {
  const auto trajs = forge::env::load_trajectories(a.trajs);
  if (trajs.empty()) throw forge::InvalidArgument("no trajectories in '" + a.trajs + "'");
  const auto spec = forge::env::load_spec(a.env.empty() ? trajs.front().env : a.env, parse_params(a.params));
  const auto f = forge::ltl::load_procedural(h::read_text_file(a.formula));
  const auto empty = a.fsq_empty == "exclude" ? forge::metrics::FsqEmpty::kExclude : forge::metrics::FsqEmpty::kZero;

  std::printf("id\tclicks\tconsistent\tinconsistent\tmissed\tagreement\tfsq\tscore\n");
  double agreement = 0.0, score = 0.0, fsq = 0.0;
  std::size_t fsq_n = 0, score_n = 0;
  for (const auto& t : trajs) {
    const auto ag = forge::metrics::click_agreement(t, f, spec, a.sims, a.seed);
    const auto fq = forge::metrics::fsq(t, spec, empty);
    // Road trip and mortgage scores need the final choice.
    std::string score_cell = "NA";
    if (t.choice || spec.kind() == forge::env::TaskKind::kTree) {
      const double s = forge::metrics::task_performance(t, spec).score;
      score += s;
      ++score_n;
      score_cell = fixed(s, 4);
    }
    const std::string fsq_cell = fq.fsq ? fixed(*fq.fsq, 6) : "NA";
    std::printf("%s\t%zu\t%zu\t%zu\t%.4f\t%.6f\t%s\t%s\n", t.id.c_str(), t.clicks(), ag.consistent,
                ag.inconsistent, ag.missed, ag.agreement, fsq_cell.c_str(), score_cell.c_str());
    agreement += ag.agreement;
    if (fq.fsq) {
      fsq += *fq.fsq;
      ++fsq_n;
    }
  }
  const double n = static_cast<double>(trajs.size());
  std::printf("# mean\tn=%zu\tagreement=%.6f\tfsq=%s\tscore=%s\n", trajs.size(), agreement / n,
              fsq_n ? fixed(fsq / static_cast<double>(fsq_n), 6).c_str() : "NA",
              score_n ? fixed(score / static_cast<double>(score_n), 4).c_str() : "NA");
  return 0;
}

int run_pipeline_cmd(const std::string& config, const std::string& out_dir) {
  auto cfg = h::load_pipeline_config(config);
  if (!out_dir.empty()) {
    if (!cfg.formula_out) cfg.formula_out = out_dir + "/formula.ltl";
    if (!cfg.instructions_out && cfg.dictionary) cfg.instructions_out = out_dir + "/instructions.txt";
    if (!cfg.report_out) cfg.report_out = out_dir + "/report.json";
  }
  const auto result = h::run_pipeline(cfg);
  print_warnings(result.warnings);
  std::cout << result.formula_text << '\n';
  if (!result.instructions.empty()) std::cout << '\n' << result.instructions << '\n';
  return 0;
}

int run_serve(const std::string& host, int port, const std::string& data_dir, const std::string& resources) {
  h::ServiceOptions opts;
  if (!data_dir.empty()) opts.data_dir = data_dir;
  if (!resources.empty()) opts.resource_dir = resources;
  h::SessionService service(opts);
  h::ApiServer server(service);
  const int bound = server.bind(host, port);
  std::cerr << "forge: serving /api/v1 on " << host << ':' << bound << " (data in " << opts.data_dir << ")\n";
  server.run();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile strategy descriptions into procedural formulas and decision aids"};
  app.require_subcommand(1);

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "DNF + demonstrations -> pruned procedural formula");
  transform->add_option("--dnf", ta.dnf, "DNF formula file (text or JSON)")->required()->check(CLI::ExistingFile);
  transform->add_option("--trajs", ta.trajs, "demonstration trajectories (JSONL)")->check(CLI::ExistingFile);
  transform->add_option("--env", ta.env, "env name or spec file")->capture_default_str();
  transform->add_option("--params", ta.params, "env parameters as JSON");
  transform->add_option("--oracle", ta.oracle, "policy generating demonstrations without --trajs")
      ->capture_default_str();
  transform->add_option("--n", ta.n, "oracle rollouts")->capture_default_str();
  transform->add_option("--seed", ta.seed, "oracle seed")->capture_default_str();
  transform->add_option("--allow", ta.allow, "predicates allowed in conditions")->delimiter(',');
  transform->add_option("--drop", ta.drop, "redundant predicates removed from the DNF")->delimiter(',');
  transform->add_option("--epsilon", ta.epsilon, "likelihood of a non-eligible action")->capture_default_str();
  transform->add_option("--emit", ta.emit, "output format")->check(CLI::IsMember({"ltl", "json"}))->capture_default_str();
  transform->add_option("--report", ta.report, "write a JSON report here");

  std::string tr_formula, tr_dict;
  auto* translate = app.add_subcommand("translate", "procedural formula -> instructions");
  translate->add_option("--formula", tr_formula, "formula file")->required()->check(CLI::ExistingFile);
  translate->add_option("--dict", tr_dict, "dictionary file")->required()->check(CLI::ExistingFile);

  RolloutArgs ra;
  auto* rollout = app.add_subcommand("rollout", "simulate a policy");
  rollout->add_option("--policy", ra.policy, "farsighted, random or formula")->capture_default_str();
  rollout->add_option("--env", ra.env, "env name or spec file")->capture_default_str();
  rollout->add_option("--params", ra.params, "env parameters as JSON");
  rollout->add_option("--n", ra.n, "trajectories")->capture_default_str();
  rollout->add_option("--seed", ra.seed, "seed")->capture_default_str();
  rollout->add_option("--formula", ra.formula, "formula for the formula policy")->check(CLI::ExistingFile);
  rollout->add_option("--out", ra.out, "output file; stdout when omitted");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "per-trajectory agreement, FSQ and score");
  eval->add_option("--trajs", ea.trajs, "trajectories (JSONL)")->required()->check(CLI::ExistingFile);
  eval->add_option("--formula", ea.formula, "strategy formula")->required()->check(CLI::ExistingFile);
  eval->add_option("--env", ea.env, "env; defaults to the one recorded in the trajectories");
  eval->add_option("--params", ea.params, "env parameters as JSON");
  eval->add_option("--fsq-empty", ea.fsq_empty, "FSQ of zero-click trials")
      ->check(CLI::IsMember({"zero", "exclude"}))
      ->capture_default_str();
  eval->add_option("--sims", ea.sims, "simulations for missed clicks")->capture_default_str();
  eval->add_option("--seed", ea.seed, "simulation seed")->capture_default_str();

  std::string config, out_dir;
  auto* pipeline = app.add_subcommand("pipeline", "run a pipeline config end to end");
  pipeline->add_option("config", config, "pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  pipeline->add_option("--out-dir", out_dir, "write outputs the config does not place itself here");

  std::string host = "127.0.0.1", data_dir, resources;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "run the session service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--data-dir", data_dir, "defaults to $FORGE_DATA_DIR");
  serve->add_option("--resources", resources, "formulas and dictionaries; defaults to $FORGE_RESOURCE_DIR");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transform) return run_transform(ta);
    if (*translate) return run_translate(tr_formula, tr_dict);
    if (*rollout) return run_rollout(ra);
    if (*eval) return run_eval(ea);
    if (*pipeline) return run_pipeline_cmd(config, out_dir);
    if (*serve) return run_serve(host, port, data_dir, resources);
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
