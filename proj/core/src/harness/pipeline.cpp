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

#include "forge/harness/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "forge/controller.hpp"
#include "forge/formula_json.hpp"
#include "forge/formula_text.hpp"
#include "forge/predicates.hpp"
#include "forge/translate.hpp"

namespace forge::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

namespace {

std::string resolve(const std::string& base, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base) / p).lexically_normal().string();
}

std::vector<ltl::PredicateRef> refs(const json& j, const char* key) {
  std::vector<ltl::PredicateRef> out;
  if (!j.contains(key)) return out;
  for (const auto& s : j.at(key)) out.push_back(ltl::parse_predicate_ref(s.get<std::string>()));
  return out;
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

bool starts_with_brace(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j, const std::string& base_dir) {
  return stage("config", [&] {
    if (j.value("format_version", 0) != 1) throw InvalidArgument("unsupported pipeline format_version");
    const auto& reg = pred::Registry::builtin();
    PipelineConfig cfg;
    cfg.env = j.value("env", std::string("mouselab3"));
    if (cfg.env.find_first_of("./") != std::string::npos) cfg.env = resolve(base_dir, cfg.env);
    cfg.env_params = j.value("env_params", json::object());
    const auto& dnf = j.at("dnf");
    const std::string dnf_text =
        dnf.is_string() ? read_text_file(resolve(base_dir, dnf.get<std::string>())) : dnf.at("text").get<std::string>();
    cfg.dnf = starts_with_brace(dnf_text) ? ltl::dnf_from_json(json::parse(dnf_text))
                                          : ltl::parse_dnf(dnf_text, reg.validator());
    if (j.contains("trajectories")) {
      const auto& t = j.at("trajectories");
      if (t.is_string()) {
        cfg.trajectories = resolve(base_dir, t.get<std::string>());
      } else {
        cfg.oracle.policy = t.value("oracle", std::string("farsighted"));
        cfg.oracle.n = t.value("n", std::size_t{100});
        cfg.oracle.seed = t.value("seed", std::uint64_t{0});
        if (t.contains("formula")) {
          cfg.oracle.formula =
              ltl::load_procedural(read_text_file(resolve(base_dir, t.at("formula").get<std::string>())));
        }
      }
    }
    cfg.allowed = refs(j, "allowed");
    cfg.redundant = refs(j, "redundant");
    for (const auto& p : cfg.allowed) reg.validate(p);
    for (const auto& p : cfg.redundant) reg.validate(p);
    if (j.contains("dictionary")) cfg.dictionary = resolve(base_dir, j.at("dictionary").get<std::string>());
    cfg.epsilon = j.value("epsilon", 1e-6);
    if (j.contains("outputs")) {
      const auto& o = j.at("outputs");
      if (o.contains("formula")) cfg.formula_out = resolve(base_dir, o.at("formula").get<std::string>());
      if (o.contains("instructions")) cfg.instructions_out = resolve(base_dir, o.at("instructions").get<std::string>());
      if (o.contains("report")) cfg.report_out = resolve(base_dir, o.at("report").get<std::string>());
    }
    return cfg;
  });
}

PipelineConfig load_pipeline_config(const std::string& path) {
  const json j = stage("config", [&] {
    try {
      return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("malformed pipeline config: ") + e.what());
    }
  });
  const auto dir = fs::path(path).parent_path().string();
  return pipeline_config_from_json(j, dir.empty() ? "." : dir);
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  const auto spec = stage("environment", [&] { return env::load_spec(cfg.env, cfg.env_params); });
  const auto trajs = stage("demonstrations", [&] {
    if (cfg.trajectories) return env::load_trajectories(*cfg.trajectories);
    auto policy = oracle::make_policy(cfg.oracle.policy, spec, cfg.oracle.formula);
    return oracle::rollout(*policy, spec, cfg.oracle.n, cfg.oracle.seed);
  });
  const pred::RowTable rows = stage("demonstrations", [&] { return pred::RowTable(spec, trajs); });

  compile::TransformOptions options;
  options.allowed = cfg.allowed;
  options.redundant = {cfg.redundant.begin(), cfg.redundant.end()};
  options.model.epsilon = cfg.epsilon;
  const auto transformed = stage("transform", [&] { return compile::transform(cfg.dnf, rows, options); });
  const auto pruned = stage("prune", [&] { return compile::prune(transformed.disjuncts, rows, options.model); });

  PipelineResult result;
  result.formula = pruned.formula;
  result.formula_text = ltl::print_ltl(pruned.formula);
  result.warnings = transformed.warnings;
  if (cfg.dictionary) {
    result.instructions = stage("translate", [&] {
      return nl::translate(pruned.formula, nl::load_dictionary(*cfg.dictionary));
    });
  }

  json disjuncts = json::array();
  for (const auto& d : transformed.disjuncts) disjuncts.push_back(ltl::print_ltl(d));
  json signatures = json::array();
  for (const auto& s : transformed.signatures) signatures.push_back(s.str());
  result.report = {{"format_version", 1},
                   {"env", spec.name()},
                   {"trajectories", trajs.size()},
                   {"rows", rows.size()},
                   {"signatures", signatures},
                   {"disjuncts", disjuncts},
                   {"chosen_disjunct", pruned.chosen},
                   {"loglik_before_pruning", pruned.loglik_unpruned},
                   {"loglik_after_pruning", pruned.loglik},
                   {"dropped_literals", pruned.dropped},
                   {"retried_without_redundant", transformed.retried_without_redundant},
                   {"warnings", result.warnings},
                   {"formula", result.formula_text}};
  if (cfg.dictionary) result.report["instructions"] = result.instructions;

  stage("output", [&] {
    if (cfg.formula_out) write_text_file(*cfg.formula_out, result.formula_text + "\n");
    if (cfg.instructions_out) write_text_file(*cfg.instructions_out, result.instructions + "\n");
    if (cfg.report_out) write_text_file(*cfg.report_out, result.report.dump(2) + "\n");
    return 0;
  });
  return result;
}

}  // namespace forge::harness
