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

#include "forge/formula_json.hpp"

#include <cctype>

#include "forge/error.hpp"
#include "forge/formula_text.hpp"

namespace forge::ltl {

using nlohmann::json;

namespace {

void check_version(const json& j) {
  if (!j.contains("format_version") || j.at("format_version").get<int>() != kFormulaFormatVersion) {
    throw InvalidArgument("unsupported or missing format_version in formula document");
  }
}

bool looks_like_json(const std::string& text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '{';
  }
  return false;
}

}  // namespace

json to_json(const PredicateRef& p) {
  json j = {{"name", p.name}};
  if (!p.args.empty()) {
    j["args"] = json::array();
    for (const auto& a : p.args) j["args"].push_back(to_json(a));
  }
  return j;
}

json to_json(const Conjunction& c) {
  json lits = json::array();
  for (const auto& l : c.literals()) {
    lits.push_back({{"predicate", to_json(l.predicate)}, {"negated", l.negated}});
  }
  return lits;
}

json to_json(const Condition& c) {
  if (c.is_true()) return "TRUE";
  if (c.is_false()) return "FALSE";
  json d = json::array();
  for (const auto& p : c.disjuncts()) d.push_back(to_json(p));
  return {{"any", d}};
}

json to_json(const DnfFormula& f) {
  json cs = json::array();
  for (const auto& c : f.conjunctions) cs.push_back(to_json(c));
  return {{"format_version", kFormulaFormatVersion}, {"kind", "dnf"}, {"conjunctions", cs}};
}

json to_json(const ProceduralFormula& f) {
  json steps = json::array();
  for (const auto& s : f.steps) {
    json js = {{"body", to_json(s.body)}};
    if (const auto* u = s.until()) {
      js["until"] = to_json(*u);
    } else {
      js["hold"] = true;
    }
    if (s.unless) js["unless"] = to_json(*s.unless);
    steps.push_back(js);
  }
  json j = {{"format_version", kFormulaFormatVersion}, {"kind", "procedural"}, {"steps", steps}};
  if (f.loop) {
    j["loop"] = {{"target", f.loop->target}};
    if (f.loop->unless) j["loop"]["unless"] = to_json(*f.loop->unless);
  }
  return j;
}

PredicateRef predicate_from_json(const json& j) {
  if (j.is_string()) return parse_predicate_ref(j.get<std::string>());
  PredicateRef p(j.at("name").get<std::string>());
  if (j.contains("args")) {
    for (const auto& a : j.at("args")) p.args.push_back(predicate_from_json(a));
  }
  return p;
}

Conjunction conjunction_from_json(const json& j) {
  std::vector<Literal> lits;
  for (const auto& l : j) {
    lits.push_back(Literal{predicate_from_json(l.at("predicate")), l.value("negated", false)});
  }
  return Conjunction(std::move(lits));
}

Condition condition_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "TRUE") return Condition::True();
    if (s == "FALSE") return Condition::False();
    return Condition::Of(parse_predicate_ref(s));
  }
  const auto& d = j.at("any");
  if (d.size() == 1) return Condition::Of(predicate_from_json(d[0]));
  if (d.size() == 2) return Condition::Of(predicate_from_json(d[0]), predicate_from_json(d[1]));
  throw InvalidArgument("conditions hold one or two disjuncts");
}

DnfFormula dnf_from_json(const json& j) {
  check_version(j);
  DnfFormula f;
  for (const auto& c : j.at("conjunctions")) f.conjunctions.push_back(conjunction_from_json(c));
  if (f.conjunctions.empty()) throw InvalidArgument("DNF formula needs at least one conjunction");
  return f;
}

ProceduralFormula procedural_from_json(const json& j) {
  check_version(j);
  ProceduralFormula f;
  for (const auto& js : j.at("steps")) {
    ProceduralStep s;
    s.body = conjunction_from_json(js.at("body"));
    if (js.contains("until")) {
      s.terminator = Until{condition_from_json(js.at("until"))};
    } else {
      s.terminator = Hold{};
    }
    if (js.contains("unless")) s.unless = condition_from_json(js.at("unless"));
    f.steps.push_back(std::move(s));
  }
  if (j.contains("loop")) {
    Loop loop;
    loop.target = j.at("loop").at("target").get<std::size_t>();
    if (j.at("loop").contains("unless")) loop.unless = condition_from_json(j.at("loop").at("unless"));
    f.loop = loop;
  }
  if (!grammar_check(f)) throw InvalidArgument("formula does not follow the procedural grammar");
  return f;
}

ProceduralFormula load_procedural(const std::string& text) {
  if (looks_like_json(text)) return procedural_from_json(json::parse(text));
  return parse_ltl(text);
}

DnfFormula load_dnf(const std::string& text) {
  if (looks_like_json(text)) return dnf_from_json(json::parse(text));
  return parse_dnf(text);
}

}  // namespace forge::ltl
