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

#include "forge/translate.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "forge/error.hpp"

namespace forge::nl {

using ltl::Condition;
using ltl::Conjunction;
using ltl::PredicateRef;
using nlohmann::json;

namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

const std::string& lookup(const std::map<std::string, std::string>& m, const PredicateRef& p) {
  if (auto it = m.find(p.str()); it != m.end()) return it->second;
  if (auto it = m.find(p.name); it != m.end()) return it->second;
  throw MissingTemplate(p.str());
}

}  // namespace

std::string Dictionary::fill(const std::string& text) const {
  std::string s = text;
  replace_all(s, "{ACT_PAST}", act_past);
  replace_all(s, "{ACT}", act);
  replace_all(s, "{OBJ}", obj);
  replace_all(s, "{REW}", rew);
  return s;
}

json to_json(const Dictionary& d) {
  return {{"format_version", 1},
          {"task", d.task},
          {"act", d.act},
          {"act_past", d.act_past},
          {"obj", d.obj},
          {"rew", d.rew},
          {"predicate_templates", d.predicate_templates},
          {"relative_clauses", d.relative_clauses},
          {"qualifiers", d.qualifiers},
          {"condition_templates", d.condition_templates},
          {"disjunction_joiner", d.disjunction_joiner}};
}

Dictionary dictionary_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("dictionary must be a JSON object");
  if (j.value("format_version", 0) != 1) throw InvalidArgument("unsupported dictionary format_version");
  try {
    Dictionary d;
    d.task = j.value("task", std::string());
    d.act = j.at("act").get<std::string>();
    d.act_past = j.value("act_past", d.act + "ed");
    d.obj = j.at("obj").get<std::string>();
    d.rew = j.value("rew", std::string());
    using Map = std::map<std::string, std::string>;
    d.predicate_templates = j.value("predicate_templates", Map{});
    d.relative_clauses = j.value("relative_clauses", Map{});
    d.qualifiers = j.value("qualifiers", Map{});
    d.condition_templates = j.value("condition_templates", Map{});
    d.disjunction_joiner = j.value("disjunction_joiner", std::string(" or "));
    return d;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed dictionary: ") + e.what());
  }
}

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open dictionary '" + path + "'");
  try {
    return dictionary_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("dictionary '" + path + "': " + e.what());
  }
}

std::vector<StepView> split_steps(const ltl::ProceduralFormula& f) {
  std::vector<StepView> out;
  for (const auto& s : f.steps) out.push_back({s, std::nullopt});
  if (!out.empty()) out.back().loop = f.loop;
  return out;
}

namespace {

std::string condition_text(const Condition& c, const Dictionary& d) {
  std::string out;
  for (std::size_t i = 0; i < c.disjuncts().size(); ++i) {
    if (i) out += d.disjunction_joiner;
    out += d.fill(lookup(d.condition_templates, c.disjuncts()[i]));
  }
  return out;
}

// "the most long-term interest rates that you have not clicked yet"
std::string among_phrase(const PredicateRef& p, const Dictionary& d) {
  std::optional<std::string> head;
  std::vector<std::string> clauses;
  for (const auto& arg : p.args) {
    if (arg.name == "not" && arg.args.size() == 1) {
      clauses.push_back(d.fill(lookup(d.relative_clauses, arg.args[0])));
    } else if (!head) {
      head = d.fill(lookup(d.predicate_templates, arg));
    } else {
      clauses.push_back(d.fill(lookup(d.qualifiers, arg)));
    }
  }
  std::string out = head ? *head : d.fill("{OBJ}");
  for (const auto& c : clauses) out += " " + c;
  return out;
}

std::string noun_phrase(const PredicateRef& p, const Dictionary& d) {
  if (p.name == "among") return among_phrase(p, d);
  if (auto it = d.predicate_templates.find(p.str()); it != d.predicate_templates.end()) return d.fill(it->second);
  if (auto it = d.predicate_templates.find(p.name); it != d.predicate_templates.end()) return d.fill(it->second);
  // State predicates constrain when, not what.
  return "{OBJ} if " + d.fill(lookup(d.condition_templates, p));
}

std::string bullet_text(const PredicateRef& p, const Dictionary& d) {
  if (p.name == "among") return among_phrase(p, d);
  if (auto it = d.predicate_templates.find(p.str()); it != d.predicate_templates.end()) return d.fill(it->second);
  if (auto it = d.predicate_templates.find(p.name); it != d.predicate_templates.end()) return d.fill(it->second);
  return "when " + d.fill(lookup(d.condition_templates, p));
}

std::vector<std::string> body_lines(const Conjunction& body, const Dictionary& d) {
  std::vector<std::string> lines;
  if (body.is_true()) {
    lines.push_back(d.fill("Stop planning right away or {ACT} some random {OBJ} and then stop planning."));
    return lines;
  }
  if (body.is_false()) {
    lines.push_back(capitalize(d.fill("Do not {ACT} anything.")));
    return lines;
  }
  std::vector<std::string> positive, negative;
  for (const auto& l : body.literals()) {
    if (l.predicate.name == "TRUE") continue;
    if (l.predicate.name == "FALSE" && !l.negated) {
      lines.push_back(capitalize(d.fill("Do not {ACT} anything.")));
      return lines;
    }
    (l.negated ? negative : positive).push_back(l.negated ? bullet_text(l.predicate, d) : noun_phrase(l.predicate, d));
  }
  if (!positive.empty()) {
    std::string s = d.act + " " + positive[0];
    for (std::size_t i = 1; i < positive.size(); ++i) s += " and " + positive[i];
    lines.push_back(capitalize(d.fill(s)) + ".");
  }
  if (!negative.empty()) {
    lines.push_back(capitalize(d.fill("Do not {ACT}:")));
    for (const auto& n : negative) lines.push_back("- " + d.fill(n));
  }
  return lines;
}

std::string unless_sentence(const Condition& c, const Dictionary& d) {
  return capitalize("unless " + condition_text(c, d) + ", in which case stop at the previous step.");
}

}  // namespace

std::string translate_step(const StepView& s, const Dictionary& d) {
  std::vector<std::string> lines = body_lines(s.step.body, d);
  std::vector<std::string> sentences;
  if (s.step.unless && !s.step.unless->is_false()) {
    sentences.push_back(s.step.unless->is_true() ? "Stop at the previous step."
                                                 : unless_sentence(*s.step.unless, d));
  }
  const Condition* until = s.step.until();
  if (!until || until->is_false()) {
    sentences.push_back("Repeat this step as long as possible.");
  } else if (!until->is_true()) {
    sentences.push_back(capitalize("repeat this step until " + condition_text(*until, d) + "."));
  }
  if (s.loop) {
    if (s.loop->unless && !s.loop->unless->is_false()) {
      sentences.push_back(s.loop->unless->is_true() ? "Stop at the previous step."
                                                    : unless_sentence(*s.loop->unless, d));
    }
    sentences.push_back("GOTO step " + std::to_string(s.loop->target + 1) + ".");
  }

  std::string tail;
  for (const auto& sentence : sentences) tail += (tail.empty() ? "" : " ") + sentence;
  // Without negations the step is one line; otherwise each part gets its
  // own indented line under the body sentence.
  const bool multiline = lines.size() > 1;
  if (!tail.empty()) {
    if (multiline || lines.empty()) {
      lines.push_back(tail);
    } else {
      lines.back() += " " + tail;
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < lines.size(); ++i) out << (i ? "\n   " : "") << lines[i];
  return out.str();
}

std::string translate(const ltl::ProceduralFormula& f, const Dictionary& d) {
  if (!ltl::grammar_check(f)) throw InvalidArgument("formula does not follow the procedural grammar");
  const auto steps = split_steps(f);
  std::ostringstream out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out << '\n';
    if (steps.size() > 1) out << i + 1 << ". ";
    out << translate_step(steps[i], d);
  }
  return out.str();
}

}  // namespace forge::nl
