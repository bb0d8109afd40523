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

#include "forge/formula_text.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "forge/error.hpp"

namespace forge::ltl {
namespace {

enum class Tok {
  kIdent,
  kNumber,
  kLParen,
  kRParen,
  kComma,
  kAnd,
  kOr,
  kNot,
  kUntil,
  kUnless,
  kHold,
  kLoop,
  kNext,
  kTrue,
  kFalse,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

Tok keyword(std::string_view word) {
  const std::string u = upper(word);
  if (u == "AND") return Tok::kAnd;
  if (u == "OR") return Tok::kOr;
  if (u == "NOT") return Tok::kNot;
  if (u == "UNTIL") return Tok::kUntil;
  if (u == "UNLESS") return Tok::kUnless;
  if (u == "HOLD") return Tok::kHold;
  if (u == "LOOP") return Tok::kLoop;
  if (u == "NEXT") return Tok::kNext;
  if (u == "TRUE") return Tok::kTrue;
  if (u == "FALSE") return Tok::kFalse;
  return Tok::kIdent;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ch == '(' || ch == ')' || ch == ',') {
      out.push_back({ch == '(' ? Tok::kLParen : ch == ')' ? Tok::kRParen : Tok::kComma,
                     std::string(1, ch), start});
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::kNumber, std::string(text.substr(start, i - start)), start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
      }
      const auto word = text.substr(start, i - start);
      out.push_back({keyword(word), std::string(word), start});
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + ch + "'", out.size() + 1, start);
  }
  out.push_back({Tok::kEnd, "", text.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const RefValidator& validate)
      : tokens_(tokenize(text)), validate_(validate) {}

  DnfFormula dnf() {
    DnfFormula f;
    f.conjunctions.push_back(conjunction_group());
    while (accept(Tok::kOr)) f.conjunctions.push_back(conjunction_group());
    expect_end();
    return f;
  }

  ProceduralFormula formula() {
    ProceduralFormula f;
    for (;;) {
      if (f.loop) fail("LOOP must be the final element");
      element(f);
      if (peek().kind == Tok::kAnd && peek(1).kind == Tok::kNext) {
        pos_ += 2;
        continue;
      }
      break;
    }
    expect_end();
    return f;
  }

  PredicateRef single_ref() {
    auto r = ref();
    expect_end();
    return r;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const auto& t = peek();
    const std::string found = t.kind == Tok::kEnd ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(message + ", found " + found, pos_ + 1, t.offset);
  }

  void expect(Tok kind, const char* what) {
    if (!accept(kind)) fail(std::string("expected ") + what);
  }

  void expect_end() {
    if (peek().kind != Tok::kEnd) fail("expected end of input");
  }

  // Arguments may reuse keyword spellings such as `not(...)`.
  PredicateRef ref_arg() {
    const auto& t = peek();
    if (t.kind == Tok::kEnd || t.kind == Tok::kLParen || t.kind == Tok::kRParen ||
        t.kind == Tok::kComma) {
      fail("expected predicate argument");
    }
    std::string name = t.kind == Tok::kIdent || t.kind == Tok::kNumber ? t.text : [&] {
      std::string s = t.text;
      for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      return s;
    }();
    ++pos_;
    PredicateRef r(std::move(name));
    if (accept(Tok::kLParen)) {
      r.args.push_back(ref_arg());
      while (accept(Tok::kComma)) r.args.push_back(ref_arg());
      expect(Tok::kRParen, "')'");
    }
    return r;
  }

  PredicateRef ref() {
    if (peek().kind != Tok::kIdent) fail("expected predicate name");
    PredicateRef r(peek().text);
    ++pos_;
    if (accept(Tok::kLParen)) {
      r.args.push_back(ref_arg());
      while (accept(Tok::kComma)) r.args.push_back(ref_arg());
      expect(Tok::kRParen, "')'");
    }
    if (validate_) validate_(r);
    return r;
  }

  Literal literal() {
    if (accept(Tok::kNot)) {
      Literal inner;
      if (accept(Tok::kLParen)) {
        inner = literal();
        expect(Tok::kRParen, "')'");
      } else {
        inner = literal();
      }
      inner.negated = !inner.negated;
      return inner;
    }
    if (accept(Tok::kTrue)) return Literal{PredicateRef("TRUE"), false};
    if (accept(Tok::kFalse)) return Literal{PredicateRef("FALSE"), false};
    if (peek().kind != Tok::kIdent) fail("expected literal");
    return Literal{ref(), false};
  }

  // literal (AND literal)*, stopping before AND NEXT.
  Conjunction conjunction() {
    std::vector<Literal> lits;
    lits.push_back(literal());
    while (peek().kind == Tok::kAnd && peek(1).kind != Tok::kNext) {
      ++pos_;
      lits.push_back(literal());
    }
    return Conjunction(std::move(lits));
  }

  Conjunction conjunction_group() {
    if (peek().kind == Tok::kLParen) {
      ++pos_;
      auto c = conjunction_group();
      expect(Tok::kRParen, "')'");
      return c;
    }
    return conjunction();
  }

  Condition condition() {
    if (accept(Tok::kTrue)) return Condition::True();
    if (accept(Tok::kFalse)) return Condition::False();
    const bool paren = accept(Tok::kLParen);
    auto first = ref();
    std::optional<PredicateRef> second;
    if (accept(Tok::kOr)) second = ref();
    if (paren) expect(Tok::kRParen, "')'");
    if (peek().kind == Tok::kOr) fail("conditions hold at most two disjuncts");
    return second ? Condition::Of(std::move(first), std::move(*second))
                  : Condition::Of(std::move(first));
  }

  std::optional<Condition> unless_clause() {
    if (!accept(Tok::kUnless)) return std::nullopt;
    return condition();
  }

  void element(ProceduralFormula& f) {
    if (accept(Tok::kLoop)) {
      if (peek().kind != Tok::kNumber) fail("expected step number after LOOP");
      const std::size_t num = std::stoul(peek().text);
      if (num == 0 || num > f.steps.size()) fail("LOOP target must name an earlier step");
      ++pos_;
      f.loop = Loop{num - 1, unless_clause()};
      return;
    }
    ProceduralStep step;
    if (accept(Tok::kHold)) {
      step.body = conjunction_group();
      step.terminator = Hold{};
    } else {
      step.body = conjunction_group();
      expect(Tok::kUntil, "UNTIL");
      step.terminator = Until{condition()};
    }
    step.unless = unless_clause();
    f.steps.push_back(std::move(step));
  }

  std::vector<Token> tokens_;
  const RefValidator& validate_;
  std::size_t pos_ = 0;
};

}  // namespace

DnfFormula parse_dnf(std::string_view text, const RefValidator& validate) {
  return Parser(text, validate).dnf();
}

ProceduralFormula parse_ltl(std::string_view text, const RefValidator& validate) {
  auto f = Parser(text, validate).formula();
  if (!grammar_check(f)) {
    throw SyntaxError("formula does not follow the procedural grammar", 1, 0);
  }
  return f;
}

PredicateRef parse_predicate_ref(std::string_view text) {
  static const RefValidator none;
  return Parser(text, none).single_ref();
}

std::string print_conjunction(const Conjunction& c) {
  if (c.is_true()) return "TRUE";
  std::string out;
  for (std::size_t i = 0; i < c.literals().size(); ++i) {
    if (i > 0) out += " AND ";
    out += c.literals()[i].str();
  }
  return out;
}

std::string print_dnf(const DnfFormula& f) {
  std::string out;
  for (std::size_t i = 0; i < f.conjunctions.size(); ++i) {
    if (i > 0) out += " OR ";
    out += print_conjunction(f.conjunctions[i]);
  }
  return out;
}

std::string print_condition(const Condition& c) {
  switch (c.kind()) {
    case Condition::Kind::kTrue:
      return "TRUE";
    case Condition::Kind::kFalse:
      return "FALSE";
    case Condition::Kind::kDisjunction:
      break;
  }
  const auto& d = c.disjuncts();
  if (d.size() == 1) return d[0].str();
  return "(" + d[0].str() + " OR " + d[1].str() + ")";
}

std::string print_ltl(const ProceduralFormula& f) {
  if (!grammar_check(f)) throw InvalidArgument("formula does not follow the procedural grammar");
  std::string out;
  for (std::size_t i = 0; i < f.steps.size(); ++i) {
    const auto& s = f.steps[i];
    if (i > 0) out += " AND NEXT ";
    if (const auto* u = s.until()) {
      out += print_conjunction(s.body) + " UNTIL " + print_condition(*u);
    } else {
      const auto body = print_conjunction(s.body);
      out += s.body.size() > 1 ? "HOLD (" + body + ")" : "HOLD " + body;
    }
    if (s.unless) out += " UNLESS " + print_condition(*s.unless);
  }
  if (f.loop) {
    out += " AND NEXT LOOP " + std::to_string(f.loop->target + 1);
    if (f.loop->unless) out += " UNLESS " + print_condition(*f.loop->unless);
  }
  return out;
}

}  // namespace forge::ltl
