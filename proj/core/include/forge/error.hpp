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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forge {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed formula or config text. `token` is 1-based; `offset` is the
// byte offset of the offending token in the input.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t token, std::size_t offset)
      : Error(message + " at token " + std::to_string(token) + " (offset " +
              std::to_string(offset) + ")"),
        token_(token),
        offset_(offset) {}

  std::size_t token() const { return token_; }
  std::size_t offset() const { return offset_; }

 private:
  std::size_t token_;
  std::size_t offset_;
};

class UnknownPredicate : public Error {
 public:
  explicit UnknownPredicate(const std::string& name)
      : Error("unknown predicate '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class ArityMismatch : public Error {
 public:
  using Error::Error;
};

// An action that is not legal in the current belief state.
class IllegalAction : public Error {
 public:
  using Error::Error;
};

// Input violates an operation's precondition (bad params, mismatched
// trajectory, formula that fails the grammar, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The demonstrations cannot be explained by the DNF formula.
class UnsatisfiedDemonstrations : public Error {
 public:
  using Error::Error;
};

class MissingTemplate : public Error {
 public:
  explicit MissingTemplate(const std::string& predicate)
      : Error("dictionary has no template for predicate '" + predicate + "'"),
        predicate_(predicate) {}
  const std::string& predicate() const { return predicate_; }

 private:
  std::string predicate_;
};

}  // namespace forge
