// Copyright 2026 The splcover Authors
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

namespace splcover {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (model text, product files, arguments).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based source line, or 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// The cross-tree constraints eliminate every product.
class UnsatisfiableModel : public Error {
 public:
  using Error::Error;
};

// Some weight-positive configuration cannot be covered by any valid product.
class UncoverableError : public Error {
 public:
  using Error::Error;
};

// Coverage requested against a configuration set whose total weight is zero.
class UndefinedCoverage : public Error {
 public:
  using Error::Error;
};

// An internal search budget ran out before a required result was found.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace splcover
