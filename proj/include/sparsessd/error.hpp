// Copyright 2026 The Authors.
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

// Exception hierarchy shared by every module. The CLI maps ValidationError
// and its subclasses to exit code 2 and NumericalError to exit code 3.

#pragma once

#include <stdexcept>
#include <string>

namespace sparsessd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data or arguments supplied by the caller.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : ValidationError(what + " (row " + std::to_string(row) + ", column " +
                        std::to_string(column) + ")"),
        row_(row),
        column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParameterError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptyUniverseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateSupportError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Gross return <= 0 under power utility, and similar domain violations.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A performance measure whose denominator vanishes (e.g. no downside).
class UndefinedMeasure : public Error {
 public:
  using Error::Error;
};

// Solver breakdown, singular factorizations, bracketing failures.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace sparsessd
