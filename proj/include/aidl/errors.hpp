// Copyright 2026 The aidl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AIDL_ERRORS_HPP
#define AIDL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aidl {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised by parse_record when a line has neither 42 nor 43 fields.
class FieldCountError : public Error {
 public:
  FieldCountError(std::size_t count)
      : Error("expected 42 or 43 comma-separated fields, got " +
              std::to_string(count)),
        count_(count) {}
  std::size_t count() const { return count_; }

 private:
  std::size_t count_;
};

/// A token in a numeric slot that does not parse, or violates its range.
class NumericParseError : public Error {
 public:
  NumericParseError(std::size_t field, const std::string& token)
      : Error("field F" + std::to_string(field + 1) + ": invalid value '" +
              token + "'"),
        field_(field) {}
  /// Zero-based feature index.
  std::size_t field() const { return field_; }

 private:
  std::size_t field_;
};

/// Parse failure annotated with a 1-based line number.
class LineError : public Error {
 public:
  LineError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class EmptyDatasetError : public Error {
 public:
  EmptyDatasetError() : Error("dataset is empty") {}
};

class EmptyInputError : public Error {
 public:
  EmptyInputError() : Error("no scores to evaluate") {}
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class CacheMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported persisted document.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Encoding schema or input width disagrees with a stored model.
class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace aidl

#endif  // AIDL_ERRORS_HPP
