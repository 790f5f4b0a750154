// Copyright 2026 The docstitch Authors.
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

namespace docstitch {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong number of columns, or a column that violates the record schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A field that should hold a number (or enum tag) could not be read.
class ParseError : public Error {
 public:
  ParseError(const std::string &what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Text that cannot be written to a TSV field (tab or newline inside).
class EncodingError : public Error {
 public:
  using Error::Error;
};

// Contract violation between pipeline stages (unsorted input, mixed doc ids).
class PipelineError : public Error {
 public:
  using Error::Error;
};

// Bad thresholds, missing tables, unusable options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A quality-estimation backend failed.  `window_index` is the first window of
// the batch that could not be scored.
class ScoringError : public Error {
 public:
  ScoringError(const std::string &what, std::size_t window_index, bool retryable)
      : Error(what), window_index_(window_index), retryable_(retryable) {}
  std::size_t window_index() const { return window_index_; }
  bool retryable() const { return retryable_; }

 private:
  std::size_t window_index_;
  bool retryable_;
};

// The scoring service answered, but the answer breaks the wire contract.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace docstitch
