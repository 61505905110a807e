// Copyright 2026 The tagdiff Authors
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

namespace tagdiff {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An id or label that the store does not know about.
class LookupError : public Error {
 public:
  using Error::Error;
};

// A user without any assignment was asked for a quantity that needs one.
class DegenerateUserError : public Error {
 public:
  using Error::Error;
};

// The diffusion was asked to start from a user with no (training) items.
class ColdStartError : public DegenerateUserError {
 public:
  using DegenerateUserError::DegenerateUserError;
};

// A single input record that cannot be turned into a triple. `line` is 1-based;
// 0 means the record did not come from a file.
class RecordError : public Error {
 public:
  RecordError(std::size_t line, const std::string& reason)
      : Error(line == 0 ? reason : "line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// Invalid parameters (split fractions, synthetic specs, L sweeps).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Metrics requested over nothing (n = 0, empty test pool, no usable run).
class EmptyEvaluationError : public Error {
 public:
  using Error::Error;
};

// Dataset filtering removed every record.
class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

// Reading or writing a stream failed. Distinct from per-record rejections.
class StreamError : public Error {
 public:
  using Error::Error;
};

}  // namespace tagdiff
