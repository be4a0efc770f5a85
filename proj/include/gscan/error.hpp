// Copyright 2026 The gSCAN Toolkit Authors.
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

#include <stdexcept>
#include <string>

namespace gscan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-grammar command.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid grammar, lexicon, or dataset configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file on disk does not conform to its documented schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// The scene sampler exhausted its retry budget.
class UnsatisfiableError : public Error {
 public:
  UnsatisfiableError(const std::string& what, int retries)
      : Error(what), retries_(retries) {}
  int retries() const { return retries_; }

 private:
  int retries_;
};

}  // namespace gscan
