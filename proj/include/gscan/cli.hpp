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

// `gscan` subcommands: generate, verify, evaluate, export-gold, subsample,
// stats, inspect. Data goes to files (or stdout for stats and inspect),
// diagnostics to `err`. Exit status is 0 iff no error occurred.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gscan/example.hpp"

namespace gscan {

/// Environment variable naming the default dataset directory.
inline constexpr const char* kOutDirEnv = "GSCAN_OUT_DIR";

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct VerifyResult {
  std::int64_t records = 0;
  std::vector<std::string> violations;  // each names the record id or line
};

/// Re-executes and recompiles every stored example of a dataset directory.
VerifyResult verify_dataset(const std::filesystem::path& dir);

/// Text-art grid for one example: agent heading arrow, object roles, legend.
std::string render_example(const Example& e);

}  // namespace gscan
