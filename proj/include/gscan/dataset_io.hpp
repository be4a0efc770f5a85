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

// On-disk formats. A dataset directory holds one JSON-lines file per split
// (`train.jsonl`, `dev.jsonl`, `A.jsonl`, ...) and `manifest.json`.
// Field layouts are documented in docs/schema.md.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "gscan/example.hpp"
#include "gscan/splits.hpp"

namespace gscan {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr int kSchemaVersion = 1;

struct Manifest {
  ordered_json config;
  std::uint64_t seed = 0;
  std::map<std::string, std::int64_t> counts;  // split name -> records
  std::string content_hash;                    // sha256 over split files
  BuildStats stats;
  ordered_json provenance;  // e.g. subsample source and fraction; null if none

  ordered_json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

struct PredictionRecord {
  std::int64_t id = 0;
  std::vector<Action> actions;
  int run = 0;

  bool operator==(const PredictionRecord&) const = default;
};

ordered_json config_to_json(const DatasetConfig& cfg);
DatasetConfig config_from_json(const nlohmann::json& j);

ordered_json example_to_json(const Example& e);
/// Throws SchemaError on missing or malformed fields.
Example example_from_json(const nlohmann::json& j);

std::filesystem::path split_path(const std::filesystem::path& dir, SplitId id);

/// Writes every split plus the manifest. Output bytes depend only on the
/// dataset contents.
Manifest write_dataset(const Dataset& ds, const std::filesystem::path& dir,
                       const ordered_json& provenance = nullptr);

std::vector<Example> read_examples(const std::filesystem::path& file);
Manifest read_manifest(const std::filesystem::path& dir);
Dataset read_dataset(const std::filesystem::path& dir);

/// sha256 hex digest over the split files of `dir` listed in `names`,
/// taken in sorted name order.
std::string content_hash(const std::filesystem::path& dir, std::vector<std::string> names);

std::string sha256_hex(const std::string& bytes);

/// Parses a prediction file. When `known_ids` is given, ids outside it are
/// rejected. Errors name the offending line and token or id.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& file,
                                               const std::unordered_set<std::int64_t>* known_ids = nullptr);
void write_predictions(const std::filesystem::path& file, const std::vector<PredictionRecord>& records);

struct DatasetStats {
  std::map<std::string, std::int64_t> split_counts;
  std::int64_t distinct_examples = 0;
  std::int64_t unique_instructions = 0;
  std::map<std::size_t, std::int64_t> action_lengths;  // length -> distinct examples
  std::map<std::string, std::int64_t> template_usage;  // template id -> distinct examples
  std::int64_t template_count = 0;
};

DatasetStats dataset_stats(const Dataset& ds);
ordered_json stats_to_json(const DatasetStats& s);

}  // namespace gscan
