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

// Dataset assembly and held-out split assignment.
//
// Compositional task:
//   B  target is a yellow square and the command names color and shape
//   C  target is a red square
//   D  target lies south-west of the agent's start
//   E  target is a size-2 circle called `small`
//   F  target is a size-3 square and the verb is push or pull
//   G  adverb is `cautiously` (k such examples stay in train)
//   H  adverb is `while spinning` and the verb is pull
// Relation task:
//   II   a red square is the target or the reference
//   III  target/reference are a green square and a blue circle, either way
//   IV   target is a yellow square
//   V    target is north of its reference
//   VI   target is south-west of its reference
//
// An example matching several predicates is copied into each matching test
// split and never enters train. The rest is divided into train, dev and the
// random test split (A or I) by per-example draws.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gscan/config.hpp"
#include "gscan/example.hpp"
#include "gscan/grammar.hpp"
#include "gscan/oracle.hpp"
#include "gscan/scene.hpp"

namespace gscan {

enum class CountMode : std::uint8_t {
  kTotal = 0,  // stop after this many distinct examples
  kTrain = 1,  // stop once train holds this many examples
};

struct DatasetConfig {
  std::string kind = "relation";
  GrammarConfig grammar = default_grammar(TaskKind::kRelation);
  GenConstraints gen;
  MannerConfig manner;
  CountMode count_mode = CountMode::kTotal;
  std::int64_t target_count = 260000;
  double dev_fraction = 0.02;
  double test_fraction = 0.05;
  int few_shot_k = 1;
  std::uint64_t seed = 0;

  TaskKind task() const { return grammar.task; }
};

/// Full-scale configs: `relation`, `compositional`, `relation-small`,
/// `compositional-small`. Throws ConfigError for anything else.
DatasetConfig dataset_config(const std::string& kind);

/// `compositional_small` / `relation_small` (dashes also accepted).
DatasetConfig reduced_primitive_config(const std::string& kind);

/// Overrides from a key-value file; see docs/config.md for the keys.
/// Throws ConfigError on unknown keys or bad values and leaves `cfg`
/// untouched in that case.
void apply_dataset_keys(const KeyValues& kv, DatasetConfig& cfg);

/// Throws ConfigError on out-of-range values.
void validate_config(const DatasetConfig& cfg);

/// One message per held-out split the lexicon cannot produce.
std::vector<std::string> unsupported_splits(const DatasetConfig& cfg);

/// Held-out predicates `e` satisfies, in table order.
std::vector<SplitId> assign_splits(const Example& e);
bool satisfies_split(const Example& e, SplitId id);

struct BuildStats {
  std::int64_t generated = 0;
  std::int64_t scene_attempts = 0;
  std::int64_t unsatisfiable_draws = 0;
};

struct Dataset {
  DatasetConfig config;
  std::map<SplitId, std::vector<Example>> splits;
  BuildStats stats;

  std::vector<SplitId> split_ids() const;
  std::size_t count(SplitId id) const;
};

struct BuildOptions {
  int workers = 1;
  std::int64_t batch_size = 4096;
};

/// Generates one example; pure in (cfg, commands, index).
Example generate_indexed(const DatasetConfig& cfg, const std::vector<CommandAST>& commands,
                         std::int64_t index, BuildStats* stats = nullptr);

Dataset build_dataset(const DatasetConfig& cfg, const BuildOptions& opts = {});

/// Positions kept by a subsample, ascending. Nested in `fraction` for a
/// fixed seed.
std::vector<std::size_t> subsample_indices(std::size_t n, double fraction, std::uint64_t seed);
std::vector<Example> subsample(const std::vector<Example>& train, double fraction,
                               std::uint64_t seed);

}  // namespace gscan
