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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gscan/grammar.hpp"
#include "gscan/world.hpp"

namespace gscan {

/// Dataset partitions. A..H are the compositional held-out splits (A is the
/// random test set), I..VI the relation-task ones (I random).
enum class SplitId : std::uint8_t {
  kTrain = 0,
  kDev,
  kA,
  kB,
  kC,
  kD,
  kE,
  kF,
  kG,
  kH,
  kI,
  kII,
  kIII,
  kIV,
  kV,
  kVI,
};
inline constexpr int kNumSplitIds = 16;

std::string_view to_string(SplitId id);
std::optional<SplitId> split_from_string(std::string_view s);

/// Random test split of a task (A or I).
SplitId random_split(TaskKind task);

/// Held-out predicate splits of a task, in table order.
const std::vector<SplitId>& held_out_splits(TaskKind task);

struct ExampleMeta {
  // Target relative to the agent start; empty when the agent starts on it.
  std::optional<Direction> agent_to_target;
  Position target_pos;                            // target cell before acting
  Position final_pos;                             // agent cell after the gold sequence
};

struct Example {
  std::int64_t id = 0;
  TaskKind task = TaskKind::kRelation;
  CommandAST command;
  Situation situation;
  std::vector<Action> gold;
  ExampleMeta meta;

  std::vector<std::string> tokens() const { return surface(command); }
  std::string command_text() const { return join_tokens(tokens()); }
  const PlacedObject& target() const {
    return situation.objects[static_cast<std::size_t>(situation.target_idx)];
  }
  const PlacedObject* reference() const {
    return situation.reference_idx
               ? &situation.objects[static_cast<std::size_t>(*situation.reference_idx)]
               : nullptr;
  }
};

}  // namespace gscan
