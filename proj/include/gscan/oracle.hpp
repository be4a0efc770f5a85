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

// Demonstration oracle: compiles a command and a scene into the gold action
// sequence.
//
// Routing is horizontal-first (all east/west steps, then north/south) unless
// the command says `while zigzagging`, which alternates axes starting with
// the horizontal one. Turns before a step are minimal; a 180 degree turn is
// two left turns. Manner adverbs are applied afterwards as token rewrites:
//
//   hesitantly      stay after every walk, push and pull
//   while spinning  spin macro before every walk and every run of push/pull
//   cautiously      look macro right before every walk
//
// The spin and look macros default to four left turns and
// [turn_right, turn_left, turn_left, turn_right]; both are configurable.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gscan/example.hpp"
#include "gscan/grammar.hpp"
#include "gscan/scene.hpp"
#include "gscan/world.hpp"

namespace gscan {

struct RoutePlan {
  std::vector<Heading> steps;

  bool operator==(const RoutePlan&) const = default;
};

struct MannerConfig {
  std::vector<Action> look_macro = {Action::kTurnRight, Action::kTurnLeft, Action::kTurnLeft,
                                    Action::kTurnRight};
  std::vector<Action> spin_macro = {Action::kTurnLeft, Action::kTurnLeft, Action::kTurnLeft,
                                    Action::kTurnLeft};

  bool operator==(const MannerConfig&) const = default;
};

RoutePlan base_route(Position from, Position to, bool zigzag);
std::vector<Action> lower_route(const RoutePlan& plan, Heading start);
std::vector<Action> apply_manner(const std::vector<Action>& actions, std::optional<Adverb> adverb,
                                 const MannerConfig& manner = {});

/// Push/pull tokens for the object under the agent: one per free cell (two
/// for heavy objects) until the object or the agent would be blocked.
std::vector<Action> verb_actions(const Situation& s, Verb verb);

/// Route to the target plus verb actions, before manner rewriting.
std::vector<Action> plan_verb(const Situation& s, const CommandSemantics& sem);

/// Full gold sequence for a resolved scene.
std::vector<Action> gold_actions(const Situation& s, const CommandSemantics& sem,
                                 const MannerConfig& manner = {});

Example generate_example(const CommandAST& command, const Situation& scene, TaskKind task,
                         const MannerConfig& manner = {});

/// Problems with a stored example: invalid situation, ambiguous or wrong
/// target, gold differing from the recompiled oracle sequence, or a gold run
/// that does not end on the target. Empty means sound.
std::vector<std::string> check_example(const Example& e, const MannerConfig& manner = {});

}  // namespace gscan
