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

#include "gscan/oracle.hpp"

#include <array>
#include <cstdlib>

#include "gscan/error.hpp"

namespace gscan {

namespace {

constexpr std::array<std::string_view, kNumSplitIds> kSplitNames = {
    "train", "dev", "A", "B", "C", "D", "E", "F", "G", "H", "I", "II", "III", "IV", "V", "VI"};

bool is_motion(Action a) { return a == Action::kWalk || a == Action::kPush || a == Action::kPull; }

}  // namespace

std::string_view to_string(SplitId id) { return kSplitNames[static_cast<int>(id)]; }

std::optional<SplitId> split_from_string(std::string_view s) {
  for (int i = 0; i < kNumSplitIds; ++i) {
    if (kSplitNames[static_cast<std::size_t>(i)] == s) return static_cast<SplitId>(i);
  }
  return std::nullopt;
}

SplitId random_split(TaskKind task) {
  return task == TaskKind::kRelation ? SplitId::kI : SplitId::kA;
}

const std::vector<SplitId>& held_out_splits(TaskKind task) {
  static const std::vector<SplitId> compositional = {SplitId::kB, SplitId::kC, SplitId::kD,
                                                     SplitId::kE, SplitId::kF, SplitId::kG,
                                                     SplitId::kH};
  static const std::vector<SplitId> relation = {SplitId::kII, SplitId::kIII, SplitId::kIV,
                                                SplitId::kV, SplitId::kVI};
  return task == TaskKind::kRelation ? relation : compositional;
}

RoutePlan base_route(Position from, Position to, bool zigzag) {
  const int dc = to.col - from.col;
  const int dr = to.row - from.row;
  const Heading h = dc > 0 ? Heading::kEast : Heading::kWest;
  const Heading v = dr > 0 ? Heading::kSouth : Heading::kNorth;
  int hs = std::abs(dc);
  int vs = std::abs(dr);
  RoutePlan plan;
  plan.steps.reserve(static_cast<std::size_t>(hs + vs));
  if (zigzag) {
    while (hs > 0 && vs > 0) {
      plan.steps.push_back(h);
      plan.steps.push_back(v);
      --hs;
      --vs;
    }
  }
  plan.steps.insert(plan.steps.end(), static_cast<std::size_t>(hs), h);
  plan.steps.insert(plan.steps.end(), static_cast<std::size_t>(vs), v);
  return plan;
}

std::vector<Action> lower_route(const RoutePlan& plan, Heading start) {
  std::vector<Action> out;
  Heading cur = start;
  for (Heading want : plan.steps) {
    const int diff = (static_cast<int>(want) - static_cast<int>(cur) + 4) % 4;
    if (diff == 1) {
      out.push_back(Action::kTurnRight);
    } else if (diff == 3) {
      out.push_back(Action::kTurnLeft);
    } else if (diff == 2) {
      out.push_back(Action::kTurnLeft);
      out.push_back(Action::kTurnLeft);
    }
    cur = want;
    out.push_back(Action::kWalk);
  }
  return out;
}

std::vector<Action> apply_manner(const std::vector<Action>& actions, std::optional<Adverb> adverb,
                                 const MannerConfig& manner) {
  if (!adverb || *adverb == Adverb::kWhileZigzagging) return actions;
  std::vector<Action> out;
  out.reserve(actions.size() * 3);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const Action a = actions[i];
    switch (*adverb) {
      case Adverb::kHesitantly:
        out.push_back(a);
        if (is_motion(a)) out.push_back(Action::kStay);
        break;
      case Adverb::kWhileSpinning: {
        const bool group_start = a == Action::kWalk ||
                                 ((a == Action::kPush || a == Action::kPull) &&
                                  (i == 0 || actions[i - 1] != a));
        if (group_start) out.insert(out.end(), manner.spin_macro.begin(), manner.spin_macro.end());
        out.push_back(a);
        break;
      }
      case Adverb::kCautiously:
        if (a == Action::kWalk) {
          out.insert(out.end(), manner.look_macro.begin(), manner.look_macro.end());
        }
        out.push_back(a);
        break;
      case Adverb::kWhileZigzagging:
        out.push_back(a);
        break;
    }
  }
  return out;
}

std::vector<Action> verb_actions(const Situation& s, Verb verb) {
  std::vector<Action> out;
  if (verb == Verb::kWalkTo) return out;
  const auto idx = s.object_at(s.agent_pos);
  if (!idx) return out;
  const Action a = verb == Verb::kPush ? Action::kPush : Action::kPull;
  const int per_cell = s.objects[static_cast<std::size_t>(*idx)].spec.heavy() ? 2 : 1;
  Situation cur = s;
  for (;;) {
    Situation probe = cur;
    for (int i = 0; i < per_cell; ++i) probe = step(probe, a);
    if (probe.objects[static_cast<std::size_t>(*idx)].pos == cur.objects[static_cast<std::size_t>(*idx)].pos) {
      break;
    }
    out.insert(out.end(), static_cast<std::size_t>(per_cell), a);
    cur = std::move(probe);
  }
  return out;
}

std::vector<Action> plan_verb(const Situation& s, const CommandSemantics& sem) {
  const Position target = s.objects[static_cast<std::size_t>(s.target_idx)].pos;
  const bool zigzag = sem.adverb == Adverb::kWhileZigzagging;
  std::vector<Action> out = lower_route(base_route(s.agent_pos, target, zigzag), s.agent_heading);
  if (sem.verb != Verb::kWalkTo) {
    const Situation there = execute(s, out);
    const auto tail = verb_actions(there, sem.verb);
    out.insert(out.end(), tail.begin(), tail.end());
  }
  return out;
}

std::vector<Action> gold_actions(const Situation& s, const CommandSemantics& sem,
                                 const MannerConfig& manner) {
  return apply_manner(plan_verb(s, sem), sem.adverb, manner);
}

Example generate_example(const CommandAST& command, const Situation& scene, TaskKind task,
                         const MannerConfig& manner) {
  const CommandSemantics sem = semantics_of(command);
  if (resolve_target(scene, sem) != scene.target_idx) {
    throw Error("generate_example: scene target is not the unique satisfier");
  }
  Example ex;
  ex.task = task;
  ex.command = command;
  ex.situation = scene;
  ex.gold = gold_actions(scene, sem, manner);
  ex.meta.target_pos = ex.target().pos;
  if (ex.meta.target_pos != scene.agent_pos) {
    ex.meta.agent_to_target = relative_position(ex.meta.target_pos, scene.agent_pos).direction;
  }
  ex.meta.final_pos = execute(scene, ex.gold).agent_pos;
  return ex;
}

std::vector<std::string> check_example(const Example& e, const MannerConfig& manner) {
  std::vector<std::string> out;
  const Situation& s = e.situation;
  try {
    s.validate();
  } catch (const Error& err) {
    out.push_back(std::string("invalid situation: ") + err.what());
    return out;
  }
  const CommandSemantics sem = semantics_of(e.command);
  try {
    if (resolve_target(s, sem) != s.target_idx) out.push_back("command resolves to another object");
  } catch (const Error& err) {
    out.push_back(std::string("target not unique: ") + err.what());
    return out;
  }
  if (e.task == TaskKind::kRelation && !validate_unambiguous(s, sem)) {
    out.push_back("reference is ambiguous");
  }
  if (e.gold != gold_actions(s, sem, manner)) out.push_back("gold differs from oracle sequence");
  const Situation end = execute(s, e.gold);
  if (end.agent_pos != end.objects[static_cast<std::size_t>(s.target_idx)].pos) {
    out.push_back("gold run does not end on the target");
  }
  return out;
}

}  // namespace gscan
