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

#include "gscan/world.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "gscan/error.hpp"

namespace gscan {

namespace {

constexpr std::array<std::string_view, 4> kHeadingNames = {"north", "east", "south", "west"};
constexpr std::array<std::string_view, kNumShapes> kShapeNames = {"circle", "square", "cylinder"};
constexpr std::array<std::string_view, kNumColors> kColorNames = {"red", "green", "blue", "yellow"};
constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "walk", "turn_left", "turn_right", "push", "pull", "stay"};
constexpr std::array<std::string_view, kNumDirections> kDirectionNames = {
    "north", "east", "south", "west", "north_east", "north_west", "south_east", "south_west"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Heading h) { return kHeadingNames[static_cast<int>(h)]; }
std::string_view to_string(Shape s) { return kShapeNames[static_cast<int>(s)]; }
std::string_view to_string(Color c) { return kColorNames[static_cast<int>(c)]; }
std::string_view to_string(Action a) { return kActionNames[static_cast<int>(a)]; }
std::string_view to_string(Direction d) { return kDirectionNames[static_cast<int>(d)]; }

std::optional<Heading> heading_from_string(std::string_view s) {
  return lookup<Heading>(kHeadingNames, s);
}
std::optional<Shape> shape_from_string(std::string_view s) { return lookup<Shape>(kShapeNames, s); }
std::optional<Color> color_from_string(std::string_view s) { return lookup<Color>(kColorNames, s); }
std::optional<Action> action_from_string(std::string_view s) {
  return lookup<Action>(kActionNames, s);
}
std::optional<Direction> direction_from_string(std::string_view s) {
  return lookup<Direction>(kDirectionNames, s);
}

Heading turn_left(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 3) % 4); }
Heading turn_right(Heading h) { return static_cast<Heading>((static_cast<int>(h) + 1) % 4); }

Position offset(Position p, Heading h, int steps) {
  switch (h) {
    case Heading::kNorth: return {p.col, p.row - steps};
    case Heading::kEast: return {p.col + steps, p.row};
    case Heading::kSouth: return {p.col, p.row + steps};
    case Heading::kWest: return {p.col - steps, p.row};
  }
  return p;
}

int manhattan(Position a, Position b) {
  return std::abs(a.col - b.col) + std::abs(a.row - b.row);
}

int chebyshev(Position a, Position b) {
  return std::max(std::abs(a.col - b.col), std::abs(a.row - b.row));
}

RelativePosition relative_position(Position a, Position b) {
  if (a == b) throw Error("relative_position: positions coincide");
  const int dc = a.col - b.col;
  const int dr = a.row - b.row;
  Direction d;
  if (dc == 0) {
    d = dr < 0 ? Direction::kNorth : Direction::kSouth;
  } else if (dr == 0) {
    d = dc > 0 ? Direction::kEast : Direction::kWest;
  } else if (dr < 0) {
    d = dc > 0 ? Direction::kNorthEast : Direction::kNorthWest;
  } else {
    d = dc > 0 ? Direction::kSouthEast : Direction::kSouthWest;
  }
  return {d, chebyshev(a, b) == 1};
}

std::optional<int> Situation::object_at(Position p) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].pos == p) return static_cast<int>(i);
  }
  return std::nullopt;
}

void Situation::validate() const {
  if (grid_size < 1) throw Error("situation: grid_size must be positive");
  if (!in_bounds(agent_pos)) throw Error("situation: agent out of bounds");
  const int n = static_cast<int>(objects.size());
  auto valid_idx = [n](int i) { return i >= 0 && i < n; };
  if (!valid_idx(target_idx)) throw Error("situation: target index out of range");
  if (reference_idx) {
    if (!valid_idx(*reference_idx)) throw Error("situation: reference index out of range");
    if (*reference_idx == target_idx) throw Error("situation: reference equals target");
  }
  if (distractor_reference_idxs.size() != distractor_idxs.size()) {
    throw Error("situation: distractor reference list length mismatch");
  }
  for (int d : distractor_idxs) {
    if (!valid_idx(d)) throw Error("situation: distractor index out of range");
  }
  for (const auto& o : distractor_reference_idxs) {
    if (o && !valid_idx(*o)) throw Error("situation: distractor reference index out of range");
  }
  if (push_progress < 0 || push_progress > 1) throw Error("situation: push_progress not in {0,1}");
  std::set<Position> cells;
  for (const auto& obj : objects) {
    if (!in_bounds(obj.pos)) throw Error("situation: object out of bounds");
    if (obj.spec.size < kMinObjectSize || obj.spec.size > kMaxObjectSize) {
      throw Error("situation: object size not in [1,4]");
    }
    if (!cells.insert(obj.pos).second) throw Error("situation: two objects share a cell");
  }
}

namespace {

// Moves the object under the agent one cell along `dir`, with the agent.
// Heavy objects move on every second consecutive push/pull.
Situation shove(const Situation& s, Heading dir) {
  const auto idx = s.object_at(s.agent_pos);
  if (!idx) return s;
  const Position dest = offset(s.agent_pos, dir);
  if (!s.in_bounds(dest) || s.object_at(dest)) return s;
  Situation next = s;
  if (s.objects[*idx].spec.heavy() && s.push_progress == 0) {
    next.push_progress = 1;
    return next;
  }
  next.push_progress = 0;
  next.objects[*idx].pos = dest;
  next.agent_pos = dest;
  return next;
}

}  // namespace

Situation step(const Situation& s, Action a) {
  switch (a) {
    case Action::kWalk: {
      const Position dest = offset(s.agent_pos, s.agent_heading);
      if (!s.in_bounds(dest)) return s;
      Situation next = s;
      next.agent_pos = dest;
      next.push_progress = 0;
      return next;
    }
    case Action::kTurnLeft: {
      Situation next = s;
      next.agent_heading = turn_left(s.agent_heading);
      next.push_progress = 0;
      return next;
    }
    case Action::kTurnRight: {
      Situation next = s;
      next.agent_heading = turn_right(s.agent_heading);
      next.push_progress = 0;
      return next;
    }
    case Action::kPush:
      return shove(s, s.agent_heading);
    case Action::kPull:
      return shove(s, turn_left(turn_left(s.agent_heading)));
    case Action::kStay:
      return s;
  }
  return s;
}

Situation execute(const Situation& s, std::span<const Action> actions) {
  Situation cur = s;
  for (Action a : actions) cur = step(cur, a);
  return cur;
}

WorldTensor encode_world(const Situation& s) {
  WorldTensor t;
  t.grid_size = s.grid_size;
  t.channels = channel::kCount;
  t.data.assign(static_cast<std::size_t>(s.grid_size * s.grid_size * channel::kCount), 0.0f);
  const Position a = s.agent_pos;
  t.at(a.col, a.row, channel::kAgent) = 1.0f;
  t.at(a.col, a.row, channel::kHeading + static_cast<int>(s.agent_heading)) = 1.0f;
  for (const auto& obj : s.objects) {
    const Position p = obj.pos;
    t.at(p.col, p.row, channel::kShape + static_cast<int>(obj.spec.shape)) = 1.0f;
    t.at(p.col, p.row, channel::kColor + static_cast<int>(obj.spec.color)) = 1.0f;
    t.at(p.col, p.row, channel::kSize + obj.spec.size - kMinObjectSize) = 1.0f;
  }
  return t;
}

}  // namespace gscan
