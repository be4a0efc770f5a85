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

// Grid world: positions, objects, the deterministic action executor and the
// per-cell tensor encoding consumed by models.
//
// Coordinates are (col, row) with row 0 on the north edge, so "north"
// decreases the row index and "east" increases the column index.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gscan {

inline constexpr int kDefaultGridSize = 6;

struct Position {
  int col = 0;
  int row = 0;

  bool operator==(const Position&) const = default;
  auto operator<=>(const Position&) const = default;
};

enum class Heading : std::uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

enum class Shape : std::uint8_t { kCircle = 0, kSquare = 1, kCylinder = 2 };
enum class Color : std::uint8_t { kRed = 0, kGreen = 1, kBlue = 2, kYellow = 3 };

inline constexpr int kNumShapes = 3;
inline constexpr int kNumColors = 4;
inline constexpr int kMinObjectSize = 1;
inline constexpr int kMaxObjectSize = 4;

/// Objects of this size or larger need two push/pull actions per cell.
inline constexpr int kHeavySize = 3;

struct ObjectSpec {
  Shape shape = Shape::kCircle;
  Color color = Color::kRed;
  int size = 1;

  bool heavy() const { return size >= kHeavySize; }
  bool operator==(const ObjectSpec&) const = default;
};

struct PlacedObject {
  ObjectSpec spec;
  Position pos;

  bool operator==(const PlacedObject&) const = default;
};

enum class Action : std::uint8_t {
  kWalk = 0,
  kTurnLeft = 1,
  kTurnRight = 2,
  kPush = 3,
  kPull = 4,
  kStay = 5,
};
inline constexpr int kNumActions = 6;

/// Compass class of a displacement. Pure-axis displacements map to the four
/// cardinal classes, anything else to a diagonal class.
enum class Direction : std::uint8_t {
  kNorth = 0,
  kEast,
  kSouth,
  kWest,
  kNorthEast,
  kNorthWest,
  kSouthEast,
  kSouthWest,
};
inline constexpr int kNumDirections = 8;

struct RelativePosition {
  Direction direction = Direction::kNorth;
  bool next_to = false;  // Chebyshev distance == 1

  bool operator==(const RelativePosition&) const = default;
};

struct Situation {
  int grid_size = kDefaultGridSize;
  Position agent_pos;
  Heading agent_heading = Heading::kEast;
  std::vector<PlacedObject> objects;
  int target_idx = 0;
  std::optional<int> reference_idx;
  std::vector<int> distractor_idxs;
  std::vector<std::optional<int>> distractor_reference_idxs;
  // Partial pushes/pulls applied to the heavy object under the agent.
  int push_progress = 0;

  bool operator==(const Situation&) const = default;

  bool in_bounds(Position p) const {
    return p.col >= 0 && p.row >= 0 && p.col < grid_size && p.row < grid_size;
  }
  std::optional<int> object_at(Position p) const;

  /// Throws gscan::Error describing the first violated invariant.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Naming. Every enum round-trips through its lower-case snake_case name.

std::string_view to_string(Heading h);
std::string_view to_string(Shape s);
std::string_view to_string(Color c);
std::string_view to_string(Action a);
std::string_view to_string(Direction d);

std::optional<Heading> heading_from_string(std::string_view s);
std::optional<Shape> shape_from_string(std::string_view s);
std::optional<Color> color_from_string(std::string_view s);
std::optional<Action> action_from_string(std::string_view s);
std::optional<Direction> direction_from_string(std::string_view s);

// ---------------------------------------------------------------------------
// Geometry.

Heading turn_left(Heading h);
Heading turn_right(Heading h);
Position offset(Position p, Heading h, int steps = 1);

/// Throws gscan::Error when a == b.
RelativePosition relative_position(Position a, Position b);

int manhattan(Position a, Position b);
int chebyshev(Position a, Position b);

// ---------------------------------------------------------------------------
// Dynamics. Total functions: illegal moves are no-ops.

Situation step(const Situation& s, Action a);
Situation execute(const Situation& s, std::span<const Action> actions);

// ---------------------------------------------------------------------------
// Tensor encoding.

/// Channel layout of one grid cell.
namespace channel {
inline constexpr int kAgent = 0;
inline constexpr int kHeading = 1;   // 4 channels, Heading order
inline constexpr int kShape = 5;     // 3 channels, Shape order
inline constexpr int kColor = 8;     // 4 channels, Color order
inline constexpr int kSize = 12;     // 4 channels, sizes 1..4
inline constexpr int kCount = 16;
}  // namespace channel

struct WorldTensor {
  int grid_size = kDefaultGridSize;
  int channels = channel::kCount;
  std::vector<float> data;  // row-major: [row][col][channel]

  float at(int col, int row, int ch) const {
    return data[static_cast<std::size_t>((row * grid_size + col) * channels + ch)];
  }
  float& at(int col, int row, int ch) {
    return data[static_cast<std::size_t>((row * grid_size + col) * channels + ch)];
  }
};

WorldTensor encode_world(const Situation& s);

}  // namespace gscan
