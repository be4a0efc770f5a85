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

// Scene sampling and reference resolution.
//
// An object satisfies a command when it matches the target noun phrase and,
// for relation commands, stands in the stated relation to at least one
// object matching the reference noun phrase. A scene is well-formed for a
// command when exactly one object satisfies it.
//
// Size adjectives are relative. The comparison set of a noun phrase is every
// object of its shape, narrowed to its color when it names one. `small`
// picks the objects at the minimum size of that set and `big` those at the
// maximum, and both need at least one object of another size in the set.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gscan/grammar.hpp"
#include "gscan/world.hpp"

namespace gscan {

using Rng = std::mt19937_64;

struct GenConstraints {
  int grid_size = kDefaultGridSize;
  int max_distractors = 3;
  bool require_size_contrast = true;
  int max_retries = 100;
  // Object palette; reduced-primitive datasets never show excluded items.
  std::vector<Shape> shapes = {Shape::kCircle, Shape::kSquare, Shape::kCylinder};
  std::vector<Color> colors = {Color::kRed, Color::kGreen, Color::kBlue, Color::kYellow};
};

struct SampledScene {
  Situation situation;
  std::vector<int> size_contrast_idxs;
  int attempts = 0;  // 1 when the first draw was accepted
};

bool matches_np(const Situation& s, int idx, const NounPhrase& np);

/// Indices of every object satisfying the full description.
std::vector<int> satisfiers(const Situation& s, const CommandSemantics& sem);

/// Indices of objects that can serve as `idx`'s reference under `sem`.
std::vector<int> qualifying_references(const Situation& s, int idx, const CommandSemantics& sem);

bool validate_unambiguous(const Situation& s, const CommandSemantics& sem);

/// Throws gscan::Error unless exactly one object satisfies `sem`.
int resolve_target(const Situation& s, const CommandSemantics& sem);

/// Checks the distractor placement rules of the relation task on a sampled
/// scene: `next to` distractors keep away from the reference and carry
/// references that differ from it; directional distractors never stand in
/// the commanded relation to their own reference.
bool distractor_rules_hold(const Situation& s, const CommandSemantics& sem);

/// Throws UnsatisfiableError after `gc.max_retries` rejected draws, and
/// ConfigError when `sem` names something outside the palette.
SampledScene sample_situation(const CommandSemantics& sem, const GenConstraints& gc, Rng& rng);

}  // namespace gscan
