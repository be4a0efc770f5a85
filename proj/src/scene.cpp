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

#include "gscan/scene.hpp"

#include <algorithm>

#include "gscan/error.hpp"

namespace gscan {

namespace {

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool coin(Rng& rng) { return uniform(rng, 0, 1) == 1; }

template <typename T>
T pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

bool relation_holds(Position a, Position b, Relation r) {
  if (a == b) return false;
  const RelativePosition rel = relative_position(a, b);
  if (r == Relation::kNextTo) return rel.next_to;
  return rel.direction == *relation_direction(r);
}

// Unit displacement of `a` relative to `b` for a directional relation.
Position unit_delta(Direction d) {
  switch (d) {
    case Direction::kNorth: return {0, -1};
    case Direction::kEast: return {1, 0};
    case Direction::kSouth: return {0, 1};
    case Direction::kWest: return {-1, 0};
    case Direction::kNorthEast: return {1, -1};
    case Direction::kNorthWest: return {-1, -1};
    case Direction::kSouthEast: return {1, 1};
    case Direction::kSouthWest: return {-1, 1};
  }
  return {0, 0};
}

std::vector<Position> neighbours(const Situation& s, Position p) {
  std::vector<Position> out;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dc == 0 && dr == 0) continue;
      Position q{p.col + dc, p.row + dr};
      if (s.in_bounds(q)) out.push_back(q);
    }
  }
  return out;
}

std::vector<Position> free_cells(const Situation& s) {
  std::vector<Position> out;
  for (int r = 0; r < s.grid_size; ++r) {
    for (int c = 0; c < s.grid_size; ++c) {
      Position p{c, r};
      if (!s.object_at(p)) out.push_back(p);
    }
  }
  return out;
}

// Spec for an object that should match `np`. Sizes leave room for a
// contrast object when the phrase uses a size adjective.
ObjectSpec spec_for(const NounPhrase& np, const GenConstraints& gc, Rng& rng) {
  ObjectSpec spec;
  spec.shape = np.shape;
  spec.color = np.color ? *np.color : pick(rng, gc.colors);
  int lo = kMinObjectSize;
  int hi = kMaxObjectSize;
  if (np.size == SizeAdj::kSmall) hi = kMaxObjectSize - 1;
  if (np.size == SizeAdj::kBig) lo = kMinObjectSize + 1;
  spec.size = uniform(rng, lo, hi);
  return spec;
}

ObjectSpec random_spec(const GenConstraints& gc, Rng& rng) {
  return {pick(rng, gc.shapes), pick(rng, gc.colors), uniform(rng, kMinObjectSize, kMaxObjectSize)};
}

// Same shape (and color when named) as `anchor`, strictly on the far side of
// the size ordering so the adjective has something to contrast with.
ObjectSpec contrast_spec(const NounPhrase& np, const ObjectSpec& anchor, const GenConstraints& gc,
                         Rng& rng) {
  ObjectSpec spec;
  spec.shape = anchor.shape;
  spec.color = np.color ? anchor.color : pick(rng, gc.colors);
  if (np.size == SizeAdj::kSmall) {
    spec.size = uniform(rng, anchor.size + 1, kMaxObjectSize);
  } else {
    spec.size = uniform(rng, kMinObjectSize, anchor.size - 1);
  }
  return spec;
}

int place(Situation& s, const ObjectSpec& spec, Position p) {
  s.objects.push_back({spec, p});
  return static_cast<int>(s.objects.size()) - 1;
}

std::optional<int> place_random(Situation& s, const ObjectSpec& spec, Rng& rng) {
  const auto cells = free_cells(s);
  if (cells.empty()) return std::nullopt;
  return place(s, spec, pick(rng, cells));
}

bool same_pattern(const ObjectSpec& spec, const NounPhrase& np) {
  return spec.shape == np.shape && (!np.color || spec.color == *np.color);
}

struct Draft {
  Situation s;
  std::vector<int> contrast;
};

bool add_contrast(Draft& d, const NounPhrase& np, int anchor, const GenConstraints& gc, Rng& rng) {
  if (!np.size || !gc.require_size_contrast) return true;
  const ObjectSpec spec = contrast_spec(np, d.s.objects[static_cast<std::size_t>(anchor)].spec, gc, rng);
  auto idx = place_random(d.s, spec, rng);
  if (!idx) return false;
  d.contrast.push_back(*idx);
  return true;
}

bool place_agent(Situation& s, Rng& rng) {
  const auto cells = free_cells(s);
  if (cells.empty()) return false;
  s.agent_pos = pick(rng, cells);
  s.agent_heading = static_cast<Heading>(uniform(rng, 0, 3));
  return true;
}

std::optional<Draft> draft_relation(const CommandSemantics& sem, const GenConstraints& gc, Rng& rng) {
  Draft d;
  Situation& s = d.s;
  s.grid_size = gc.grid_size;
  const Relation rel = *sem.relation;
  const NounPhrase& ref_np = *sem.reference;

  // Target and its adjacent reference.
  const ObjectSpec t_spec = spec_for(sem.target, gc, rng);
  const ObjectSpec r_spec = spec_for(ref_np, gc, rng);
  Position t_pos{uniform(rng, 0, gc.grid_size - 1), uniform(rng, 0, gc.grid_size - 1)};
  Position r_pos;
  if (rel == Relation::kNextTo) {
    r_pos = pick(rng, neighbours(s, t_pos));
  } else {
    const Position delta = unit_delta(*relation_direction(rel));
    r_pos = {t_pos.col - delta.col, t_pos.row - delta.row};
    if (!s.in_bounds(r_pos)) return std::nullopt;
  }
  s.target_idx = place(s, t_spec, t_pos);
  s.reference_idx = place(s, r_spec, r_pos);

  if (!add_contrast(d, sem.target, s.target_idx, gc, rng)) return std::nullopt;
  if (!add_contrast(d, ref_np, *s.reference_idx, gc, rng)) return std::nullopt;

  // Visual distractors: copies of the target, optionally with a reference.
  const int k = uniform(rng, 0, gc.max_distractors);
  for (int i = 0; i < k; ++i) {
    std::vector<Position> cells;
    for (Position p : free_cells(s)) {
      if (rel == Relation::kNextTo && chebyshev(p, r_pos) <= 1) continue;
      cells.push_back(p);
    }
    if (cells.empty()) return std::nullopt;
    const Position v_pos = pick(rng, cells);
    const int v = place(s, t_spec, v_pos);
    s.distractor_idxs.push_back(v);
    std::optional<int> own_ref;
    if (coin(rng)) {
      if (rel == Relation::kNextTo) {
        // A neighbour that does not fit the reference description.
        ObjectSpec o_spec = random_spec(gc, rng);
        for (int tries = 0; tries < 8 && same_pattern(o_spec, ref_np); ++tries) {
          o_spec = random_spec(gc, rng);
        }
        if (same_pattern(o_spec, ref_np)) return std::nullopt;
        std::vector<Position> around;
        for (Position p : neighbours(s, v_pos)) {
          if (!s.object_at(p)) around.push_back(p);
        }
        if (around.empty()) return std::nullopt;
        own_ref = place(s, o_spec, pick(rng, around));
      } else if (coin(rng) && !relation_holds(v_pos, r_pos, rel)) {
        own_ref = *s.reference_idx;
      } else {
        // A reference look-alike in some other relative position.
        std::vector<Position> cells2;
        for (Position p : free_cells(s)) {
          if (!relation_holds(v_pos, p, rel)) cells2.push_back(p);
        }
        if (cells2.empty()) return std::nullopt;
        own_ref = place(s, r_spec, pick(rng, cells2));
      }
    }
    s.distractor_reference_idxs.push_back(own_ref);
  }
  if (!place_agent(s, rng)) return std::nullopt;
  return d;
}

std::optional<Draft> draft_plain(const CommandSemantics& sem, const GenConstraints& gc, Rng& rng) {
  Draft d;
  Situation& s = d.s;
  s.grid_size = gc.grid_size;
  const ObjectSpec t_spec = spec_for(sem.target, gc, rng);
  s.target_idx = place(s, t_spec, {uniform(rng, 0, gc.grid_size - 1), uniform(rng, 0, gc.grid_size - 1)});
  if (!add_contrast(d, sem.target, s.target_idx, gc, rng)) return std::nullopt;

  // Distractors that share some attributes with the target but do not fit
  // the description.
  const int k = uniform(rng, 0, gc.max_distractors);
  for (int i = 0; i < k; ++i) {
    ObjectSpec spec = random_spec(gc, rng);
    for (int tries = 0; tries < 8 && same_pattern(spec, sem.target); ++tries) {
      spec = random_spec(gc, rng);
    }
    auto idx = place_random(s, spec, rng);
    if (!idx) return std::nullopt;
    s.distractor_idxs.push_back(*idx);
    s.distractor_reference_idxs.push_back(std::nullopt);
  }
  if (!place_agent(s, rng)) return std::nullopt;
  return d;
}

void check_palette(const CommandSemantics& sem, const GenConstraints& gc) {
  auto check = [&gc](const NounPhrase& np) {
    if (std::find(gc.shapes.begin(), gc.shapes.end(), np.shape) == gc.shapes.end()) {
      throw ConfigError("shape '" + std::string(to_string(np.shape)) + "' is not in the palette");
    }
    if (np.color && std::find(gc.colors.begin(), gc.colors.end(), *np.color) == gc.colors.end()) {
      throw ConfigError("color '" + std::string(to_string(*np.color)) + "' is not in the palette");
    }
  };
  if (gc.shapes.empty() || gc.colors.empty()) throw ConfigError("empty object palette");
  check(sem.target);
  if (sem.relation.has_value() != sem.reference.has_value()) {
    throw ConfigError("relation and reference must be given together");
  }
  if (sem.reference) check(*sem.reference);
}

}  // namespace

bool matches_np(const Situation& s, int idx, const NounPhrase& np) {
  const ObjectSpec& spec = s.objects[static_cast<std::size_t>(idx)].spec;
  if (!same_pattern(spec, np)) return false;
  if (!np.size) return true;
  int lo = spec.size;
  int hi = spec.size;
  for (const auto& other : s.objects) {
    if (!same_pattern(other.spec, np)) continue;
    lo = std::min(lo, other.spec.size);
    hi = std::max(hi, other.spec.size);
  }
  if (lo == hi) return false;
  return *np.size == SizeAdj::kSmall ? spec.size == lo : spec.size == hi;
}

std::vector<int> qualifying_references(const Situation& s, int idx, const CommandSemantics& sem) {
  std::vector<int> out;
  if (!sem.relation || !sem.reference) return out;
  const Position p = s.objects[static_cast<std::size_t>(idx)].pos;
  for (int j = 0; j < static_cast<int>(s.objects.size()); ++j) {
    if (j == idx) continue;
    if (!relation_holds(p, s.objects[static_cast<std::size_t>(j)].pos, *sem.relation)) continue;
    if (matches_np(s, j, *sem.reference)) out.push_back(j);
  }
  return out;
}

std::vector<int> satisfiers(const Situation& s, const CommandSemantics& sem) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(s.objects.size()); ++i) {
    if (!matches_np(s, i, sem.target)) continue;
    if (sem.relation && qualifying_references(s, i, sem).empty()) continue;
    out.push_back(i);
  }
  return out;
}

bool validate_unambiguous(const Situation& s, const CommandSemantics& sem) {
  return satisfiers(s, sem).size() == 1;
}

int resolve_target(const Situation& s, const CommandSemantics& sem) {
  const auto sat = satisfiers(s, sem);
  if (sat.size() != 1) {
    throw Error("resolve_target: " + std::to_string(sat.size()) + " objects satisfy the command");
  }
  return sat.front();
}

bool distractor_rules_hold(const Situation& s, const CommandSemantics& sem) {
  if (!sem.relation || !s.reference_idx) return true;
  const auto& objs = s.objects;
  const PlacedObject& t = objs[static_cast<std::size_t>(s.target_idx)];
  const PlacedObject& r = objs[static_cast<std::size_t>(*s.reference_idx)];
  const bool next_to = *sem.relation == Relation::kNextTo;
  const Direction want = next_to ? Direction::kNorth : relative_position(t.pos, r.pos).direction;
  for (std::size_t i = 0; i < s.distractor_idxs.size(); ++i) {
    const PlacedObject& v = objs[static_cast<std::size_t>(s.distractor_idxs[i])];
    if (v.spec != t.spec) return false;
    const auto& o_idx = s.distractor_reference_idxs[i];
    if (next_to) {
      if (chebyshev(v.pos, r.pos) <= 1) return false;
      if (o_idx) {
        if (*o_idx == *s.reference_idx) return false;
        if (same_pattern(objs[static_cast<std::size_t>(*o_idx)].spec, *sem.reference)) return false;
      }
    } else if (o_idx) {
      if (relative_position(v.pos, objs[static_cast<std::size_t>(*o_idx)].pos).direction == want) {
        return false;
      }
    }
  }
  return true;
}

SampledScene sample_situation(const CommandSemantics& sem, const GenConstraints& gc, Rng& rng) {
  check_palette(sem, gc);
  if (gc.grid_size < 3) throw ConfigError("grid too small for scene generation");
  if (gc.max_distractors < 0) throw ConfigError("max_distractors must be non-negative");
  for (int attempt = 1; attempt <= gc.max_retries; ++attempt) {
    auto draft = sem.relation ? draft_relation(sem, gc, rng) : draft_plain(sem, gc, rng);
    if (!draft) continue;
    const Situation& s = draft->s;
    const auto sat = satisfiers(s, sem);
    if (sat.size() != 1 || sat.front() != s.target_idx) continue;
    if (sem.relation) {
      const auto refs = qualifying_references(s, s.target_idx, sem);
      if (refs.size() != 1 || refs.front() != *s.reference_idx) continue;
      if (!distractor_rules_hold(s, sem)) continue;
    }
    return {std::move(draft->s), std::move(draft->contrast), attempt};
  }
  throw UnsatisfiableError("no unambiguous scene after " + std::to_string(gc.max_retries) + " retries",
                           gc.max_retries);
}

}  // namespace gscan
