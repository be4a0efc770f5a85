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

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>

#include "doctest.h"
#include "gscan/error.hpp"
#include "gscan/grammar.hpp"
#include "gscan/scene.hpp"
#include "test_util.hpp"

using namespace gscan;
using gscan::testing::command;

namespace {

// Test-side reading of the descriptions, written from the definitions
// rather than from the library.
bool brute_np(const std::vector<PlacedObject>& objs, std::size_t i, const NounPhrase& np) {
  const ObjectSpec& o = objs[i].spec;
  if (o.shape != np.shape) return false;
  if (np.color && o.color != *np.color) return false;
  if (!np.size) return true;
  std::set<int> sizes;
  for (const auto& p : objs) {
    if (p.spec.shape == np.shape && (!np.color || p.spec.color == *np.color)) sizes.insert(p.spec.size);
  }
  if (sizes.size() < 2) return false;
  return *np.size == SizeAdj::kSmall ? o.size == *sizes.begin() : o.size == *sizes.rbegin();
}

bool brute_relation(Position a, Position b, Relation r) {
  const int dc = a.col - b.col;
  const int dr = a.row - b.row;
  if (dc == 0 && dr == 0) return false;
  switch (r) {
    case Relation::kNextTo: return std::abs(dc) <= 1 && std::abs(dr) <= 1;
    case Relation::kNorth: return dc == 0 && dr < 0;
    case Relation::kSouth: return dc == 0 && dr > 0;
    case Relation::kEast: return dr == 0 && dc > 0;
    case Relation::kWest: return dr == 0 && dc < 0;
    case Relation::kNorthEast: return dc > 0 && dr < 0;
    case Relation::kNorthWest: return dc < 0 && dr < 0;
    case Relation::kSouthEast: return dc > 0 && dr > 0;
    case Relation::kSouthWest: return dc < 0 && dr > 0;
  }
  return false;
}

std::vector<int> brute_satisfiers(const Situation& s, const CommandSemantics& sem) {
  std::vector<int> out;
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    if (!brute_np(s.objects, i, sem.target)) continue;
    bool ok = !sem.relation;
    for (std::size_t j = 0; j < s.objects.size() && !ok; ++j) {
      ok = j != i && brute_np(s.objects, j, *sem.reference) &&
           brute_relation(s.objects[i].pos, s.objects[j].pos, *sem.relation);
    }
    if (ok) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<CommandAST> every_command() {
  auto out = all_commands(default_grammar(TaskKind::kRelation));
  auto comp = all_commands(default_grammar(TaskKind::kCompositional));
  out.insert(out.end(), comp.begin(), comp.end());
  return out;
}

}  // namespace

TEST_CASE("size adjectives resolve against same-shape objects") {
  Situation s;
  s.objects = {{{Shape::kCircle, Color::kRed, 2}, {0, 0}},
               {{Shape::kCircle, Color::kBlue, 4}, {1, 0}},
               {{Shape::kSquare, Color::kRed, 1}, {2, 0}}};
  s.agent_pos = {5, 5};
  CHECK(resolve_target(s, semantics_of(command("walk to a small circle"))) == 0);
  CHECK(resolve_target(s, semantics_of(command("walk to a big circle"))) == 1);
  // Only one red circle: no contrast, so no referent.
  CHECK(satisfiers(s, semantics_of(command("walk to a small red circle"))).empty());
  // A lone square has no size contrast either.
  CHECK_THROWS_AS(resolve_target(s, semantics_of(command("walk to a big square"))), Error);
  CHECK(resolve_target(s, semantics_of(command("walk to a square"))) == 2);
}

TEST_CASE("validate_unambiguous examples") {
  Situation s;
  s.agent_pos = {5, 5};
  s.objects = {{{Shape::kSquare, Color::kBlue, 1}, {0, 0}},
               {{Shape::kCircle, Color::kRed, 1}, {0, 1}},
               {{Shape::kSquare, Color::kBlue, 1}, {3, 3}},
               {{Shape::kCircle, Color::kRed, 1}, {3, 4}}};
  const auto sem = semantics_of(command("walk to a blue square north of a red circle"));
  CHECK_FALSE(validate_unambiguous(s, sem));
  s.objects[3].pos = {4, 3};
  CHECK(validate_unambiguous(s, sem));
  CHECK(resolve_target(s, sem) == 0);
  CHECK_FALSE(validate_unambiguous(s, semantics_of(command("walk to a cylinder"))));
}

TEST_CASE("satisfiers agree with brute-force enumeration on 10000 scenes") {
  const auto commands = every_command();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> pick(0, commands.size() - 1);
  int nonempty = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Situation s = testing::random_situation(rng, 6, 14);
    const auto sem = semantics_of(commands[pick(rng)]);
    const auto got = satisfiers(s, sem);
    REQUIRE(got == brute_satisfiers(s, sem));
    nonempty += !got.empty();
  }
  CHECK(nonempty > 500);
}

TEST_CASE("sampled scenes are unambiguous and follow the placement rules") {
  const auto commands = every_command();
  GenConstraints gc;
  Rng rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, commands.size() - 1);
  std::set<int> distractor_counts;
  int sampled = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto sem = semantics_of(commands[pick(rng)]);
    SampledScene sc;
    try {
      sc = sample_situation(sem, gc, rng);
    } catch (const UnsatisfiableError&) {
      continue;
    }
    ++sampled;
    const Situation& s = sc.situation;
    REQUIRE_NOTHROW(s.validate());
    REQUIRE(brute_satisfiers(s, sem) == std::vector<int>{s.target_idx});
    REQUIRE(resolve_target(s, sem) == s.target_idx);
    CHECK_FALSE(s.object_at(s.agent_pos).has_value());
    distractor_counts.insert(static_cast<int>(s.distractor_idxs.size()));
    REQUIRE(s.distractor_idxs.size() == s.distractor_reference_idxs.size());
    if (!sem.relation) continue;

    const auto& t = s.objects[static_cast<std::size_t>(s.target_idx)];
    const auto& r = s.objects[static_cast<std::size_t>(*s.reference_idx)];
    CHECK(brute_relation(t.pos, r.pos, *sem.relation));
    CHECK(std::max(std::abs(t.pos.col - r.pos.col), std::abs(t.pos.row - r.pos.row)) == 1);
    int qualifying = 0;
    for (std::size_t j = 0; j < s.objects.size(); ++j) {
      if (static_cast<int>(j) != s.target_idx && brute_np(s.objects, j, *sem.reference) &&
          brute_relation(t.pos, s.objects[j].pos, *sem.relation)) {
        ++qualifying;
      }
    }
    CHECK(qualifying == 1);
    for (std::size_t i = 0; i < s.distractor_idxs.size(); ++i) {
      const auto& v = s.objects[static_cast<std::size_t>(s.distractor_idxs[i])];
      CHECK(v.spec == t.spec);
      const auto& own = s.distractor_reference_idxs[i];
      if (*sem.relation == Relation::kNextTo) {
        CHECK(std::max(std::abs(v.pos.col - r.pos.col), std::abs(v.pos.row - r.pos.row)) > 1);
        if (own) CHECK(*own != *s.reference_idx);
      } else if (own) {
        CHECK_FALSE(brute_relation(v.pos, s.objects[static_cast<std::size_t>(*own)].pos, *sem.relation));
      }
    }
  }
  CHECK(sampled > 9900);
  CHECK(distractor_counts == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("n = 0 leaves target, reference and contrast objects only") {
  GenConstraints gc;
  gc.max_distractors = 0;
  Rng rng(3);
  const auto plain = semantics_of(command("walk to a big red square next to a small circle"));
  for (int i = 0; i < 200; ++i) {
    const auto sc = sample_situation(plain, gc, rng);
    CHECK(sc.situation.distractor_idxs.empty());
    CHECK(sc.size_contrast_idxs.size() == 2);
    CHECK(sc.situation.objects.size() == 4);
  }
  const auto bare = semantics_of(command("walk to a square north of a circle"));
  for (int i = 0; i < 200; ++i) CHECK(sample_situation(bare, gc, rng).situation.objects.size() == 2);
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto sem = semantics_of(command("pull a yellow cylinder south west of a big circle"));
  GenConstraints gc;
  Rng a(42), b(42);
  for (int i = 0; i < 50; ++i) CHECK(sample_situation(sem, gc, a).situation == sample_situation(sem, gc, b).situation);
}

TEST_CASE("sampling errors") {
  GenConstraints gc;
  gc.colors = {Color::kRed};
  Rng rng(1);
  CHECK_THROWS_AS(sample_situation(semantics_of(command("walk to a blue circle")), gc, rng), ConfigError);
  GenConstraints tiny;
  tiny.grid_size = 2;
  CHECK_THROWS_AS(sample_situation(semantics_of(command("walk to a circle")), tiny, rng), ConfigError);
  // Identical target and reference descriptions cannot be unambiguous with next to.
  GenConstraints few;
  few.max_retries = 5;
  try {
    sample_situation(semantics_of(command("walk to a circle next to a circle")), few, rng);
    FAIL("expected UnsatisfiableError");
  } catch (const UnsatisfiableError& e) {
    CHECK(e.retries() == 5);
  }
}
