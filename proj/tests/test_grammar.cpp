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

#include <set>

#include "doctest.h"
#include "gscan/config.hpp"
#include "gscan/error.hpp"
#include "gscan/grammar.hpp"
#include "test_util.hpp"

using namespace gscan;
using gscan::testing::command;

namespace {

const std::set<std::string> kRelationWords = {"next",  "north", "south", "east",
                                              "west"};

std::string text_of(const Instantiation& i) { return join_tokens(i.tokens); }

}  // namespace

TEST_CASE("relation grammar has 18 templates, all with a relation slot") {
  const auto templates = enumerate_templates(default_grammar(TaskKind::kRelation));
  CHECK(templates.size() == 18);
  std::set<std::string> ids;
  for (const auto& t : templates) {
    CHECK(t.has_relation());
    CHECK_FALSE(t.adverb_slot);
    ids.insert(to_string(t));
  }
  CHECK(ids.size() == 18);
}

TEST_CASE("compositional templates have no PP and adverbial ones end with the adverb") {
  const auto cfg = default_grammar(TaskKind::kCompositional);
  const auto templates = enumerate_templates(cfg);
  CHECK(templates.size() == 18);
  for (const auto& t : templates) CHECK_FALSE(t.has_relation());
  for (const auto& c : all_commands(cfg)) {
    const auto toks = surface(c);
    if (c.adverb == Adverb::kCautiously) CHECK(toks.back() == "cautiously");
    if (c.adverb == Adverb::kHesitantly) CHECK(toks.back() == "hesitantly");
    if (c.adverb == Adverb::kWhileSpinning) CHECK(toks.back() == "spinning");
    if (c.adverb == Adverb::kWhileZigzagging) CHECK(toks.back() == "zigzagging");
  }
}

TEST_CASE("instantiate yields the expected surface strings") {
  const auto rel = default_grammar(TaskKind::kRelation);
  Template walk{Verb::kWalkTo, 1, 1, false};
  Bindings b;
  b.target = {std::nullopt, Color::kBlue, Shape::kSquare};
  b.relation = Relation::kNorth;
  b.reference = NounPhrase{std::nullopt, Color::kRed, Shape::kCircle};
  auto i = instantiate(walk, b, rel.lexicon);
  CHECK(text_of(i) == "walk to a blue square north of a red circle");
  CHECK(i.semantics.relation == Relation::kNorth);
  CHECK(i.semantics.reference->color == Color::kRed);

  b.relation = Relation::kNextTo;
  CHECK(text_of(instantiate(walk, b, rel.lexicon)) == "walk to a blue square next to a red circle");

  const auto comp = default_grammar(TaskKind::kCompositional);
  Template hes{Verb::kWalkTo, 1, std::nullopt, true};
  Bindings h;
  h.target = {std::nullopt, Color::kRed, Shape::kCircle};
  h.adverb = Adverb::kHesitantly;
  CHECK(text_of(instantiate(hes, h, comp.lexicon)) == "walk to a red circle hesitantly");
}

TEST_CASE("instantiate rejects bindings outside the lexicon or the template") {
  auto cfg = default_grammar(TaskKind::kRelation);
  cfg.lexicon.colors = {Color::kRed};
  Template walk{Verb::kWalkTo, 1, 0, false};
  Bindings b;
  b.target = {std::nullopt, Color::kBlue, Shape::kSquare};
  b.relation = Relation::kNorth;
  b.reference = NounPhrase{std::nullopt, std::nullopt, Shape::kCircle};
  CHECK_THROWS_AS(instantiate(walk, b, cfg.lexicon), ConfigError);
  b.target.color = Color::kRed;
  CHECK_NOTHROW(instantiate(walk, b, cfg.lexicon));
  b.target.size = SizeAdj::kBig;
  CHECK_THROWS_AS(instantiate(walk, b, cfg.lexicon), ConfigError);
}

TEST_CASE("parse examples") {
  auto a = command("walk to a circle");
  CHECK(a.verb == Verb::kWalkTo);
  CHECK(a.target.shape == Shape::kCircle);
  CHECK_FALSE(a.relation.has_value());

  auto b = command("push a big yellow square south west of a cylinder");
  CHECK(b.verb == Verb::kPush);
  CHECK(b.target.size == SizeAdj::kBig);
  CHECK(b.target.color == Color::kYellow);
  CHECK(b.relation == Relation::kSouthWest);
  CHECK(b.reference->shape == Shape::kCylinder);

  auto c = command("pull a small circle while spinning");
  CHECK(c.adverb == Adverb::kWhileSpinning);
  CHECK(c.target.size == SizeAdj::kSmall);

  CHECK_THROWS_AS(command("walk a circle"), ParseError);
  CHECK_THROWS_AS(command("walk to a red big circle"), ParseError);
  CHECK_THROWS_AS(command("walk to a circle north of"), ParseError);
  CHECK_THROWS_AS(command("walk to a circle north of a square next to a circle"), ParseError);
}

TEST_CASE("parse names out-of-lexicon tokens") {
  try {
    command("jump to a circle");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("jump") != std::string::npos);
  }
}

TEST_CASE("every relation command round-trips, is unambiguous and unique") {
  const auto cfg = default_grammar(TaskKind::kRelation);
  const auto commands = all_commands(cfg);
  CHECK(commands.size() >= 25000);
  CHECK(commands.size() <= 40000);
  std::set<std::vector<std::string>> seen;
  for (const auto& c : commands) {
    const auto toks = surface(c);
    REQUIRE(seen.insert(toks).second);
    REQUIRE(count_derivations(toks, cfg) == 1);
    REQUIRE(parse(toks, cfg) == c);
    REQUIRE(parse(toks) == c);
    REQUIRE(c.relation.has_value());
    bool has_word = false;
    for (const auto& t : toks) has_word = has_word || kRelationWords.count(t);
    REQUIRE(has_word);
  }
}

TEST_CASE("every compositional command round-trips") {
  const auto cfg = default_grammar(TaskKind::kCompositional);
  const auto commands = all_commands(cfg);
  for (const auto& c : commands) {
    const auto toks = surface(c);
    REQUIRE(count_derivations(toks, cfg) == 1);
    REQUIRE(parse(toks) == c);
  }
  CHECK(commands.size() == 675);
}

TEST_CASE("a one-item lexicon yields exactly one instruction") {
  GrammarConfig cfg = default_grammar(TaskKind::kRelation);
  cfg.lexicon = Lexicon{{Verb::kWalkTo}, {Shape::kCircle}, {}, {}, {Relation::kNorth}, {}};
  cfg.target_arities = {0};
  cfg.reference_arities = {0};
  const auto commands = all_commands(cfg);
  REQUIRE(commands.size() == 1);
  CHECK(join_tokens(surface(commands[0])) == "walk to a circle north of a circle");
}

TEST_CASE("removing next_to strictly decreases the instruction count") {
  auto cfg = default_grammar(TaskKind::kRelation);
  const auto full = all_commands(cfg).size();
  std::erase(cfg.lexicon.relations, Relation::kNextTo);
  CHECK(all_commands(cfg).size() < full);
}

TEST_CASE("grammar keys override the lexicon") {
  auto kv = KeyValues::parse("task = compositional\ncolors = red, green\nadverbs = hesitantly\n");
  GrammarConfig cfg = default_grammar(TaskKind::kRelation);
  apply_grammar_keys(kv, cfg);
  CHECK(cfg.task == TaskKind::kCompositional);
  CHECK(cfg.lexicon.colors == std::vector<Color>{Color::kRed, Color::kGreen});
  CHECK(cfg.lexicon.adverbs == std::vector<Adverb>{Adverb::kHesitantly});
  CHECK_THROWS_AS(apply_grammar_keys(KeyValues::parse("colors = purple\n"), cfg), ConfigError);
  CHECK_THROWS_AS(apply_grammar_keys(KeyValues::parse("task = poetry\n"), cfg), ConfigError);
}

TEST_CASE("key-value parsing") {
  auto kv = KeyValues::parse("# comment\n a = 1 \nlist = x, y ,z\n\n");
  CHECK(kv.get("a") == "1");
  CHECK(kv.get_list("list") == std::vector<std::string>{"x", "y", "z"});
  CHECK_FALSE(kv.has("b"));
  CHECK_THROWS_AS(KeyValues::parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(KeyValues::parse("no equals sign\n"), ConfigError);
}
