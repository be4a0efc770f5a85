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

// Command grammar.
//
//   ROOT -> VP [ADV]
//   VP   -> 'walk' 'to' DP | ('push' | 'pull') DP
//   DP   -> 'a' NP
//   NP   -> [SIZE] [COLOR] NN [PP]       (PP only on the outermost NP)
//   PP   -> LOC DP
//
// The recursion of the textbook rules `NP -> JJ NP` and `NP -> NP PP` is
// bounded to at most one size adjective, one color adjective (size first)
// and one prepositional phrase per command, which keeps the language finite
// and every sentence uniquely derivable.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gscan/config.hpp"
#include "gscan/world.hpp"

namespace gscan {

enum class TaskKind : std::uint8_t { kCompositional = 0, kRelation = 1 };

enum class Verb : std::uint8_t { kWalkTo = 0, kPush = 1, kPull = 2 };
enum class Adverb : std::uint8_t {
  kCautiously = 0,
  kHesitantly = 1,
  kWhileSpinning = 2,
  kWhileZigzagging = 3,
};
enum class SizeAdj : std::uint8_t { kBig = 0, kSmall = 1 };

/// LOC lexicon: `next to` plus the eight compass relations.
enum class Relation : std::uint8_t {
  kNextTo = 0,
  kNorth,
  kEast,
  kSouth,
  kWest,
  kNorthEast,
  kNorthWest,
  kSouthEast,
  kSouthWest,
};
inline constexpr int kNumRelations = 9;

std::string_view to_string(TaskKind t);
std::string_view to_string(Verb v);
std::string_view to_string(Adverb a);
std::string_view to_string(SizeAdj s);
std::string_view to_string(Relation r);

std::optional<TaskKind> task_from_string(std::string_view s);
std::optional<Verb> verb_from_string(std::string_view s);
std::optional<Adverb> adverb_from_string(std::string_view s);
std::optional<SizeAdj> size_adj_from_string(std::string_view s);
std::optional<Relation> relation_from_string(std::string_view s);

/// Compass class a directional relation asserts, or nullopt for next_to.
std::optional<Direction> relation_direction(Relation r);

struct NounPhrase {
  std::optional<SizeAdj> size;
  std::optional<Color> color;
  Shape shape = Shape::kCircle;

  int arity() const { return (size ? 1 : 0) + (color ? 1 : 0); }
  bool operator==(const NounPhrase&) const = default;
};

struct CommandAST {
  Verb verb = Verb::kWalkTo;
  std::optional<Adverb> adverb;
  NounPhrase target;
  std::optional<Relation> relation;
  std::optional<NounPhrase> reference;

  bool operator==(const CommandAST&) const = default;
};

/// The machine-readable meaning of a command: what to do, to which object
/// pattern, and (relation task) relative to which reference pattern.
struct CommandSemantics {
  Verb verb = Verb::kWalkTo;
  std::optional<Adverb> adverb;
  NounPhrase target;
  std::optional<Relation> relation;
  std::optional<NounPhrase> reference;

  bool operator==(const CommandSemantics&) const = default;
};

CommandSemantics semantics_of(const CommandAST& ast);

struct Lexicon {
  std::vector<Verb> verbs;
  std::vector<Shape> shapes;
  std::vector<Color> colors;
  std::vector<SizeAdj> sizes;
  std::vector<Relation> relations;
  std::vector<Adverb> adverbs;

  bool has(Verb v) const;
  bool has(Shape s) const;
  bool has(Color c) const;
  bool has(SizeAdj s) const;
  bool has(Relation r) const;
  bool has(Adverb a) const;
  bool operator==(const Lexicon&) const = default;
};

struct GrammarConfig {
  TaskKind task = TaskKind::kRelation;
  Lexicon lexicon;
  // Adjective counts allowed on the target / reference NP of a template.
  std::vector<int> target_arities;
  std::vector<int> reference_arities;

  bool operator==(const GrammarConfig&) const = default;
};

GrammarConfig default_grammar(TaskKind task);

/// Overrides grammar fields from `task`, `verbs`, `shapes`, `colors`,
/// `sizes`, `relations`, `adverbs`, `target_arities`, `reference_arities`.
void apply_grammar_keys(const KeyValues& kv, GrammarConfig& cfg);

struct Template {
  Verb verb = Verb::kWalkTo;
  int target_arity = 0;
  std::optional<int> reference_arity;  // present iff the template has a PP
  bool adverb_slot = false;

  bool has_relation() const { return reference_arity.has_value(); }
  bool operator==(const Template&) const = default;
};

/// Stable identifier such as `push/1/2` or `walk/0/adv`.
std::string to_string(const Template& t);

std::vector<Template> enumerate_templates(const GrammarConfig& cfg);
Template template_of(const CommandAST& ast);

struct Bindings {
  NounPhrase target;
  std::optional<Relation> relation;
  std::optional<NounPhrase> reference;
  std::optional<Adverb> adverb;
};

struct Instantiation {
  std::vector<std::string> tokens;
  CommandSemantics semantics;
};

/// Throws ConfigError when a binding is absent from the lexicon or does not
/// fit the template's slots.
Instantiation instantiate(const Template& t, const Bindings& b, const Lexicon& lexicon);

std::vector<std::string> surface(const CommandAST& ast);
std::string join_tokens(const std::vector<std::string>& tokens);
std::vector<std::string> split_tokens(std::string_view text);

/// Union grammar: every lexicon item, PPs and adverbs allowed.
const GrammarConfig& universal_grammar();

/// Throws ParseError on unknown tokens, no derivation, or more than one.
CommandAST parse(const std::vector<std::string>& tokens, const GrammarConfig& cfg);
CommandAST parse(const std::vector<std::string>& tokens);

/// Number of distinct derivations of `tokens`; used to audit ambiguity.
std::size_t count_derivations(const std::vector<std::string>& tokens, const GrammarConfig& cfg);

/// Every instruction reachable from the config's templates, deduplicated, in
/// template-major order.
std::vector<CommandAST> all_commands(const GrammarConfig& cfg);

}  // namespace gscan
