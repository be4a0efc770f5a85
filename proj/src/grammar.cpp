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

#include "gscan/grammar.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <unordered_set>

#include "gscan/error.hpp"

namespace gscan {

namespace {

constexpr std::array<std::string_view, 2> kTaskNames = {"compositional", "relation"};
constexpr std::array<std::string_view, 3> kVerbNames = {"walk", "push", "pull"};
constexpr std::array<std::string_view, 4> kAdverbNames = {"cautiously", "hesitantly",
                                                          "while_spinning", "while_zigzagging"};
constexpr std::array<std::string_view, 2> kSizeNames = {"big", "small"};
constexpr std::array<std::string_view, kNumRelations> kRelationNames = {
    "next_to",    "north",      "east",       "south",     "west",
    "north_east", "north_west", "south_east", "south_west"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

template <typename T>
bool contains(const std::vector<T>& v, T x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::vector<std::string> verb_words(Verb v) {
  switch (v) {
    case Verb::kWalkTo: return {"walk", "to"};
    case Verb::kPush: return {"push"};
    case Verb::kPull: return {"pull"};
  }
  return {};
}

std::vector<std::string> adverb_words(Adverb a) {
  switch (a) {
    case Adverb::kCautiously: return {"cautiously"};
    case Adverb::kHesitantly: return {"hesitantly"};
    case Adverb::kWhileSpinning: return {"while", "spinning"};
    case Adverb::kWhileZigzagging: return {"while", "zigzagging"};
  }
  return {};
}

std::vector<std::string> relation_words(Relation r) {
  switch (r) {
    case Relation::kNextTo: return {"next", "to"};
    case Relation::kNorth: return {"north", "of"};
    case Relation::kEast: return {"east", "of"};
    case Relation::kSouth: return {"south", "of"};
    case Relation::kWest: return {"west", "of"};
    case Relation::kNorthEast: return {"north", "east", "of"};
    case Relation::kNorthWest: return {"north", "west", "of"};
    case Relation::kSouthEast: return {"south", "east", "of"};
    case Relation::kSouthWest: return {"south", "west", "of"};
  }
  return {};
}

void append_np(std::vector<std::string>& out, const NounPhrase& np) {
  out.emplace_back("a");
  if (np.size) out.emplace_back(to_string(*np.size));
  if (np.color) out.emplace_back(to_string(*np.color));
  out.emplace_back(to_string(np.shape));
}

template <typename Enum, typename FromString>
std::vector<Enum> parse_items(const KeyValues& kv, const std::string& key, FromString from) {
  std::vector<Enum> out;
  for (const auto& name : kv.get_list(key)) {
    auto v = from(name);
    if (!v) throw ConfigError("config key '" + key + "': unknown item '" + name + "'");
    if (!contains(out, *v)) out.push_back(*v);
  }
  return out;
}

std::vector<int> parse_arities(const KeyValues& kv, const std::string& key) {
  std::vector<int> out;
  for (const auto& s : kv.get_list(key)) {
    int a = -1;
    try {
      a = std::stoi(s);
    } catch (const std::exception&) {
    }
    if (a < 0 || a > 2) throw ConfigError("config key '" + key + "': arity must be 0, 1 or 2");
    if (!contains(out, a)) out.push_back(a);
  }
  return out;
}

// Enumerates every noun phrase over the lexicon with exactly `arity`
// adjectives (arity 2 = size + color).
std::vector<NounPhrase> noun_phrases(const Lexicon& lex, int arity) {
  std::vector<NounPhrase> out;
  for (Shape shape : lex.shapes) {
    if (arity == 0) {
      out.push_back({std::nullopt, std::nullopt, shape});
    } else if (arity == 1) {
      for (Color c : lex.colors) out.push_back({std::nullopt, c, shape});
      for (SizeAdj s : lex.sizes) out.push_back({s, std::nullopt, shape});
    } else {
      for (SizeAdj s : lex.sizes) {
        for (Color c : lex.colors) out.push_back({s, c, shape});
      }
    }
  }
  return out;
}

// --- parser ---------------------------------------------------------------

struct NpResult {
  NounPhrase np;
  std::optional<Relation> relation;
  std::optional<NounPhrase> reference;
  std::size_t next = 0;
};

class Parser {
 public:
  Parser(const std::vector<std::string>& tokens, const GrammarConfig& cfg)
      : toks_(tokens), lex_(cfg.lexicon) {}

  std::vector<CommandAST> parse_all() const {
    std::vector<CommandAST> out;
    for (Verb v : lex_.verbs) {
      const auto words = verb_words(v);
      if (!match(0, words)) continue;
      for (const auto& dp : parse_dp(words.size(), allow_pp())) {
        // ROOT -> VP
        if (dp.next == toks_.size()) out.push_back(make(v, dp, std::nullopt));
        // ROOT -> VP ADV
        for (Adverb a : allowed_adverbs()) {
          const auto aw = adverb_words(a);
          if (match(dp.next, aw) && dp.next + aw.size() == toks_.size()) {
            out.push_back(make(v, dp, a));
          }
        }
      }
    }
    return out;
  }

 private:
  bool allow_pp() const { return !lex_.relations.empty(); }
  const std::vector<Adverb>& allowed_adverbs() const { return lex_.adverbs; }

  static CommandAST make(Verb v, const NpResult& dp, std::optional<Adverb> a) {
    CommandAST ast;
    ast.verb = v;
    ast.adverb = a;
    ast.target = dp.np;
    ast.relation = dp.relation;
    ast.reference = dp.reference;
    return ast;
  }

  bool match(std::size_t pos, const std::vector<std::string>& words) const {
    if (pos + words.size() > toks_.size()) return false;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (toks_[pos + i] != words[i]) return false;
    }
    return true;
  }

  std::vector<NpResult> parse_dp(std::size_t pos, bool allow_pp) const {
    if (pos >= toks_.size() || toks_[pos] != "a") return {};
    return parse_np(pos + 1, NounPhrase{}, true, true, allow_pp);
  }

  std::vector<NpResult> parse_np(std::size_t pos, NounPhrase np, bool size_ok, bool color_ok,
                                 bool allow_pp) const {
    std::vector<NpResult> out;
    if (pos >= toks_.size()) return out;
    const std::string& tok = toks_[pos];
    // NP -> JJ NP, size adjective first.
    if (size_ok) {
      if (auto s = size_adj_from_string(tok); s && lex_.has(*s)) {
        NounPhrase next = np;
        next.size = s;
        auto sub = parse_np(pos + 1, next, false, color_ok, allow_pp);
        out.insert(out.end(), sub.begin(), sub.end());
      }
    }
    if (color_ok) {
      if (auto c = color_from_string(tok); c && lex_.has(*c)) {
        NounPhrase next = np;
        next.color = c;
        auto sub = parse_np(pos + 1, next, false, false, allow_pp);
        out.insert(out.end(), sub.begin(), sub.end());
      }
    }
    // NP -> NN, optionally followed by one PP.
    if (auto sh = shape_from_string(tok); sh && lex_.has(*sh)) {
      NounPhrase head = np;
      head.shape = *sh;
      out.push_back({head, std::nullopt, std::nullopt, pos + 1});
      if (allow_pp) {
        for (Relation r : lex_.relations) {
          const auto rw = relation_words(r);
          if (!match(pos + 1, rw)) continue;
          for (const auto& ref : parse_dp(pos + 1 + rw.size(), false)) {
            out.push_back({head, r, ref.np, ref.next});
          }
        }
      }
    }
    return out;
  }

  const std::vector<std::string>& toks_;
  const Lexicon& lex_;
};

std::unordered_set<std::string> vocabulary(const Lexicon& lex) {
  std::unordered_set<std::string> vocab = {"a"};
  auto add = [&vocab](const std::vector<std::string>& ws) { vocab.insert(ws.begin(), ws.end()); };
  for (Verb v : lex.verbs) add(verb_words(v));
  for (Adverb a : lex.adverbs) add(adverb_words(a));
  for (Relation r : lex.relations) add(relation_words(r));
  for (Shape s : lex.shapes) vocab.emplace(to_string(s));
  for (Color c : lex.colors) vocab.emplace(to_string(c));
  for (SizeAdj s : lex.sizes) vocab.emplace(to_string(s));
  return vocab;
}

}  // namespace

std::string_view to_string(TaskKind t) { return kTaskNames[static_cast<int>(t)]; }
std::string_view to_string(Verb v) { return kVerbNames[static_cast<int>(v)]; }
std::string_view to_string(Adverb a) { return kAdverbNames[static_cast<int>(a)]; }
std::string_view to_string(SizeAdj s) { return kSizeNames[static_cast<int>(s)]; }
std::string_view to_string(Relation r) { return kRelationNames[static_cast<int>(r)]; }

std::optional<TaskKind> task_from_string(std::string_view s) {
  return lookup<TaskKind>(kTaskNames, s);
}
std::optional<Verb> verb_from_string(std::string_view s) {
  if (s == "walk_to") return Verb::kWalkTo;
  return lookup<Verb>(kVerbNames, s);
}
std::optional<Adverb> adverb_from_string(std::string_view s) {
  return lookup<Adverb>(kAdverbNames, s);
}
std::optional<SizeAdj> size_adj_from_string(std::string_view s) {
  return lookup<SizeAdj>(kSizeNames, s);
}
std::optional<Relation> relation_from_string(std::string_view s) {
  return lookup<Relation>(kRelationNames, s);
}

std::optional<Direction> relation_direction(Relation r) {
  switch (r) {
    case Relation::kNextTo: return std::nullopt;
    case Relation::kNorth: return Direction::kNorth;
    case Relation::kEast: return Direction::kEast;
    case Relation::kSouth: return Direction::kSouth;
    case Relation::kWest: return Direction::kWest;
    case Relation::kNorthEast: return Direction::kNorthEast;
    case Relation::kNorthWest: return Direction::kNorthWest;
    case Relation::kSouthEast: return Direction::kSouthEast;
    case Relation::kSouthWest: return Direction::kSouthWest;
  }
  return std::nullopt;
}

CommandSemantics semantics_of(const CommandAST& ast) {
  return {ast.verb, ast.adverb, ast.target, ast.relation, ast.reference};
}

bool Lexicon::has(Verb v) const { return contains(verbs, v); }
bool Lexicon::has(Shape s) const { return contains(shapes, s); }
bool Lexicon::has(Color c) const { return contains(colors, c); }
bool Lexicon::has(SizeAdj s) const { return contains(sizes, s); }
bool Lexicon::has(Relation r) const { return contains(relations, r); }
bool Lexicon::has(Adverb a) const { return contains(adverbs, a); }

GrammarConfig default_grammar(TaskKind task) {
  GrammarConfig cfg;
  cfg.task = task;
  cfg.lexicon.verbs = {Verb::kWalkTo, Verb::kPush, Verb::kPull};
  cfg.lexicon.shapes = {Shape::kCircle, Shape::kSquare, Shape::kCylinder};
  cfg.lexicon.colors = {Color::kRed, Color::kGreen, Color::kBlue, Color::kYellow};
  cfg.lexicon.sizes = {SizeAdj::kBig, SizeAdj::kSmall};
  if (task == TaskKind::kRelation) {
    for (int r = 0; r < kNumRelations; ++r) cfg.lexicon.relations.push_back(static_cast<Relation>(r));
    cfg.target_arities = {0, 1};
    cfg.reference_arities = {0, 1, 2};
  } else {
    cfg.lexicon.adverbs = {Adverb::kCautiously, Adverb::kHesitantly, Adverb::kWhileSpinning,
                           Adverb::kWhileZigzagging};
    cfg.target_arities = {0, 1, 2};
  }
  return cfg;
}

void apply_grammar_keys(const KeyValues& kv, GrammarConfig& cfg) {
  if (auto t = kv.get("task")) {
    // Dataset kinds like `relation-small` share the base task's grammar.
    const std::string base = t->substr(0, t->find('-'));
    auto task = task_from_string(base);
    if (!task) throw ConfigError("unknown task kind '" + *t + "'");
    if (*task != cfg.task) cfg = default_grammar(*task);
  }
  if (kv.has("verbs")) cfg.lexicon.verbs = parse_items<Verb>(kv, "verbs", verb_from_string);
  if (kv.has("shapes")) cfg.lexicon.shapes = parse_items<Shape>(kv, "shapes", shape_from_string);
  if (kv.has("colors")) cfg.lexicon.colors = parse_items<Color>(kv, "colors", color_from_string);
  if (kv.has("sizes")) cfg.lexicon.sizes = parse_items<SizeAdj>(kv, "sizes", size_adj_from_string);
  if (kv.has("relations")) {
    cfg.lexicon.relations = parse_items<Relation>(kv, "relations", relation_from_string);
  }
  if (kv.has("adverbs")) {
    cfg.lexicon.adverbs = parse_items<Adverb>(kv, "adverbs", adverb_from_string);
  }
  if (kv.has("target_arities")) cfg.target_arities = parse_arities(kv, "target_arities");
  if (kv.has("reference_arities")) cfg.reference_arities = parse_arities(kv, "reference_arities");
}

std::string to_string(const Template& t) {
  std::string s(to_string(t.verb));
  s += "/" + std::to_string(t.target_arity);
  if (t.reference_arity) s += "/" + std::to_string(*t.reference_arity);
  if (t.adverb_slot) s += "/adv";
  return s;
}

std::vector<Template> enumerate_templates(const GrammarConfig& cfg) {
  std::vector<Template> out;
  for (Verb v : cfg.lexicon.verbs) {
    for (int ta : cfg.target_arities) {
      if (cfg.task == TaskKind::kRelation) {
        // Every relation-task template carries exactly one LOC phrase.
        if (cfg.lexicon.relations.empty()) continue;
        for (int ra : cfg.reference_arities) out.push_back({v, ta, ra, false});
      } else {
        out.push_back({v, ta, std::nullopt, false});
        if (!cfg.lexicon.adverbs.empty()) out.push_back({v, ta, std::nullopt, true});
      }
    }
  }
  return out;
}

Template template_of(const CommandAST& ast) {
  Template t;
  t.verb = ast.verb;
  t.target_arity = ast.target.arity();
  if (ast.reference) t.reference_arity = ast.reference->arity();
  t.adverb_slot = ast.adverb.has_value();
  return t;
}

namespace {

void check_np(const NounPhrase& np, int arity, const Lexicon& lex, const char* role) {
  const std::string r(role);
  if (!lex.has(np.shape)) throw ConfigError(r + " noun '" + std::string(to_string(np.shape)) + "' not in lexicon");
  if (np.color && !lex.has(*np.color)) {
    throw ConfigError(r + " color '" + std::string(to_string(*np.color)) + "' not in lexicon");
  }
  if (np.size && !lex.has(*np.size)) {
    throw ConfigError(r + " size '" + std::string(to_string(*np.size)) + "' not in lexicon");
  }
  if (np.arity() != arity) throw ConfigError(r + " noun phrase does not match template arity");
  if (arity == 2 && !(np.size && np.color)) {
    throw ConfigError(r + " noun phrase with two adjectives needs one size and one color");
  }
}

}  // namespace

Instantiation instantiate(const Template& t, const Bindings& b, const Lexicon& lexicon) {
  if (!lexicon.has(t.verb)) throw ConfigError("verb '" + std::string(to_string(t.verb)) + "' not in lexicon");
  check_np(b.target, t.target_arity, lexicon, "target");
  if (t.has_relation() != b.relation.has_value() || b.relation.has_value() != b.reference.has_value()) {
    throw ConfigError("relation binding does not match template");
  }
  if (b.relation) {
    if (!lexicon.has(*b.relation)) {
      throw ConfigError("relation '" + std::string(to_string(*b.relation)) + "' not in lexicon");
    }
    check_np(*b.reference, *t.reference_arity, lexicon, "reference");
  }
  if (t.adverb_slot != b.adverb.has_value()) throw ConfigError("adverb binding does not match template");
  if (b.adverb && !lexicon.has(*b.adverb)) {
    throw ConfigError("adverb '" + std::string(to_string(*b.adverb)) + "' not in lexicon");
  }
  CommandAST ast{t.verb, b.adverb, b.target, b.relation, b.reference};
  return {surface(ast), semantics_of(ast)};
}

std::vector<std::string> surface(const CommandAST& ast) {
  std::vector<std::string> out = verb_words(ast.verb);
  append_np(out, ast.target);
  if (ast.relation && ast.reference) {
    const auto rw = relation_words(*ast.relation);
    out.insert(out.end(), rw.begin(), rw.end());
    append_np(out, *ast.reference);
  }
  if (ast.adverb) {
    const auto aw = adverb_words(*ast.adverb);
    out.insert(out.end(), aw.begin(), aw.end());
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<std::string> split_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

const GrammarConfig& universal_grammar() {
  static const GrammarConfig cfg = [] {
    GrammarConfig g = default_grammar(TaskKind::kRelation);
    g.lexicon.adverbs = default_grammar(TaskKind::kCompositional).lexicon.adverbs;
    g.target_arities = {0, 1, 2};
    return g;
  }();
  return cfg;
}

std::size_t count_derivations(const std::vector<std::string>& tokens, const GrammarConfig& cfg) {
  return Parser(tokens, cfg).parse_all().size();
}

CommandAST parse(const std::vector<std::string>& tokens, const GrammarConfig& cfg) {
  const auto vocab = vocabulary(cfg.lexicon);
  for (const auto& t : tokens) {
    if (!vocab.count(t)) throw ParseError("token '" + t + "' is not in the lexicon");
  }
  auto parses = Parser(tokens, cfg).parse_all();
  if (parses.empty()) throw ParseError("no derivation for '" + join_tokens(tokens) + "'");
  if (parses.size() > 1) {
    throw ParseError("ambiguous command '" + join_tokens(tokens) + "' (" +
                     std::to_string(parses.size()) + " derivations)");
  }
  return parses.front();
}

CommandAST parse(const std::vector<std::string>& tokens) {
  return parse(tokens, universal_grammar());
}

std::vector<CommandAST> all_commands(const GrammarConfig& cfg) {
  std::vector<CommandAST> out;
  std::set<std::vector<std::string>> seen;
  auto emit = [&](const Template& t, const Bindings& b) {
    auto inst = instantiate(t, b, cfg.lexicon);
    if (seen.insert(inst.tokens).second) {
      const auto& s = inst.semantics;
      out.push_back({s.verb, s.adverb, s.target, s.relation, s.reference});
    }
  };
  for (const Template& t : enumerate_templates(cfg)) {
    for (const NounPhrase& target : noun_phrases(cfg.lexicon, t.target_arity)) {
      if (t.has_relation()) {
        const auto refs = noun_phrases(cfg.lexicon, *t.reference_arity);
        for (Relation r : cfg.lexicon.relations) {
          for (const NounPhrase& ref : refs) emit(t, {target, r, ref, std::nullopt});
        }
      } else if (t.adverb_slot) {
        for (Adverb a : cfg.lexicon.adverbs) emit(t, {target, std::nullopt, std::nullopt, a});
      } else {
        emit(t, {target, std::nullopt, std::nullopt, std::nullopt});
      }
    }
  }
  return out;
}

}  // namespace gscan
