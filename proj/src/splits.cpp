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

#include "gscan/splits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "gscan/error.hpp"

namespace gscan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, index, purpose).
std::uint64_t stream_seed(std::uint64_t seed, std::int64_t index, std::uint64_t salt) {
  return splitmix64(splitmix64(seed ^ salt) + static_cast<std::uint64_t>(index));
}

double unit_draw(std::uint64_t seed, std::int64_t index) {
  return static_cast<double>(stream_seed(seed, index, 0x5a17) >> 11) * 0x1.0p-53;
}

bool is_object(const PlacedObject* o, Shape shape, Color color) {
  return o && o->spec.shape == shape && o->spec.color == color;
}

std::string normalize_kind(std::string kind) {
  std::replace(kind.begin(), kind.end(), '_', '-');
  return kind;
}

std::vector<Action> parse_actions(const KeyValues& kv, const std::string& key) {
  std::vector<Action> out;
  for (const auto& name : kv.get_list(key)) {
    auto a = action_from_string(name);
    if (!a) throw ConfigError("config key '" + key + "': unknown action '" + name + "'");
    out.push_back(*a);
  }
  return out;
}

template <typename T>
T parse_number(const KeyValues& kv, const std::string& key) {
  const std::string v = *kv.get(key);
  try {
    std::size_t used = 0;
    T out;
    if constexpr (std::is_floating_point_v<T>) {
      out = static_cast<T>(std::stod(v, &used));
    } else if constexpr (std::is_unsigned_v<T>) {
      out = static_cast<T>(std::stoull(v, &used));
    } else {
      out = static_cast<T>(std::stoll(v, &used));
    }
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': invalid number '" + v + "'");
  }
}

void sync_palette(DatasetConfig& cfg) {
  cfg.gen.shapes = cfg.grammar.lexicon.shapes;
  cfg.gen.colors = cfg.grammar.lexicon.colors;
}

}  // namespace

DatasetConfig reduced_primitive_config(const std::string& kind) {
  const std::string k = normalize_kind(kind);
  DatasetConfig cfg;
  auto drop = [](auto& v, auto x) { v.erase(std::remove(v.begin(), v.end(), x), v.end()); };
  if (k == "compositional-small") {
    cfg.grammar = default_grammar(TaskKind::kCompositional);
    drop(cfg.grammar.lexicon.shapes, Shape::kCylinder);
    drop(cfg.grammar.lexicon.colors, Color::kBlue);
    drop(cfg.grammar.lexicon.adverbs, Adverb::kWhileZigzagging);
    cfg.count_mode = CountMode::kTrain;
    cfg.target_count = 110000;
  } else if (k == "relation-small") {
    cfg.grammar = default_grammar(TaskKind::kRelation);
    drop(cfg.grammar.lexicon.shapes, Shape::kCylinder);
    drop(cfg.grammar.lexicon.relations, Relation::kNextTo);
    cfg.count_mode = CountMode::kTrain;
    cfg.target_count = 74000;
  } else {
    throw ConfigError("unknown reduced-primitive kind '" + kind + "'");
  }
  cfg.kind = k;
  sync_palette(cfg);
  return cfg;
}

DatasetConfig dataset_config(const std::string& kind) {
  const std::string k = normalize_kind(kind);
  if (k == "compositional-small" || k == "relation-small") return reduced_primitive_config(k);
  DatasetConfig cfg;
  cfg.kind = k;
  if (k == "relation") {
    cfg.grammar = default_grammar(TaskKind::kRelation);
    cfg.count_mode = CountMode::kTotal;
    cfg.target_count = 260000;
  } else if (k == "compositional") {
    cfg.grammar = default_grammar(TaskKind::kCompositional);
    cfg.count_mode = CountMode::kTrain;
    cfg.target_count = 360000;
  } else {
    throw ConfigError("unknown task kind '" + kind + "'");
  }
  sync_palette(cfg);
  return cfg;
}

void apply_dataset_keys(const KeyValues& kv, DatasetConfig& out) {
  DatasetConfig cfg = out;
  static const std::set<std::string> kKnown = {
      "task",         "verbs",           "shapes",       "colors",       "sizes",
      "relations",    "adverbs",         "target_arities", "reference_arities",
      "grid_size",    "max_distractors", "max_retries",  "count_mode",   "target_count",
      "dev_fraction", "test_fraction",   "few_shot_k",   "seed",         "look_macro",
      "spin_macro"};
  for (const auto& [k, v] : kv.entries()) {
    if (!kKnown.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }
  if (auto t = kv.get("task")) cfg = dataset_config(*t);
  KeyValues grammar_keys = kv;
  if (kv.has("task")) {
    // The task key already reset the whole config above.
    grammar_keys = KeyValues();
    for (const auto& [k, v] : kv.entries()) {
      if (k != "task") grammar_keys.set(k, v);
    }
  }
  apply_grammar_keys(grammar_keys, cfg.grammar);
  sync_palette(cfg);
  if (kv.has("grid_size")) cfg.gen.grid_size = parse_number<int>(kv, "grid_size");
  if (kv.has("max_distractors")) cfg.gen.max_distractors = parse_number<int>(kv, "max_distractors");
  if (kv.has("max_retries")) cfg.gen.max_retries = parse_number<int>(kv, "max_retries");
  if (auto m = kv.get("count_mode")) {
    if (*m == "total") {
      cfg.count_mode = CountMode::kTotal;
    } else if (*m == "train") {
      cfg.count_mode = CountMode::kTrain;
    } else {
      throw ConfigError("config key 'count_mode': expected 'total' or 'train'");
    }
  }
  if (kv.has("target_count")) cfg.target_count = parse_number<std::int64_t>(kv, "target_count");
  if (kv.has("dev_fraction")) cfg.dev_fraction = parse_number<double>(kv, "dev_fraction");
  if (kv.has("test_fraction")) cfg.test_fraction = parse_number<double>(kv, "test_fraction");
  if (kv.has("few_shot_k")) cfg.few_shot_k = parse_number<int>(kv, "few_shot_k");
  if (kv.has("seed")) cfg.seed = parse_number<std::uint64_t>(kv, "seed");
  if (kv.has("look_macro")) cfg.manner.look_macro = parse_actions(kv, "look_macro");
  if (kv.has("spin_macro")) cfg.manner.spin_macro = parse_actions(kv, "spin_macro");
  validate_config(cfg);
  out = std::move(cfg);
}

void validate_config(const DatasetConfig& cfg) {
  if (cfg.gen.grid_size < 3 || cfg.gen.grid_size > 64) throw ConfigError("grid_size must be in [3, 64]");
  if (cfg.gen.max_distractors < 0) throw ConfigError("max_distractors must be >= 0");
  if (cfg.gen.max_retries < 1) throw ConfigError("max_retries must be >= 1");
  if (cfg.target_count < 0) throw ConfigError("target_count must be >= 0");
  if (!(cfg.dev_fraction > 0.0 && cfg.dev_fraction < 1.0)) throw ConfigError("dev_fraction must be in (0,1)");
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) throw ConfigError("test_fraction must be in (0,1)");
  if (cfg.dev_fraction + cfg.test_fraction >= 1.0) throw ConfigError("dev_fraction + test_fraction must be < 1");
  if (cfg.few_shot_k < 0) throw ConfigError("few_shot_k must be >= 0");
  if (cfg.grammar.lexicon.verbs.empty() || cfg.grammar.lexicon.shapes.empty() ||
      cfg.grammar.lexicon.colors.empty()) {
    throw ConfigError("lexicon needs at least one verb, shape and color");
  }
  if (enumerate_templates(cfg.grammar).empty()) throw ConfigError("grammar yields no templates");
}

std::vector<std::string> unsupported_splits(const DatasetConfig& cfg) {
  const Lexicon& lex = cfg.grammar.lexicon;
  std::vector<std::string> out;
  auto need = [&out](bool ok, SplitId id, const char* what) {
    if (!ok) out.push_back(std::string(to_string(id)) + ": lexicon lacks " + what);
  };
  if (cfg.task() == TaskKind::kCompositional) {
    need(lex.has(Color::kYellow) && lex.has(Shape::kSquare), SplitId::kB, "yellow/square");
    need(lex.has(Color::kRed) && lex.has(Shape::kSquare), SplitId::kC, "red/square");
    need(lex.has(Shape::kCircle) && lex.has(SizeAdj::kSmall), SplitId::kE, "circle/small");
    need(lex.has(Shape::kSquare) && (lex.has(Verb::kPush) || lex.has(Verb::kPull)), SplitId::kF,
         "square/push-or-pull");
    need(lex.has(Adverb::kCautiously), SplitId::kG, "cautiously");
    need(lex.has(Adverb::kWhileSpinning) && lex.has(Verb::kPull), SplitId::kH,
         "while_spinning/pull");
  } else {
    need(lex.has(Color::kRed) && lex.has(Shape::kSquare), SplitId::kII, "red/square");
    need(lex.has(Color::kGreen) && lex.has(Shape::kSquare) && lex.has(Color::kBlue) &&
             lex.has(Shape::kCircle),
         SplitId::kIII, "green/square/blue/circle");
    need(lex.has(Color::kYellow) && lex.has(Shape::kSquare), SplitId::kIV, "yellow/square");
    need(lex.has(Relation::kNorth) || lex.has(Relation::kNextTo), SplitId::kV, "north or next_to");
    need(lex.has(Relation::kSouthWest) || lex.has(Relation::kNextTo), SplitId::kVI,
         "south_west or next_to");
  }
  return out;
}

bool satisfies_split(const Example& e, SplitId id) {
  const PlacedObject& t = e.target();
  const PlacedObject* r = e.reference();
  const CommandAST& c = e.command;
  auto rel_dir = [&]() -> std::optional<Direction> {
    if (!r) return std::nullopt;
    return relative_position(t.pos, r->pos).direction;
  };
  switch (id) {
    case SplitId::kB:
      return is_object(&t, Shape::kSquare, Color::kYellow) && c.target.color == Color::kYellow &&
             c.target.shape == Shape::kSquare;
    case SplitId::kC:
      return is_object(&t, Shape::kSquare, Color::kRed);
    case SplitId::kD:
      return e.meta.agent_to_target == Direction::kSouthWest;
    case SplitId::kE:
      return t.spec.shape == Shape::kCircle && t.spec.size == 2 && c.target.size == SizeAdj::kSmall;
    case SplitId::kF:
      return t.spec.shape == Shape::kSquare && t.spec.size == 3 &&
             (c.verb == Verb::kPush || c.verb == Verb::kPull);
    case SplitId::kG:
      return c.adverb == Adverb::kCautiously;
    case SplitId::kH:
      return c.adverb == Adverb::kWhileSpinning && c.verb == Verb::kPull;
    case SplitId::kII:
      return is_object(&t, Shape::kSquare, Color::kRed) || is_object(r, Shape::kSquare, Color::kRed);
    case SplitId::kIII:
      return (is_object(&t, Shape::kSquare, Color::kGreen) && is_object(r, Shape::kCircle, Color::kBlue)) ||
             (is_object(&t, Shape::kCircle, Color::kBlue) && is_object(r, Shape::kSquare, Color::kGreen));
    case SplitId::kIV:
      return is_object(&t, Shape::kSquare, Color::kYellow);
    case SplitId::kV:
      return rel_dir() == Direction::kNorth;
    case SplitId::kVI:
      return rel_dir() == Direction::kSouthWest;
    default:
      return false;
  }
}

std::vector<SplitId> assign_splits(const Example& e) {
  std::vector<SplitId> out;
  for (SplitId id : held_out_splits(e.task)) {
    if (satisfies_split(e, id)) out.push_back(id);
  }
  return out;
}

std::vector<SplitId> Dataset::split_ids() const {
  std::vector<SplitId> out;
  for (const auto& [id, _] : splits) out.push_back(id);
  return out;
}

std::size_t Dataset::count(SplitId id) const {
  auto it = splits.find(id);
  return it == splits.end() ? 0 : it->second.size();
}

Example generate_indexed(const DatasetConfig& cfg, const std::vector<CommandAST>& commands,
                         std::int64_t index, BuildStats* stats) {
  Rng rng(stream_seed(cfg.seed, index, 0x9e11));
  std::uniform_int_distribution<std::size_t> pick(0, commands.size() - 1);
  constexpr int kMaxCommandDraws = 64;
  for (int draw = 0; draw < kMaxCommandDraws; ++draw) {
    const CommandAST& cmd = commands[pick(rng)];
    try {
      SampledScene scene = sample_situation(semantics_of(cmd), cfg.gen, rng);
      Example ex = generate_example(cmd, scene.situation, cfg.task(), cfg.manner);
      ex.id = index;
      if (stats) stats->scene_attempts += scene.attempts;
      return ex;
    } catch (const UnsatisfiableError& e) {
      if (stats) {
        stats->scene_attempts += e.retries();
        ++stats->unsatisfiable_draws;
      }
    }
  }
  throw UnsatisfiableError("example " + std::to_string(index) + ": no command could be grounded",
                           kMaxCommandDraws);
}

Dataset build_dataset(const DatasetConfig& cfg, const BuildOptions& opts) {
  validate_config(cfg);
  if (auto missing = unsupported_splits(cfg); !missing.empty()) {
    std::string msg = "configuration cannot populate every held-out split:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw ConfigError(msg);
  }
  const std::vector<CommandAST> commands = all_commands(cfg.grammar);
  if (commands.empty()) throw ConfigError("grammar yields no commands");

  Dataset ds;
  ds.config = cfg;
  const TaskKind task = cfg.task();
  const SplitId random_test = random_split(task);
  ds.splits[SplitId::kTrain];
  ds.splits[SplitId::kDev];
  ds.splits[random_test];
  for (SplitId id : held_out_splits(task)) ds.splits[id];

  const int workers = std::max(1, opts.workers);
  const std::int64_t batch = std::max<std::int64_t>(1, opts.batch_size);
  std::int64_t next_index = 0;
  std::int64_t injected = 0;
  auto done = [&]() {
    return cfg.count_mode == CountMode::kTotal
               ? next_index >= cfg.target_count
               : static_cast<std::int64_t>(ds.splits[SplitId::kTrain].size()) >= cfg.target_count;
  };

  std::vector<Example> buffer;
  while (!done()) {
    std::int64_t n = batch;
    if (cfg.count_mode == CountMode::kTotal) n = std::min(n, cfg.target_count - next_index);
    buffer.assign(static_cast<std::size_t>(n), Example{});
    std::vector<BuildStats> per_example(static_cast<std::size_t>(n));
    auto run = [&](int w) {
      for (std::int64_t i = w; i < n; i += workers) {
        const auto slot = static_cast<std::size_t>(i);
        buffer[slot] = generate_indexed(cfg, commands, next_index + i, &per_example[slot]);
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }

    // Sequential assignment keeps the result independent of worker count.
    for (std::size_t slot = 0; slot < buffer.size(); ++slot) {
      if (done()) break;
      Example& ex = buffer[slot];
      ++next_index;
      ++ds.stats.generated;
      ds.stats.scene_attempts += per_example[slot].scene_attempts;
      ds.stats.unsatisfiable_draws += per_example[slot].unsatisfiable_draws;
      const auto held = assign_splits(ex);
      if (!held.empty()) {
        if (held.size() == 1 && held.front() == SplitId::kG && injected < cfg.few_shot_k) {
          ++injected;
          ds.splits[SplitId::kTrain].push_back(std::move(ex));
          continue;
        }
        for (std::size_t j = 0; j + 1 < held.size(); ++j) ds.splits[held[j]].push_back(ex);
        ds.splits[held.back()].push_back(std::move(ex));
        continue;
      }
      const double u = unit_draw(cfg.seed, ex.id);
      if (u < cfg.dev_fraction) {
        ds.splits[SplitId::kDev].push_back(std::move(ex));
      } else if (u < cfg.dev_fraction + cfg.test_fraction) {
        ds.splits[random_test].push_back(std::move(ex));
      } else {
        ds.splits[SplitId::kTrain].push_back(std::move(ex));
      }
    }
  }
  return ds;
}

std::vector<std::size_t> subsample_indices(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("fraction must be in (0, 1]");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(stream_seed(seed, 0, 0x5b5a));
  std::shuffle(order.begin(), order.end(), rng);
  const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  order.resize(std::min(keep, n));
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<Example> subsample(const std::vector<Example>& train, double fraction,
                               std::uint64_t seed) {
  std::vector<Example> out;
  for (std::size_t i : subsample_indices(train.size(), fraction, seed)) out.push_back(train[i]);
  return out;
}

}  // namespace gscan
