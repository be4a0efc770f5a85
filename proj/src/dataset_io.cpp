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

#include "gscan/dataset_io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "gscan/error.hpp"

namespace gscan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <typename E>
ordered_json names(const std::vector<E>& items) {
  ordered_json out = ordered_json::array();
  for (E x : items) out.push_back(std::string(to_string(x)));
  return out;
}

template <typename E, typename F>
std::vector<E> from_names(const json& j, F from, const char* what) {
  std::vector<E> out;
  for (const auto& n : j) {
    auto v = from(n.get<std::string>());
    if (!v) throw SchemaError(std::string("unknown ") + what + " '" + n.get<std::string>() + "'");
    out.push_back(*v);
  }
  return out;
}

ordered_json position_json(Position p) { return ordered_json{{"col", p.col}, {"row", p.row}}; }

Position position_from(const json& j) { return {j.at("col").get<int>(), j.at("row").get<int>()}; }

ordered_json object_json(const PlacedObject& o) {
  return ordered_json{{"shape", to_string(o.spec.shape)},
                      {"color", to_string(o.spec.color)},
                      {"size", o.spec.size},
                      {"col", o.pos.col},
                      {"row", o.pos.row}};
}

template <typename T>
ordered_json opt_name(const std::optional<T>& v) {
  return v ? ordered_json(std::string(to_string(*v))) : ordered_json(nullptr);
}

ordered_json opt_int(const std::optional<int>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<int> opt_int_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<int>();
}

Action action_from(const json& j) {
  const std::string s = j.get<std::string>();
  auto a = action_from_string(s);
  if (!a) throw SchemaError("unknown action token '" + s + "'");
  return *a;
}

ordered_json actions_json(const std::vector<Action>& actions) {
  ordered_json out = ordered_json::array();
  for (Action a : actions) out.push_back(std::string(to_string(a)));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const std::string& bytes) { EVP_DigestUpdate(ctx_, bytes.data(), bytes.size()); }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md.data(), &len);
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kDigits[md[i] >> 4];
      out += kDigits[md[i] & 0xf];
    }
    return out;
  }

 private:
  EVP_MD_CTX* ctx_;
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  Sha256 h;
  h.update(bytes);
  return h.hex();
}

ordered_json config_to_json(const DatasetConfig& cfg) {
  const Lexicon& lex = cfg.grammar.lexicon;
  ordered_json arities_t = cfg.grammar.target_arities;
  ordered_json arities_r = cfg.grammar.reference_arities;
  return ordered_json{
      {"kind", cfg.kind},
      {"task", to_string(cfg.task())},
      {"verbs", names(lex.verbs)},
      {"shapes", names(lex.shapes)},
      {"colors", names(lex.colors)},
      {"sizes", names(lex.sizes)},
      {"relations", names(lex.relations)},
      {"adverbs", names(lex.adverbs)},
      {"target_arities", arities_t},
      {"reference_arities", arities_r},
      {"grid_size", cfg.gen.grid_size},
      {"max_distractors", cfg.gen.max_distractors},
      {"max_retries", cfg.gen.max_retries},
      {"count_mode", cfg.count_mode == CountMode::kTotal ? "total" : "train"},
      {"target_count", cfg.target_count},
      {"dev_fraction", cfg.dev_fraction},
      {"test_fraction", cfg.test_fraction},
      {"few_shot_k", cfg.few_shot_k},
      {"seed", cfg.seed},
      {"look_macro", actions_json(cfg.manner.look_macro)},
      {"spin_macro", actions_json(cfg.manner.spin_macro)},
  };
}

DatasetConfig config_from_json(const json& j) {
  try {
    DatasetConfig cfg;
    cfg.kind = j.at("kind").get<std::string>();
    auto task = task_from_string(j.at("task").get<std::string>());
    if (!task) throw SchemaError("unknown task in config");
    cfg.grammar.task = *task;
    Lexicon& lex = cfg.grammar.lexicon;
    lex.verbs = from_names<Verb>(j.at("verbs"), verb_from_string, "verb");
    lex.shapes = from_names<Shape>(j.at("shapes"), shape_from_string, "shape");
    lex.colors = from_names<Color>(j.at("colors"), color_from_string, "color");
    lex.sizes = from_names<SizeAdj>(j.at("sizes"), size_adj_from_string, "size");
    lex.relations = from_names<Relation>(j.at("relations"), relation_from_string, "relation");
    lex.adverbs = from_names<Adverb>(j.at("adverbs"), adverb_from_string, "adverb");
    cfg.grammar.target_arities = j.at("target_arities").get<std::vector<int>>();
    cfg.grammar.reference_arities = j.at("reference_arities").get<std::vector<int>>();
    cfg.gen.grid_size = j.at("grid_size").get<int>();
    cfg.gen.max_distractors = j.at("max_distractors").get<int>();
    cfg.gen.max_retries = j.at("max_retries").get<int>();
    cfg.gen.shapes = lex.shapes;
    cfg.gen.colors = lex.colors;
    cfg.count_mode = j.at("count_mode").get<std::string>() == "train" ? CountMode::kTrain : CountMode::kTotal;
    cfg.target_count = j.at("target_count").get<std::int64_t>();
    cfg.dev_fraction = j.at("dev_fraction").get<double>();
    cfg.test_fraction = j.at("test_fraction").get<double>();
    cfg.few_shot_k = j.at("few_shot_k").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.manner.look_macro.clear();
    for (const auto& a : j.at("look_macro")) cfg.manner.look_macro.push_back(action_from(a));
    cfg.manner.spin_macro.clear();
    for (const auto& a : j.at("spin_macro")) cfg.manner.spin_macro.push_back(action_from(a));
    return cfg;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("manifest config: ") + e.what());
  }
}

ordered_json example_to_json(const Example& e) {
  const Situation& s = e.situation;
  ordered_json objects = ordered_json::array();
  for (const auto& o : s.objects) objects.push_back(object_json(o));
  ordered_json distractor_refs = ordered_json::array();
  for (const auto& o : s.distractor_reference_idxs) distractor_refs.push_back(opt_int(o));
  ordered_json tags = ordered_json::array();
  for (SplitId id : assign_splits(e)) tags.push_back(std::string(to_string(id)));
  const auto tokens = e.tokens();

  ordered_json situation{
      {"grid_size", s.grid_size},
      {"agent", {{"col", s.agent_pos.col}, {"row", s.agent_pos.row}, {"heading", to_string(s.agent_heading)}}},
      {"objects", std::move(objects)},
      {"target", s.target_idx},
      {"reference", opt_int(s.reference_idx)},
      {"distractors", s.distractor_idxs},
      {"distractor_references", std::move(distractor_refs)},
      {"push_progress", s.push_progress},
  };
  ordered_json meta{
      {"task", to_string(e.task)},
      {"template", to_string(template_of(e.command))},
      {"verb", to_string(e.command.verb)},
      {"adverb", opt_name(e.command.adverb)},
      {"relation", opt_name(e.command.relation)},
      {"target", object_json(e.target())},
      {"direction", opt_name(e.meta.agent_to_target)},
      {"final", position_json(e.meta.final_pos)},
      {"splits", std::move(tags)},
  };
  return ordered_json{
      {"id", e.id},
      {"command", join_tokens(tokens)},
      {"tokens", tokens},
      {"situation", std::move(situation)},
      {"actions", actions_json(e.gold)},
      {"meta", std::move(meta)},
  };
}

Example example_from_json(const json& j) {
  try {
    Example e;
    e.id = j.at("id").get<std::int64_t>();
    const auto tokens = j.at("tokens").get<std::vector<std::string>>();
    if (join_tokens(tokens) != j.at("command").get<std::string>()) {
      throw SchemaError("command text does not match tokens");
    }
    e.command = parse(tokens);
    auto task = task_from_string(j.at("meta").at("task").get<std::string>());
    if (!task) throw SchemaError("unknown task");
    e.task = *task;

    const json& js = j.at("situation");
    Situation& s = e.situation;
    s.grid_size = js.at("grid_size").get<int>();
    s.agent_pos = position_from(js.at("agent"));
    auto heading = heading_from_string(js.at("agent").at("heading").get<std::string>());
    if (!heading) throw SchemaError("unknown heading");
    s.agent_heading = *heading;
    for (const auto& o : js.at("objects")) {
      auto shape = shape_from_string(o.at("shape").get<std::string>());
      auto color = color_from_string(o.at("color").get<std::string>());
      if (!shape || !color) throw SchemaError("unknown object shape or color");
      s.objects.push_back({{*shape, *color, o.at("size").get<int>()}, position_from(o)});
    }
    s.target_idx = js.at("target").get<int>();
    s.reference_idx = opt_int_from(js.at("reference"));
    s.distractor_idxs = js.at("distractors").get<std::vector<int>>();
    for (const auto& o : js.at("distractor_references")) s.distractor_reference_idxs.push_back(opt_int_from(o));
    s.push_progress = js.at("push_progress").get<int>();
    try {
      s.validate();
    } catch (const Error& err) {
      throw SchemaError(err.what());
    }

    for (const auto& a : j.at("actions")) e.gold.push_back(action_from(a));
    e.meta.target_pos = e.target().pos;
    if (e.meta.target_pos != s.agent_pos) {
      e.meta.agent_to_target = relative_position(e.meta.target_pos, s.agent_pos).direction;
    }
    e.meta.final_pos = execute(s, e.gold).agent_pos;
    return e;
  } catch (const json::exception& err) {
    throw SchemaError(std::string("example record: ") + err.what());
  } catch (const ParseError& err) {
    throw SchemaError(std::string("example command: ") + err.what());
  }
}

fs::path split_path(const fs::path& dir, SplitId id) {
  return dir / (std::string(to_string(id)) + ".jsonl");
}

ordered_json Manifest::to_json() const {
  ordered_json c = ordered_json::object();
  for (const auto& [k, v] : counts) c[k] = v;
  ordered_json j{
      {"schema_version", kSchemaVersion},
      {"config", config},
      {"seed", seed},
      {"counts", std::move(c)},
      {"content_hash", content_hash},
      {"stats",
       {{"generated", stats.generated},
        {"scene_attempts", stats.scene_attempts},
        {"unsatisfiable_draws", stats.unsatisfiable_draws}}},
  };
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

Manifest Manifest::from_json(const json& j) {
  try {
    Manifest m;
    m.config = j.at("config");
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("counts").items()) m.counts[k] = v.get<std::int64_t>();
    m.content_hash = j.at("content_hash").get<std::string>();
    const json& st = j.at("stats");
    m.stats.generated = st.at("generated").get<std::int64_t>();
    m.stats.scene_attempts = st.at("scene_attempts").get<std::int64_t>();
    m.stats.unsatisfiable_draws = st.at("unsatisfiable_draws").get<std::int64_t>();
    if (j.contains("provenance")) m.provenance = j.at("provenance");
    return m;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("manifest: ") + e.what());
  }
}

std::string content_hash(const fs::path& dir, std::vector<std::string> split_names) {
  std::sort(split_names.begin(), split_names.end());
  Sha256 h;
  for (const auto& name : split_names) {
    h.update(name + "\n");
    h.update(read_text(dir / (name + ".jsonl")));
  }
  return h.hex();
}

Manifest write_dataset(const Dataset& ds, const fs::path& dir, const ordered_json& provenance) {
  fs::create_directories(dir);
  Manifest m;
  m.provenance = provenance;
  m.config = config_to_json(ds.config);
  m.seed = ds.config.seed;
  m.stats = ds.stats;
  std::vector<std::string> written;
  for (const auto& [id, examples] : ds.splits) {
    std::string text;
    for (const auto& e : examples) {
      // Spot check: roughly one example in a hundred is recompiled.
      if (e.id % 100 == 0) {
        if (auto problems = check_example(e, ds.config.manner); !problems.empty()) {
          throw Error("example " + std::to_string(e.id) + ": " + problems.front());
        }
      }
      text += example_to_json(e).dump();
      text += '\n';
    }
    write_text(split_path(dir, id), text);
    const std::string name(to_string(id));
    m.counts[name] = static_cast<std::int64_t>(examples.size());
    written.push_back(name);
  }
  m.content_hash = content_hash(dir, written);
  write_text(dir / kManifestFile, m.to_json().dump(2) + "\n");
  return m;
}

std::vector<Example> read_examples(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  std::vector<Example> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(example_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

Manifest read_manifest(const fs::path& dir) {
  const fs::path p = dir / kManifestFile;
  json j;
  try {
    j = json::parse(read_text(p));
  } catch (const json::exception& e) {
    throw SchemaError(p.string() + ": " + e.what());
  }
  return Manifest::from_json(j);
}

Dataset read_dataset(const fs::path& dir) {
  const Manifest m = read_manifest(dir);
  Dataset ds;
  ds.config = config_from_json(m.config);
  ds.stats = m.stats;
  for (const auto& [name, count] : m.counts) {
    auto id = split_from_string(name);
    if (!id) throw SchemaError("manifest names unknown split '" + name + "'");
    auto examples = read_examples(split_path(dir, *id));
    if (static_cast<std::int64_t>(examples.size()) != count) {
      throw SchemaError("split " + name + ": manifest count " + std::to_string(count) + " but file has " +
                        std::to_string(examples.size()) + " records");
    }
    ds.splits[*id] = std::move(examples);
  }
  return ds;
}

std::vector<PredictionRecord> read_predictions(const fs::path& file,
                                               const std::unordered_set<std::int64_t>* known_ids) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  std::vector<PredictionRecord> out;
  std::set<std::pair<int, std::int64_t>> seen;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception&) {
      fail("malformed JSON");
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer()) fail("missing integer 'id'");
    if (!j.contains("actions") || !j["actions"].is_array()) fail("missing 'actions' list");
    PredictionRecord r;
    r.id = j["id"].get<std::int64_t>();
    if (j.contains("run")) {
      if (!j["run"].is_number_integer()) fail("'run' must be an integer");
      r.run = j["run"].get<int>();
    }
    for (const auto& a : j["actions"]) {
      if (!a.is_string()) fail("action tokens must be strings");
      auto act = action_from_string(a.get<std::string>());
      if (!act) fail("unknown action token '" + a.get<std::string>() + "'");
      r.actions.push_back(*act);
    }
    if (known_ids && !known_ids->count(r.id)) fail("unknown example id " + std::to_string(r.id));
    if (!seen.insert({r.run, r.id}).second) {
      fail("duplicate id " + std::to_string(r.id) + " in run " + std::to_string(r.run));
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_predictions(const fs::path& file, const std::vector<PredictionRecord>& records) {
  std::string text;
  for (const auto& r : records) {
    ordered_json j{{"id", r.id}, {"actions", actions_json(r.actions)}, {"run", r.run}};
    text += j.dump();
    text += '\n';
  }
  write_text(file, text);
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats st;
  std::set<std::int64_t> ids;
  std::set<std::string> instructions;
  std::set<std::string> templates;
  for (const auto& [id, examples] : ds.splits) {
    st.split_counts[std::string(to_string(id))] = static_cast<std::int64_t>(examples.size());
    for (const auto& e : examples) {
      if (!ids.insert(e.id).second) continue;
      instructions.insert(e.command_text());
      ++st.action_lengths[e.gold.size()];
      const std::string t = to_string(template_of(e.command));
      ++st.template_usage[t];
      templates.insert(t);
    }
  }
  st.distinct_examples = static_cast<std::int64_t>(ids.size());
  st.unique_instructions = static_cast<std::int64_t>(instructions.size());
  st.template_count = static_cast<std::int64_t>(templates.size());
  return st;
}

ordered_json stats_to_json(const DatasetStats& s) {
  ordered_json lengths = ordered_json::object();
  for (const auto& [len, n] : s.action_lengths) lengths[std::to_string(len)] = n;
  ordered_json templates = ordered_json::object();
  for (const auto& [t, n] : s.template_usage) templates[t] = n;
  ordered_json counts = ordered_json::object();
  for (const auto& [k, n] : s.split_counts) counts[k] = n;
  return ordered_json{{"split_counts", counts},
                      {"distinct_examples", s.distinct_examples},
                      {"unique_instructions", s.unique_instructions},
                      {"template_count", s.template_count},
                      {"template_usage", templates},
                      {"action_lengths", lengths}};
}

}  // namespace gscan
