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

#include "gscan/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <unordered_set>

#include "CLI11.hpp"

#include "gscan/config.hpp"
#include "gscan/dataset_io.hpp"
#include "gscan/error.hpp"
#include "gscan/metrics.hpp"
#include "gscan/oracle.hpp"
#include "gscan/splits.hpp"

namespace gscan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxListedIds = 20;

std::string default_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? std::string(env) : std::string("data");
}

std::vector<SplitId> parse_split_filter(const std::vector<std::string>& raw) {
  std::vector<SplitId> out;
  for (const auto& item : raw) {
    for (const auto& name : split_list(item)) {
      auto id = split_from_string(name);
      if (!id) throw ConfigError("unknown split '" + name + "'");
      out.push_back(*id);
    }
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

void print_counts(std::ostream& out, const Manifest& m) {
  for (const auto& [name, n] : m.counts) {
    char line[64];
    std::snprintf(line, sizeof line, "  %-6s %lld\n", name.c_str(), static_cast<long long>(n));
    out << line;
  }
  out << "  content_hash " << m.content_hash << "\n";
}

struct GenerateArgs {
  std::string config, task, out = default_dir();
  std::uint64_t seed = 0;
  std::int64_t count = 0;
  int workers = 1;
  CLI::Option* task_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* count_opt = nullptr;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  KeyValues kv = a.config.empty() ? KeyValues() : KeyValues::load(a.config);
  if (a.task_opt->count()) kv.set("task", a.task);
  if (a.seed_opt->count()) kv.set("seed", std::to_string(a.seed));
  if (a.count_opt->count()) kv.set("target_count", std::to_string(a.count));
  DatasetConfig cfg = dataset_config(kv.get("task").value_or("relation"));
  apply_dataset_keys(kv, cfg);
  BuildOptions opts;
  opts.workers = a.workers;
  const Dataset ds = build_dataset(cfg, opts);
  const Manifest m = write_dataset(ds, a.out);
  if (ds.stats.unsatisfiable_draws > 0) {
    err << "note: " << ds.stats.unsatisfiable_draws << " command draws had no valid scene and were redrawn\n";
  }
  out << "wrote " << a.out << " (" << cfg.kind << ", seed " << cfg.seed << ")\n";
  print_counts(out, m);
  return 0;
}

struct EvaluateArgs {
  std::string data = default_dir(), out;
  std::vector<std::string> predictions, splits;
  int workers = 1;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const Dataset ds = read_dataset(a.data);
  std::unordered_set<std::int64_t> known;
  for (const auto& [id, examples] : ds.splits) {
    for (const auto& e : examples) known.insert(e.id);
  }
  std::vector<PredictionRecord> preds;
  std::set<std::pair<int, std::int64_t>> seen;
  for (const auto& file : a.predictions) {
    for (auto& r : read_predictions(file, &known)) {
      if (!seen.insert({r.run, r.id}).second) {
        throw SchemaError(file + ": duplicate id " + std::to_string(r.id) + " in run " + std::to_string(r.run));
      }
      preds.push_back(std::move(r));
    }
  }
  EvalOptions opts;
  opts.splits = parse_split_filter(a.splits);
  opts.workers = a.workers;
  const EvalReport report = evaluate(ds, preds, opts);
  for (const auto& run : report.per_run) {
    if (run.missing_ids.empty()) continue;
    err << "warning: run " << run.run << ": " << run.missing_ids.size()
        << " examples have no prediction and count as failures:";
    for (std::size_t i = 0; i < run.missing_ids.size() && i < kMaxListedIds; ++i) err << " " << run.missing_ids[i];
    if (run.missing_ids.size() > kMaxListedIds) err << " ...";
    err << "\n";
  }
  out << "exact match (%), " << report.runs.size() << " run(s)\n" << exact_match_table(report) << "\n";
  out << "target position match (%)\n" << position_table(report);
  if (!a.out.empty()) write_file(a.out, report_to_json(report).dump(2) + "\n");
  return 0;
}

struct VerifyArgs {
  std::string data = default_dir();
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const VerifyResult v = verify_dataset(a.data);
  for (const auto& msg : v.violations) err << "violation: " << msg << "\n";
  if (v.records == 0 && v.violations.empty()) {
    err << "warning: dataset " << a.data << " has no records\n";
    return 0;
  }
  out << "verified " << v.records << " records, " << v.violations.size() << " violation(s)\n";
  return v.violations.empty() ? 0 : 1;
}

struct ExportArgs {
  std::string data = default_dir(), out;
  std::vector<std::string> splits;
  int run = 0;
};

int cmd_export_gold(const ExportArgs& a, std::ostream& out, std::ostream&) {
  const Dataset ds = read_dataset(a.data);
  const auto records = gold_predictions(ds, parse_split_filter(a.splits), a.run);
  write_predictions(a.out, records);
  out << "wrote " << records.size() << " predictions to " << a.out << "\n";
  return 0;
}

struct SubsampleArgs {
  std::string data = default_dir(), out;
  double fraction = 1.0;
  bool sweep = false;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* fraction_opt = nullptr;
};

int cmd_subsample(const SubsampleArgs& a, std::ostream& out, std::ostream&) {
  if (a.sweep == (a.fraction_opt->count() > 0)) {
    throw ConfigError("subsample needs exactly one of --fraction and --sweep");
  }
  const Dataset ds = read_dataset(a.data);
  const Manifest source = read_manifest(a.data);
  const std::uint64_t seed = a.seed_opt->count() ? a.seed : ds.config.seed;
  std::vector<std::pair<double, fs::path>> jobs;
  if (a.sweep) {
    for (int pct = 10; pct <= 100; pct += 10) {
      char name[16];
      std::snprintf(name, sizeof name, "frac_%03d", pct);
      jobs.emplace_back(pct / 100.0, fs::path(a.out) / name);
    }
  } else {
    jobs.emplace_back(a.fraction, fs::path(a.out));
  }
  const auto& train = ds.splits.at(SplitId::kTrain);
  for (const auto& [fraction, dir] : jobs) {
    Dataset sub = ds;
    sub.splits[SplitId::kTrain] = subsample(train, fraction, seed);
    const ordered_json prov{{"source_hash", source.content_hash}, {"fraction", fraction}, {"seed", seed}};
    write_dataset(sub, dir, prov);
    out << dir.string() << ": train " << sub.splits[SplitId::kTrain].size() << " of " << train.size() << "\n";
  }
  return 0;
}

struct StatsArgs {
  std::string data = default_dir(), out;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  const Dataset ds = read_dataset(a.data);
  const std::string text = stats_to_json(dataset_stats(ds)).dump(2) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return 0;
}

struct InspectArgs {
  std::string data = default_dir(), split;
  std::int64_t id = 0;
};

int cmd_inspect(const InspectArgs& a, std::ostream& out, std::ostream&) {
  const Dataset ds = read_dataset(a.data);
  std::optional<SplitId> only;
  if (!a.split.empty()) {
    only = split_from_string(a.split);
    if (!only) throw ConfigError("unknown split '" + a.split + "'");
  }
  for (const auto& [sid, examples] : ds.splits) {
    if (only && sid != *only) continue;
    for (const auto& e : examples) {
      if (e.id == a.id) {
        out << "split:    " << to_string(sid) << "\n" << render_example(e);
        return 0;
      }
    }
  }
  throw Error("no example with id " + std::to_string(a.id));
}

}  // namespace

VerifyResult verify_dataset(const fs::path& dir) {
  const Manifest m = read_manifest(dir);
  const DatasetConfig cfg = config_from_json(m.config);
  VerifyResult result;
  auto violation = [&result](const std::string& msg) { result.violations.push_back(msg); };
  std::int64_t injected = 0;
  std::vector<std::string> names;
  for (const auto& [name, expected] : m.counts) {
    names.push_back(name);
    const auto sid = split_from_string(name);
    if (!sid) {
      violation("manifest names unknown split " + name);
      continue;
    }
    const fs::path file = split_path(dir, *sid);
    std::ifstream in(file);
    if (!in) {
      violation("missing split file " + file.string());
      continue;
    }
    std::string line;
    std::int64_t lineno = 0;
    std::int64_t records = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      ++records;
      ++result.records;
      const std::string where = name + ":" + std::to_string(lineno);
      json j;
      try {
        j = json::parse(line);
      } catch (const json::exception&) {
        violation(where + ": malformed JSON");
        continue;
      }
      const std::string id_text =
          j.contains("id") && j["id"].is_number_integer() ? std::to_string(j["id"].get<std::int64_t>()) : "?";
      const std::string tag = "id " + id_text + " (" + where + ")";
      Example e;
      try {
        e = example_from_json(j);
      } catch (const Error& err) {
        violation(tag + ": " + err.what());
        continue;
      }
      for (const auto& p : check_example(e, cfg.manner)) violation(tag + ": " + p);
      if (json::parse(example_to_json(e).dump()) != j) {
        violation(tag + ": stored metadata differs from the recomputed record");
      }
      const auto held = assign_splits(e);
      if (*sid == SplitId::kTrain) {
        if (held.size() == 1 && held.front() == SplitId::kG) {
          ++injected;
        } else if (!held.empty()) {
          violation(tag + ": train example satisfies held-out split " + std::string(to_string(held.front())));
        }
      } else if (*sid == SplitId::kDev || *sid == random_split(e.task)) {
        if (!held.empty()) {
          violation(tag + ": example satisfies held-out split " + std::string(to_string(held.front())));
        }
      } else if (std::find(held.begin(), held.end(), *sid) == held.end()) {
        violation(tag + ": example does not satisfy split " + name);
      }
    }
    if (records != expected) {
      violation(name + ": manifest count " + std::to_string(expected) + " but file has " + std::to_string(records));
    }
  }
  if (injected > cfg.few_shot_k) {
    violation("train holds " + std::to_string(injected) + " split-G examples, more than k=" +
              std::to_string(cfg.few_shot_k));
  }
  bool files_ok = true;
  for (const auto& n : names) files_ok = files_ok && fs::exists(dir / (n + ".jsonl"));
  if (files_ok && content_hash(dir, names) != m.content_hash) violation("content hash does not match manifest");
  return result;
}

std::string render_example(const Example& e) {
  const Situation& s = e.situation;
  std::vector<char> role(s.objects.size(), 'o');
  role[static_cast<std::size_t>(s.target_idx)] = 'T';
  if (s.reference_idx) role[static_cast<std::size_t>(*s.reference_idx)] = 'R';
  for (int d : s.distractor_idxs) role[static_cast<std::size_t>(d)] = 'D';
  for (const auto& r : s.distractor_reference_idxs) {
    if (r && *r != s.target_idx && *r != s.reference_idx) role[static_cast<std::size_t>(*r)] = 'd';
  }
  static constexpr char kArrow[] = {'^', '>', 'v', '<'};

  std::string out = "command:  " + e.command_text() + "\n";
  out += "template: " + to_string(template_of(e.command)) + "\n";
  out += "tags:    ";
  const auto held = assign_splits(e);
  if (held.empty()) out += " none";
  for (SplitId id : held) out += " " + std::string(to_string(id));
  out += "\n\n    ";
  for (int c = 0; c < s.grid_size; ++c) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "  %-4d", c);
    out += buf;
  }
  std::string rule = "    +";
  for (int c = 0; c < s.grid_size; ++c) rule += "-----+";
  out += "\n" + rule + "\n";
  for (int r = 0; r < s.grid_size; ++r) {
    char label[16];
    std::snprintf(label, sizeof label, "%3d |", r);
    out += label;
    for (int c = 0; c < s.grid_size; ++c) {
      std::string cellv = "     ";
      const Position p{c, r};
      if (s.agent_pos == p) cellv[0] = kArrow[static_cast<int>(s.agent_heading)];
      if (auto idx = s.object_at(p)) {
        const auto& o = s.objects[static_cast<std::size_t>(*idx)];
        cellv[1] = role[static_cast<std::size_t>(*idx)];
        cellv[2] = to_string(o.spec.color)[0];
        cellv[3] = o.spec.shape == Shape::kCylinder ? 'y' : to_string(o.spec.shape)[0];
        cellv[4] = static_cast<char>('0' + o.spec.size);
      }
      out += cellv + "|";
    }
    out += "\n" + rule + "\n";
  }
  out += "\nagent ^>v< heading; T target, R reference, D distractor, d distractor reference, o other\n";
  out += "objects: color initial, shape (c circle, s square, y cylinder), size\n";
  out += "\ngold (" + std::to_string(e.gold.size()) + "):";
  for (Action act : e.gold) out += " " + std::string(to_string(act));
  out += "\n";
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grounded instruction-following dataset toolkit"};
  app.name("gscan");
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Build a dataset and write it with its manifest");
  g->add_option("--config", gen.config, "key = value config file (flags win)")->check(CLI::ExistingFile);
  gen.task_opt = g->add_option("--task", gen.task,
                               "relation, compositional, relation-small or compositional-small");
  gen.seed_opt = g->add_option("--seed", gen.seed, "Generation seed");
  gen.count_opt = g->add_option("--count", gen.count, "Override target_count");
  g->add_option("--out", gen.out, "Output directory (default $GSCAN_OUT_DIR or ./data)");
  g->add_option("--workers", gen.workers, "Generation threads")->check(CLI::PositiveNumber);

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score prediction files against a dataset");
  e->add_option("--data", ev.data, "Dataset directory");
  e->add_option("--predictions", ev.predictions, "Prediction JSONL file(s)")->required()->check(CLI::ExistingFile);
  e->add_option("--split", ev.splits, "Only these splits (comma separated)");
  e->add_option("--out", ev.out, "Write the JSON report here");
  e->add_option("--workers", ev.workers, "Scoring threads")->check(CLI::PositiveNumber);

  VerifyArgs ve;
  auto* v = app.add_subcommand("verify", "Recompile and re-execute every stored example");
  v->add_option("--data", ve.data, "Dataset directory");

  ExportArgs ex;
  auto* x = app.add_subcommand("export-gold", "Write gold sequences as a prediction file");
  x->add_option("--data", ex.data, "Dataset directory");
  x->add_option("--out", ex.out, "Prediction file to write")->required();
  x->add_option("--split", ex.splits, "Only these splits (comma separated)");
  x->add_option("--run", ex.run, "Run id stamped on every record");

  SubsampleArgs su;
  auto* s = app.add_subcommand("subsample", "Keep a fraction of train; other splits are copied");
  s->add_option("--data", su.data, "Source dataset directory");
  s->add_option("--out", su.out, "Output directory")->required();
  su.fraction_opt = s->add_option("--fraction", su.fraction, "Fraction of train to keep")
                        ->check(CLI::Range(0.0, 1.0));
  s->add_flag("--sweep", su.sweep, "Write frac_010 ... frac_100 under --out");
  su.seed_opt = s->add_option("--seed", su.seed, "Subsample seed (default: dataset seed)");

  StatsArgs st;
  auto* t = app.add_subcommand("stats", "Split counts, unique instructions, length and template histograms");
  t->add_option("--data", st.data, "Dataset directory");
  t->add_option("--out", st.out, "Write JSON here instead of stdout");

  InspectArgs in;
  auto* i = app.add_subcommand("inspect", "Render one example as a text grid");
  i->add_option("--data", in.data, "Dataset directory");
  i->add_option("--id", in.id, "Example id")->required();
  i->add_option("--split", in.split, "Look only in this split");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err);
  }

  try {
    if (g->parsed()) return cmd_generate(gen, out, err);
    if (e->parsed()) return cmd_evaluate(ev, out, err);
    if (v->parsed()) return cmd_verify(ve, out, err);
    if (x->parsed()) return cmd_export_gold(ex, out, err);
    if (s->parsed()) return cmd_subsample(su, out, err);
    if (t->parsed()) return cmd_stats(st, out, err);
    if (i->parsed()) return cmd_inspect(in, out, err);
  } catch (const std::exception& ex_) {
    err << "error: " << ex_.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("gscan");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace gscan
