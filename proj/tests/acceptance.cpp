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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>

#include "gscan/cli.hpp"
#include "gscan/dataset_io.hpp"
#include "gscan/metrics.hpp"
#include "gscan/splits.hpp"

using namespace gscan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gscan_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

Dataset build(const std::string& kind, std::optional<std::int64_t> total, std::uint64_t seed) {
  DatasetConfig cfg = dataset_config(kind);
  if (total) {
    cfg.count_mode = CountMode::kTotal;
    cfg.target_count = *total;
  }
  cfg.seed = seed;
  BuildOptions opts;
  opts.workers = workers();
  return build_dataset(cfg, opts);
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol * target; }

// Oracle validity: 10,000 relation examples, full re-execution, under 60 s.
Outcome oracle_validity() {
  const auto t0 = Clock::now();
  const fs::path dir = scratch("oracle");
  write_dataset(build("relation", 10000, 20231), dir);
  const VerifyResult v = verify_dataset(dir);
  const double secs = seconds_since(t0);
  std::set<std::int64_t> ids;
  for (const auto& [id, examples] : read_dataset(dir).splits) {
    for (const auto& e : examples) ids.insert(e.id);
  }
  fs::remove_all(dir);
  std::string detail = std::to_string(ids.size()) + " examples (" + std::to_string(v.records) +
                       " records), " + std::to_string(v.violations.size()) + " violations, " +
                       fmt("%.1f", secs) + " s (limit 60 s)";
  if (!v.violations.empty()) detail += "; first: " + v.violations.front();
  return {ids.size() == 10000 && v.violations.empty() && secs < 60.0, detail};
}

// Split soundness on 50,000-example builds of both tasks.
Outcome split_soundness(const Dataset& comp, const Dataset& rel) {
  bool ok = true;
  std::ostringstream detail;
  for (const Dataset* ds : {&comp, &rel}) {
    const TaskKind task = ds->config.task();
    const auto& train = ds->splits.at(SplitId::kTrain);
    std::set<std::int64_t> train_ids;
    for (const auto& e : train) train_ids.insert(e.id);

    // Random split: disjoint from train and free of held-out predicates.
    const SplitId random = random_split(task);
    std::int64_t random_bad = 0;
    for (const auto& e : ds->splits.at(random)) random_bad += !assign_splits(e).empty() || train_ids.count(e.id);
    ok = ok && random_bad == 0 && !ds->splits.at(random).empty();
    detail << to_string(random) << ":" << ds->splits.at(random).size() << "/" << random_bad << " ";

    for (SplitId id : held_out_splits(task)) {
      std::int64_t in_train = 0;
      for (const auto& e : train) in_train += satisfies_split(e, id);
      const auto& test = ds->splits.at(id);
      std::int64_t sat = 0;
      for (const auto& e : test) sat += satisfies_split(e, id);
      const std::int64_t allowed = id == SplitId::kG ? ds->config.few_shot_k : 0;
      const bool split_ok = in_train == allowed && !test.empty() && sat == static_cast<std::int64_t>(test.size());
      ok = ok && split_ok;
      detail << to_string(id) << ":" << test.size() << "/" << in_train << (split_ok ? "" : "!") << " ";
    }
  }
  std::string d = detail.str();
  d.pop_back();
  return {ok, "split:test-size/train-hits  " + d};
}

// Scale counts of the full-size builds.
Outcome scale_counts() {
  std::ostringstream detail;
  bool ok = true;
  {
    const Dataset rel = build("relation", std::nullopt, 1);
    const DatasetStats st = dataset_stats(rel);
    const bool total_ok = within(static_cast<double>(st.distinct_examples), 260000, 0.10);
    const bool templates_ok = st.template_count == 18 &&
                              enumerate_templates(rel.config.grammar).size() == 18;
    const bool unique_ok = st.unique_instructions >= 25000 && st.unique_instructions <= 40000;
    ok = ok && total_ok && templates_ok && unique_ok;
    detail << "relation total " << st.distinct_examples << ", templates " << st.template_count
           << ", unique instructions " << st.unique_instructions;
  }
  {
    const Dataset comp = build("compositional", std::nullopt, 1);
    const auto n = comp.splits.at(SplitId::kTrain).size();
    ok = ok && within(static_cast<double>(n), 360000, 0.10);
    detail << "; compositional train " << n;
  }
  {
    const Dataset cs = build("compositional-small", std::nullopt, 1);
    const auto n = cs.splits.at(SplitId::kTrain).size();
    ok = ok && within(static_cast<double>(n), 110000, 0.15);
    detail << "; compositional-small train " << n;
  }
  {
    const Dataset rs = build("relation-small", std::nullopt, 1);
    const auto n = rs.splits.at(SplitId::kTrain).size();
    ok = ok && within(static_cast<double>(n), 74000, 0.15);
    detail << "; relation-small train " << n;
  }
  return {ok, detail.str()};
}

// Determinism of manifests and nesting of subsamples.
Outcome determinism() {
  bool ok = true;
  std::ostringstream detail;
  for (const std::string kind : {"relation", "compositional"}) {
    DatasetConfig cfg = dataset_config(kind);
    cfg.count_mode = CountMode::kTotal;
    cfg.target_count = 20000;
    cfg.seed = 77;
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const Manifest ma = write_dataset(build_dataset(cfg, {1, 4096}), a);
    const Manifest mb = write_dataset(build_dataset(cfg, {workers() + 1, 1000}), b);
    const bool same = ma.content_hash == mb.content_hash && read_manifest(b).content_hash == ma.content_hash;
    ok = ok && same;
    detail << kind << " " << ma.content_hash.substr(0, 12) << (same ? "==" : "!=") << mb.content_hash.substr(0, 12)
           << "; ";
    fs::remove_all(a);
    fs::remove_all(b);
  }
  const Dataset ds = build("relation", 20000, 5);
  const auto& train = ds.splits.at(SplitId::kTrain);
  std::set<std::int64_t> prev;
  bool nested = true;
  for (int p = 1; p <= 10; ++p) {
    std::set<std::int64_t> cur;
    for (const auto& e : subsample(train, p / 10.0, 13)) cur.insert(e.id);
    nested = nested && std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()) &&
             static_cast<double>(cur.size()) == std::round(p / 10.0 * static_cast<double>(train.size()));
    prev = std::move(cur);
  }
  nested = nested && prev.size() == train.size();
  ok = ok && nested;
  detail << "subsample 0.1..1.0 of " << train.size() << " nested: " << (nested ? "yes" : "no");
  return {ok, detail.str()};
}

// Metric oracle: gold scores perfectly; the fixture reproduces hand counts.
Outcome metric_oracle(const Dataset& comp, const Dataset& rel) {
  bool ok = true;
  std::ostringstream detail;
  int splits = 0;
  for (const Dataset* ds : {&comp, &rel}) {
    const EvalReport r = evaluate(*ds, gold_predictions(*ds, {}), {{}, 4, workers()});
    for (const auto& [name, s] : r.splits) {
      ++splits;
      const bool perfect = s.exact.mean == 100.0 && s.col.mean == 100.0 && s.row.mean == 100.0 &&
                           s.full.mean == 100.0 && s.none.mean == 0.0;
      if (!perfect) detail << name << " not perfect; ";
      ok = ok && perfect;
    }
  }
  detail << "gold 100.00 exact and 100/100/100/0 on " << splits << " splits; ";

  // Fixture: agent (0,0) east, target (3,2); one prediction per outcome
  // class, id 5 deliberately missing. Hand counts over n = 8:
  //   exact {0} = 12.5; full {0,1} = 25; col-only {2}; row-only {3};
  //   none {4,5,6,7} = 50; col = row = 37.5.
  const fs::path fixtures = GSCAN_FIXTURE_DIR;
  Dataset fx;
  fx.config = dataset_config("compositional");
  fx.splits[SplitId::kA] = read_examples(fixtures / "position_examples.jsonl");
  std::unordered_set<std::int64_t> known;
  for (const auto& e : fx.splits[SplitId::kA]) known.insert(e.id);
  const auto preds = read_predictions(fixtures / "position_predictions.jsonl", &known);
  const auto s = evaluate(fx, preds).splits.at("A");

  // Second pass with a minimal walker that only knows walk/turn/stay.
  std::int64_t col = 0, row = 0, full = 0, none = 0;
  for (const auto& e : fx.splits[SplitId::kA]) {
    const PredictionRecord* p = nullptr;
    for (const auto& r : preds) {
      if (r.id == e.id) p = &r;
    }
    int c = e.situation.agent_pos.col, rw = e.situation.agent_pos.row;
    int h = static_cast<int>(e.situation.agent_heading);
    static constexpr int kDc[] = {0, 1, 0, -1}, kDr[] = {-1, 0, 1, 0};
    for (Action a : p ? p->actions : std::vector<Action>{}) {
      if (a == Action::kTurnLeft) h = (h + 3) % 4;
      if (a == Action::kTurnRight) h = (h + 1) % 4;
      if (a == Action::kWalk) {
        const int nc = c + kDc[h], nr = rw + kDr[h];
        if (nc >= 0 && nr >= 0 && nc < e.situation.grid_size && nr < e.situation.grid_size) c = nc, rw = nr;
      }
    }
    const bool cm = c == 3, rm = rw == 2;
    col += cm;
    row += rm;
    full += cm && rm;
    none += !cm && !rm;
  }
  auto pc = [](std::int64_t k) { return 100.0 * static_cast<double>(k) / 8.0; };
  const bool hand = s.n == 8 && s.exact.mean == 12.5 && s.col.mean == 37.5 && s.row.mean == 37.5 &&
                    s.full.mean == 25.0 && s.none.mean == 50.0;
  const bool brute = s.col.mean == pc(col) && s.row.mean == pc(row) && s.full.mean == pc(full) &&
                     s.none.mean == pc(none);
  ok = ok && hand && brute;
  detail << "fixture exact/col/row/full/none = " << fmt("%.2f", s.exact.mean) << "/" << fmt("%.2f", s.col.mean)
         << "/" << fmt("%.2f", s.row.mean) << "/" << fmt("%.2f", s.full.mean) << "/"
         << fmt("%.2f", s.none.mean) << " (hand " << (hand ? "ok" : "MISMATCH") << ", recount "
         << (brute ? "ok" : "MISMATCH") << ")";
  return {ok, detail.str()};
}

// Relation classifier against an exhaustive independent table.
Outcome relation_classifier() {
  int cases = 0, mismatches = 0;
  for (int a = 0; a < 36; ++a) {
    for (int b = 0; b < 36; ++b) {
      if (a == b) continue;
      ++cases;
      const Position pa{a % 6, a / 6}, pb{b % 6, b / 6};
      const int dc = pa.col - pb.col, dr = pa.row - pb.row;
      // Row 0 is north: a negative row delta means "north".
      Direction want;
      if (dc == 0) want = dr < 0 ? Direction::kNorth : Direction::kSouth;
      else if (dr == 0) want = dc > 0 ? Direction::kEast : Direction::kWest;
      else if (dr < 0) want = dc > 0 ? Direction::kNorthEast : Direction::kNorthWest;
      else want = dc > 0 ? Direction::kSouthEast : Direction::kSouthWest;
      const bool adjacent = std::abs(dc) <= 1 && std::abs(dr) <= 1;
      const RelativePosition got = relative_position(pa, pb);
      mismatches += !(got.direction == want && got.next_to == adjacent);
    }
  }
  return {cases == 1260 && mismatches == 0,
          std::to_string(cases) + " ordered pairs, " + std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&failures](const char* name, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << fmt("%.1f", seconds_since(t0))
              << " s]" << std::endl;
  };

  report("relation-classifier", relation_classifier);
  report("oracle-validity", oracle_validity);
  {
    const Dataset comp = build("compositional", 50000, 4242);
    const Dataset rel = build("relation", 50000, 4242);
    report("split-soundness", [&] { return split_soundness(comp, rel); });
    report("metric-oracle", [&] { return metric_oracle(comp, rel); });
  }
  report("determinism", determinism);
  report("scale-counts", scale_counts);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
