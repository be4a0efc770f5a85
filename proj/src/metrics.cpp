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

#include "gscan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>
#include <unordered_map>

#include "gscan/error.hpp"

namespace gscan {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double pct(std::int64_t k, std::int64_t n) {
  return n == 0 ? 0.0 : 100.0 * static_cast<double>(k) / static_cast<double>(n);
}

struct Score {
  bool exact = false;
  PositionMatch pos = PositionMatch::kNone;
  bool missing = false;
};

std::string cell(const Stat& s, bool multi) {
  char buf[64];
  if (multi) {
    std::snprintf(buf, sizeof buf, "%6.2f +- %-5.2f", s.mean, s.std);
  } else {
    std::snprintf(buf, sizeof buf, "%6.2f", s.mean);
  }
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

ordered_json stat_json(const Stat& s) { return ordered_json{{"mean", s.mean}, {"std", s.std}}; }

}  // namespace

std::string_view to_string(PositionMatch m) {
  switch (m) {
    case PositionMatch::kFull: return "full";
    case PositionMatch::kColOnly: return "col_only";
    case PositionMatch::kRowOnly: return "row_only";
    case PositionMatch::kNone: return "none";
  }
  return "none";
}

bool exact_match(std::span<const Action> pred, std::span<const Action> gold) {
  return std::equal(pred.begin(), pred.end(), gold.begin(), gold.end());
}

PositionMatch target_position_match(std::span<const Action> pred, const Example& e, std::size_t cap) {
  if (cap > 0 && pred.size() > cap) pred = pred.first(cap);
  const Position end = execute(e.situation, pred).agent_pos;
  const Position want = e.meta.final_pos;
  const bool col = end.col == want.col;
  const bool row = end.row == want.row;
  if (col && row) return PositionMatch::kFull;
  if (col) return PositionMatch::kColOnly;
  if (row) return PositionMatch::kRowOnly;
  return PositionMatch::kNone;
}

std::size_t truncation_cap(const Dataset& ds, std::size_t factor) {
  std::size_t longest = 0;
  for (const auto& [id, examples] : ds.splits) {
    for (const auto& e : examples) longest = std::max(longest, e.gold.size());
  }
  return factor * std::max<std::size_t>(longest, 1);
}

double SplitScores::exact_pct() const { return pct(exact, n); }
double SplitScores::col_pct() const { return pct(full + col_only, n); }
double SplitScores::row_pct() const { return pct(full + row_only, n); }
double SplitScores::full_pct() const { return pct(full, n); }
double SplitScores::none_pct() const { return pct(none, n); }

Stat mean_std(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return s;
}

RunReport evaluate_run(const Dataset& ds, const std::vector<PredictionRecord>& preds, int run,
                       const EvalOptions& opts) {
  std::unordered_map<std::int64_t, const PredictionRecord*> by_id;
  for (const auto& p : preds) {
    if (p.run == run) by_id[p.id] = &p;
  }
  const std::size_t cap = truncation_cap(ds, opts.cap_factor);

  std::vector<SplitId> selected = opts.splits;
  if (selected.empty()) {
    for (const auto& [id, examples] : ds.splits) {
      if (id != SplitId::kTrain) selected.push_back(id);
    }
  }

  RunReport report;
  report.run = run;
  std::set<std::int64_t> missing;
  for (SplitId id : selected) {
    auto it = ds.splits.find(id);
    if (it == ds.splits.end() || it->second.empty()) continue;
    const auto& examples = it->second;
    std::vector<Score> scores(examples.size());
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Example& e = examples[i];
        auto p = by_id.find(e.id);
        if (p == by_id.end()) {
          scores[i].missing = true;
          continue;
        }
        scores[i].exact = exact_match(p->second->actions, e.gold);
        scores[i].pos = target_position_match(p->second->actions, e, cap);
      }
    };
    const std::size_t workers =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::max(opts.workers, 1)), 1, examples.size());
    if (workers == 1) {
      work(0, examples.size());
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (examples.size() + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t en = std::min(examples.size(), b + chunk);
        if (b < en) pool.emplace_back(work, b, en);
      }
      for (auto& t : pool) t.join();
    }

    SplitScores s;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      ++s.n;
      s.id_digest += mix(static_cast<std::uint64_t>(examples[i].id));
      if (scores[i].missing) {
        ++s.missing;
        ++s.none;
        missing.insert(examples[i].id);
        continue;
      }
      if (scores[i].exact) ++s.exact;
      switch (scores[i].pos) {
        case PositionMatch::kFull: ++s.full; break;
        case PositionMatch::kColOnly: ++s.col_only; break;
        case PositionMatch::kRowOnly: ++s.row_only; break;
        case PositionMatch::kNone: ++s.none; break;
      }
    }
    report.splits[std::string(to_string(id))] = s;
  }
  report.missing_ids.assign(missing.begin(), missing.end());
  return report;
}

EvalReport aggregate_runs(const std::vector<RunReport>& runs) {
  if (runs.empty()) throw Error("aggregate_runs: no runs");
  const RunReport& first = runs.front();
  for (const auto& r : runs) {
    if (r.splits.size() != first.splits.size()) {
      throw Error("run " + std::to_string(r.run) + " covers different splits than run " +
                  std::to_string(first.run));
    }
    for (const auto& [name, s] : r.splits) {
      auto it = first.splits.find(name);
      if (it == first.splits.end() || it->second.n != s.n || it->second.id_digest != s.id_digest) {
        throw Error("run " + std::to_string(r.run) + " was scored on a different test set for split " + name);
      }
    }
  }
  EvalReport out;
  out.per_run = runs;
  for (const auto& r : runs) out.runs.push_back(r.run);
  for (const auto& [name, s0] : first.splits) {
    std::vector<double> ex, col, row, full, none;
    for (const auto& r : runs) {
      const SplitScores& s = r.splits.at(name);
      ex.push_back(s.exact_pct());
      col.push_back(s.col_pct());
      row.push_back(s.row_pct());
      full.push_back(s.full_pct());
      none.push_back(s.none_pct());
    }
    out.splits[name] = {s0.n, mean_std(ex), mean_std(col), mean_std(row), mean_std(full), mean_std(none)};
  }
  return out;
}

EvalReport evaluate(const Dataset& ds, const std::vector<PredictionRecord>& preds, const EvalOptions& opts) {
  std::set<int> run_ids;
  for (const auto& p : preds) run_ids.insert(p.run);
  if (run_ids.empty()) run_ids.insert(0);
  std::vector<RunReport> runs;
  for (int run : run_ids) runs.push_back(evaluate_run(ds, preds, run, opts));
  return aggregate_runs(runs);
}

std::vector<PredictionRecord> gold_predictions(const Dataset& ds, const std::vector<SplitId>& splits, int run) {
  std::vector<PredictionRecord> out;
  std::set<std::int64_t> seen;
  for (const auto& [id, examples] : ds.splits) {
    if (!splits.empty() && std::find(splits.begin(), splits.end(), id) == splits.end()) continue;
    for (const auto& e : examples) {
      if (seen.insert(e.id).second) out.push_back({e.id, e.gold, run});
    }
  }
  return out;
}

ordered_json report_to_json(const EvalReport& r) {
  ordered_json splits = ordered_json::object();
  for (const auto& [name, s] : r.splits) {
    splits[name] = ordered_json{{"n", s.n},
                                {"exact_match", stat_json(s.exact)},
                                {"col_match", stat_json(s.col)},
                                {"row_match", stat_json(s.row)},
                                {"full_match", stat_json(s.full)},
                                {"no_match", stat_json(s.none)}};
  }
  ordered_json runs = ordered_json::array();
  for (const auto& rr : r.per_run) {
    ordered_json per = ordered_json::object();
    for (const auto& [name, s] : rr.splits) {
      per[name] = ordered_json{{"n", s.n},         {"exact", s.exact},       {"full", s.full},
                               {"col_only", s.col_only}, {"row_only", s.row_only}, {"none", s.none},
                               {"missing", s.missing}};
    }
    runs.push_back(ordered_json{{"run", rr.run}, {"splits", per}, {"missing_ids", rr.missing_ids}});
  }
  return ordered_json{{"runs", r.runs}, {"splits", splits}, {"per_run", runs}};
}

std::string exact_match_table(const EvalReport& r) {
  const bool multi = r.runs.size() > 1;
  std::string out = pad("split", 8) + pad("n", 9) + "exact match\n";
  for (const auto& [name, s] : r.splits) {
    out += pad(name, 8) + pad(std::to_string(s.n), 9) + cell(s.exact, multi) + "\n";
  }
  return out;
}

std::string position_table(const EvalReport& r) {
  const bool multi = r.runs.size() > 1;
  const std::size_t w = multi ? 17 : 9;
  std::string out = pad("split", 8) + pad("col", w) + pad("row", w) + pad("full", w) + "none\n";
  for (const auto& [name, s] : r.splits) {
    out += pad(name, 8) + pad(cell(s.col, multi), w) + pad(cell(s.row, multi), w) +
           pad(cell(s.full, multi), w) + cell(s.none, multi) + "\n";
  }
  return out;
}

}  // namespace gscan
