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

// Exact-match and target-position scoring of prediction files.
//
// Col and row rates include full matches; `none` is the share with neither
// the column nor the row right, so col + row - full + none = 100.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gscan/dataset_io.hpp"
#include "gscan/example.hpp"
#include "gscan/splits.hpp"

namespace gscan {

enum class PositionMatch : std::uint8_t { kFull = 0, kColOnly, kRowOnly, kNone };

std::string_view to_string(PositionMatch m);

bool exact_match(std::span<const Action> pred, std::span<const Action> gold);

/// Executes `pred` (first `cap` actions; 0 = no cap) from the example's
/// initial situation and compares the final agent cell with the cell the
/// target occupies after the gold sequence.
PositionMatch target_position_match(std::span<const Action> pred, const Example& e,
                                    std::size_t cap = 0);

/// 4x the longest gold sequence in the dataset.
std::size_t truncation_cap(const Dataset& ds, std::size_t factor = 4);

struct SplitScores {
  std::int64_t n = 0;
  std::int64_t exact = 0;
  std::int64_t full = 0;
  std::int64_t col_only = 0;
  std::int64_t row_only = 0;
  std::int64_t none = 0;
  std::int64_t missing = 0;     // ids with no prediction; scored as failures
  std::uint64_t id_digest = 0;  // order-independent digest of the id set

  double exact_pct() const;
  double col_pct() const;  // includes full
  double row_pct() const;  // includes full
  double full_pct() const;
  double none_pct() const;
};

struct RunReport {
  int run = 0;
  std::map<std::string, SplitScores> splits;
  std::vector<std::int64_t> missing_ids;
};

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for one run
};

Stat mean_std(const std::vector<double>& xs);

struct SplitSummary {
  std::int64_t n = 0;
  Stat exact, col, row, full, none;
};

struct EvalReport {
  std::vector<int> runs;
  std::map<std::string, SplitSummary> splits;
  std::vector<RunReport> per_run;
};

struct EvalOptions {
  std::vector<SplitId> splits;  // empty: every non-train split
  std::size_t cap_factor = 4;
  int workers = 1;
};

RunReport evaluate_run(const Dataset& ds, const std::vector<PredictionRecord>& preds, int run,
                       const EvalOptions& opts = {});

/// Throws Error when the runs were scored on different test sets.
EvalReport aggregate_runs(const std::vector<RunReport>& runs);

/// Groups predictions by run id and evaluates each run.
EvalReport evaluate(const Dataset& ds, const std::vector<PredictionRecord>& preds,
                    const EvalOptions& opts = {});

/// Gold sequences of the selected splits as a prediction file body.
std::vector<PredictionRecord> gold_predictions(const Dataset& ds, const std::vector<SplitId>& splits,
                                               int run = 0);

ordered_json report_to_json(const EvalReport& r);
std::string exact_match_table(const EvalReport& r);
std::string position_table(const EvalReport& r);

}  // namespace gscan
