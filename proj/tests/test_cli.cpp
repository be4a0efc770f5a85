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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gscan/cli.hpp"
#include "gscan/dataset_io.hpp"
#include "test_util.hpp"

using namespace gscan;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::trunc);
  for (const auto& l : lines) out << l << "\n";
}

}  // namespace

TEST_CASE("generate, verify, evaluate, stats and inspect") {
  const auto root = testing::temp_dir("cli_main");
  const std::string data = (root / "rel").string();
  auto g = cli({"generate", "--task", "relation", "--seed", "7", "--count", "400", "--out", data});
  REQUIRE(g.code == 0);
  CHECK(contains(g.out, "train"));
  CHECK(fs::exists(root / "rel" / "manifest.json"));

  auto v = cli({"verify", "--data", data});
  CHECK(v.code == 0);
  CHECK(contains(v.out, "0 violation"));

  const std::string gold = (root / "gold.jsonl").string();
  REQUIRE(cli({"export-gold", "--data", data, "--out", gold}).code == 0);
  const std::string report = (root / "report.json").string();
  auto e = cli({"evaluate", "--data", data, "--predictions", gold, "--out", report});
  REQUIRE(e.code == 0);
  CHECK(contains(e.out, "100.00"));
  const auto rep = nlohmann::json::parse(std::ifstream(report));
  for (const auto& [name, s] : rep["splits"].items()) {
    CHECK(s["exact_match"]["mean"] == 100.0);
    CHECK(s["no_match"]["mean"] == 0.0);
  }

  auto st = cli({"stats", "--data", data});
  REQUIRE(st.code == 0);
  CHECK(nlohmann::json::parse(st.out)["distinct_examples"] == 400);

  const auto train = read_dataset(data).splits.at(SplitId::kTrain);
  auto in = cli({"inspect", "--data", data, "--id", std::to_string(train.front().id)});
  REQUIRE(in.code == 0);
  CHECK(contains(in.out, "command:"));
  CHECK(contains(in.out, "T"));
  CHECK(contains(in.out, "R"));
  CHECK(cli({"inspect", "--data", data, "--id", "99999999"}).code != 0);
}

TEST_CASE("missing prediction ids are listed and scored as failures") {
  const auto root = testing::temp_dir("cli_missing");
  const std::string data = (root / "d").string();
  REQUIRE(cli({"generate", "--task", "compositional", "--seed", "2", "--count", "200", "--out", data}).code == 0);
  const std::string gold = (root / "gold.jsonl").string();
  REQUIRE(cli({"export-gold", "--data", data, "--out", gold, "--split", "A"}).code == 0);
  auto e = cli({"evaluate", "--data", data, "--predictions", gold});
  REQUIRE(e.code == 0);
  CHECK(contains(e.err, "no prediction"));
  auto only_a = cli({"evaluate", "--data", data, "--predictions", gold, "--split", "A"});
  CHECK(only_a.err.empty());
}

TEST_CASE("same seed gives the same hash; flags override the config file") {
  const auto root = testing::temp_dir("cli_seed");
  const auto cfg = root / "gen.cfg";
  std::ofstream(cfg) << "task = compositional-small\nseed = 5\ntarget_count = 300\ncount_mode = total\n";
  REQUIRE(cli({"generate", "--config", cfg.string(), "--seed", "6", "--out", (root / "a").string()}).code == 0);
  REQUIRE(cli({"generate", "--config", cfg.string(), "--seed", "6", "--out", (root / "b").string()}).code == 0);
  const auto ma = read_manifest(root / "a");
  const auto mb = read_manifest(root / "b");
  CHECK(ma.seed == 6);
  CHECK(ma.content_hash == mb.content_hash);
  const auto colors = ma.config["colors"];
  CHECK(std::find(colors.begin(), colors.end(), "blue") == colors.end());
  const auto shapes = ma.config["shapes"];
  CHECK(std::find(shapes.begin(), shapes.end(), "cylinder") == shapes.end());
}

TEST_CASE("verify reports a corrupted gold line by id") {
  const auto root = testing::temp_dir("cli_corrupt");
  const std::string data = (root / "d").string();
  REQUIRE(cli({"generate", "--task", "relation", "--seed", "3", "--count", "300", "--out", data}).code == 0);
  const auto file = root / "d" / "train.jsonl";
  auto lines = read_lines(file);
  REQUIRE(lines.size() > 3);
  auto j = nlohmann::ordered_json::parse(lines[2]);
  j["actions"].push_back("stay");
  const auto id = j["id"].get<std::int64_t>();
  lines[2] = j.dump();
  write_lines(file, lines);
  auto v = cli({"verify", "--data", data});
  CHECK(v.code == 1);
  CHECK(contains(v.err, "id " + std::to_string(id)));
  CHECK(contains(v.err, "gold differs"));
}

TEST_CASE("verify succeeds with a warning on an empty dataset") {
  const auto root = testing::temp_dir("cli_empty");
  const std::string data = (root / "d").string();
  REQUIRE(cli({"generate", "--count", "0", "--out", data}).code == 0);
  auto v = cli({"verify", "--data", data});
  CHECK(v.code == 0);
  CHECK(contains(v.err, "warning"));
}

TEST_CASE("subsample keeps the requested share and sweeps nest") {
  const auto root = testing::temp_dir("cli_sub");
  const std::string data = (root / "d").string();
  REQUIRE(cli({"generate", "--task", "relation", "--seed", "1", "--count", "500", "--out", data}).code == 0);
  const auto n = read_dataset(data).splits.at(SplitId::kTrain).size();
  REQUIRE(cli({"subsample", "--data", data, "--fraction", "0.4", "--out", (root / "s40").string()}).code == 0);
  const auto kept = read_dataset(root / "s40").splits.at(SplitId::kTrain).size();
  CHECK(std::abs(static_cast<double>(kept) - 0.4 * static_cast<double>(n)) <= 1.0);
  CHECK(cli({"verify", "--data", (root / "s40").string()}).code == 0);

  REQUIRE(cli({"subsample", "--data", data, "--sweep", "--out", (root / "sweep").string()}).code == 0);
  std::set<std::int64_t> prev;
  for (int p = 10; p <= 100; p += 10) {
    char name[16];
    std::snprintf(name, sizeof name, "frac_%03d", p);
    std::set<std::int64_t> ids;
    const Dataset ds = read_dataset(root / "sweep" / name);
    for (const auto& e : ds.splits.at(SplitId::kTrain)) ids.insert(e.id);
    CHECK(std::includes(ids.begin(), ids.end(), prev.begin(), prev.end()));
    prev = ids;
  }
  CHECK(prev.size() == n);
  CHECK(cli({"subsample", "--data", data, "--out", (root / "x").string()}).code != 0);
}

TEST_CASE("default output directory comes from the environment") {
  const auto root = testing::temp_dir("cli_env");
  ::setenv(kOutDirEnv, (root / "envdir").c_str(), 1);
  const auto g = cli({"generate", "--count", "20", "--seed", "4"});
  ::unsetenv(kOutDirEnv);
  REQUIRE(g.code == 0);
  CHECK(fs::exists(root / "envdir" / "manifest.json"));
}

TEST_CASE("bad input exits nonzero with a diagnostic") {
  CHECK(cli({}).code != 0);
  CHECK(cli({"frobnicate"}).code != 0);
  const auto bad = cli({"generate", "--task", "poetry", "--out", testing::temp_dir("cli_bad").string()});
  CHECK(bad.code != 0);
  CHECK(contains(bad.err, "poetry"));
  const auto root = testing::temp_dir("cli_badpred");
  const std::string data = (root / "d").string();
  REQUIRE(cli({"generate", "--count", "30", "--out", data}).code == 0);
  std::ofstream(root / "p.jsonl") << "{\"id\": 0, \"actions\": [\"jump\"]}\n";
  const auto ev = cli({"evaluate", "--data", data, "--predictions", (root / "p.jsonl").string()});
  CHECK(ev.code != 0);
  CHECK(contains(ev.err, "jump"));
}
