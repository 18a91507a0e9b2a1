// Copyright 2026 The cnnga Authors.
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

#include <doctest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cnnga/cli.hpp"
#include "cnnga/io.hpp"
#include "support/fixtures.hpp"

namespace cnnga {
namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json error_line(const Invocation& r) {
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  return nlohmann::json::parse(r.err);
}

std::filesystem::path write_config(const testing::TempDir& dir, const std::string& body) {
  const auto path = dir / "config.json";
  std::ofstream(path) << body;
  return path;
}

TEST_CASE("decode prints the architecture and parameter count") {
  const Invocation r = cli({"decode", "S:64:128"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("parameters") == 77834);
  CHECK(j.at("architecture").at("blocks").size() == 1);

  const Invocation p = cli({"params", "S:64:128-P:max", "--input", "28x28x1", "--classes", "100"});
  CHECK(p.code == kExitOk);
  CHECK(std::stoll(p.out) == 9 * 1 * 64 + 64 + 128 + 9 * 64 * 128 + 128 + 256 + 1 * 128 + 128 + 128 * 100 + 100);
}

TEST_CASE("decode reports genome errors as one JSON line") {
  const Invocation invalid = cli({"decode", "P:max-P:max-P:max-P:max-P:max-P:max"});
  CHECK(invalid.code == kExitGenome);
  const auto j = error_line(invalid);
  CHECK(j.at("error") == "genome_invalid");
  CHECK(j.at("pool_count") == 6);
  CHECK(j.at("max_pools_allowed") == 5);
  CHECK(invalid.out.empty());

  const Invocation empty = cli({"decode", ""});
  CHECK(empty.code == kExitGenome);
  CHECK(error_line(empty).at("error") == "genome_parse");
  CHECK(error_line(empty).at("offset") == 0);

  const Invocation bad_shape = cli({"decode", "S:64:64", "--input", "32by32"});
  CHECK(bad_shape.code == kExitUsage);
  CHECK(error_line(bad_shape).at("field") == "input");

  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
}

TEST_CASE("run writes deterministic artifacts") {
  testing::TempDir dir("cli-run");
  const auto config = write_config(dir, R"({"population_size": 8, "max_generations": 5})");
  const Invocation a = cli({"run", "--config", config.string(), "--seed", "3", "--out-dir", (dir / "a").string()});
  REQUIRE(a.code == kExitOk);
  const auto summary = nlohmann::json::parse(a.out);
  CHECK(summary.at("finished") == true);
  CHECK(summary.at("generation") == 5);
  const std::string csv = read_file(dir / "a" / "history.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 6);
  CHECK(read_file(dir / "a" / "best.genome") == summary.at("best_genome").get<std::string>() + "\n");

  const Invocation b = cli({"run", "--config", config.string(), "--seed", "3", "--out-dir", (dir / "b").string(),
                            "--workers", "4"});
  REQUIRE(b.code == kExitOk);
  CHECK(read_file(dir / "b" / "history.csv") == csv);

  const Invocation c = cli({"run", "--config", config.string(), "--seed", "4", "--out-dir", (dir / "c").string()});
  CHECK(read_file(dir / "c" / "history.csv") != csv);
}

TEST_CASE("stop and resume through the command line") {
  testing::TempDir dir("cli-resume");
  const auto config = write_config(dir, R"({"population_size": 8, "max_generations": 10, "rng_seed": 12})");
  REQUIRE(cli({"run", "--config", config.string(), "--out-dir", (dir / "full").string()}).code == kExitOk);

  const Invocation first =
      cli({"run", "--config", config.string(), "--out-dir", (dir / "split").string(), "--stop-after", "5"});
  REQUIRE(first.code == kExitOk);
  CHECK(nlohmann::json::parse(first.out).at("finished") == false);
  const std::string checkpoint = (dir / "split" / "checkpoint.json").string();
  const Invocation second = cli({"resume", checkpoint});
  REQUIRE(second.code == kExitOk);
  CHECK(read_file(dir / "split" / "history.csv") == read_file(dir / "full" / "history.csv"));
  CHECK(read_file(dir / "split" / "best.genome") == read_file(dir / "full" / "best.genome"));

  const std::string before = read_file(checkpoint);
  const Invocation again = cli({"resume", checkpoint});
  CHECK(again.code == kExitOk);
  CHECK(again.out.find("already finished") != std::string::npos);
  CHECK(read_file(checkpoint) == before);

  const Invocation via_run = cli({"run", "--resume", checkpoint});
  CHECK(via_run.code == kExitOk);

  const Invocation exported = cli({"export", checkpoint, "--out-dir", (dir / "exported").string()});
  CHECK(exported.code == kExitOk);
  CHECK(read_file(dir / "exported" / "history.csv") == read_file(dir / "full" / "history.csv"));
}

TEST_CASE("run reports configuration and checkpoint errors") {
  testing::TempDir dir("cli-errors");
  const auto config = write_config(dir, R"({"p_crossover": 1.5})");
  const Invocation bad = cli({"run", "--config", config.string()});
  CHECK(bad.code == kExitUsage);
  CHECK(error_line(bad).at("field") == "p_crossover");

  const Invocation missing = cli({"resume", (dir / "nowhere.json").string()});
  CHECK(missing.code == kExitCheckpoint);
  CHECK(error_line(missing).at("error") == "checkpoint");
}

TEST_CASE("an unreachable worker aborts with the transport exit code") {
  testing::TempDir dir("cli-transport");
  const auto config = write_config(dir, R"({"population_size": 4, "max_generations": 2,
      "evaluator": {"kind": "external", "command": "/nonexistent/trainer"}})");
  const Invocation r = cli({"run", "--config", config.string(), "--out-dir", (dir / "out").string()});
  CHECK(r.code == kExitTransport);
  CHECK(error_line(r).at("error") == "transport");
  CHECK(std::filesystem::exists(dir / "out" / "checkpoint.json"));
}

}  // namespace
}  // namespace cnnga
