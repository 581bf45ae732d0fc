// Copyright 2026 The semloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semloc/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "semloc/kb.hpp"
#include "semloc/text.hpp"

namespace semloc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kRoot = SEMLOC_SOURCE_DIR;
const fs::path kShift = kRoot / "fixtures" / "shift_match";
const fs::path kReplay = kRoot / "fixtures" / "replay";
const fs::path kGolden = kRoot / "fixtures" / "golden";

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "semloc");
  std::ostringstream out, err;
  int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Replay(std::vector<std::string> rest) {
  std::vector<std::string> args = {"--mode", "replay", "--replay-dir", kReplay.string()};
  args.insert(args.end(), rest.begin(), rest.end());
  return args;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (const char* name : {"SEMLOC_MODEL", "SEMLOC_TEMPERATURE"}) unsetenv(name);
  }
};

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST_F(CliTest, KbBuildIngestsPages) {
  fs::path dir = FreshDir("semloc_cli_kb");
  fs::copy(kRoot / "data" / "docs" / "string-replace.html", dir / "a.html");
  fs::copy(kRoot / "data" / "docs" / "math.html", dir / "b.html");
  CliResult r = Cli({"kb", "build", dir.string(), "--out", (dir / "kb.jsonl").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("pages: 2"), std::string::npos);
  KnowledgeBase kb = LoadKb(dir / "kb.jsonl");
  EXPECT_NE(kb.Lookup("String.prototype.replace"), nullptr);
  EXPECT_NE(kb.Lookup("Math.round"), nullptr);
}

TEST_F(CliTest, KbBuildFailures) {
  fs::path empty = FreshDir("semloc_cli_kb_empty");
  EXPECT_EQ(Cli({"kb", "build", empty.string(), "--out", (empty / "kb.jsonl").string()}).code,
            kExitPipeline);
  EXPECT_FALSE(fs::exists(empty / "kb.jsonl"));
  EXPECT_EQ(Cli({"kb", "build", (empty / "nope").string(), "--out", "x"}).code, kExitPipeline);
  EXPECT_EQ(Cli({"kb", "build", empty.string()}).code, kExitUsage);
}

TEST_F(CliTest, LocateReplayMatchesGolden) {
  CliResult r = Cli(Replay({"locate", (kShift / "source.py").string(),
                      (kShift / "translated.js").string()}));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, ReadFile(kGolden / "shift_match_t1.json"));
  EXPECT_NE(r.err.find("effective config: "), std::string::npos);
  json report = json::parse(r.out);
  EXPECT_EQ(report["suspicious_lines"], json({2, 3, 4, 10}));
}

TEST_F(CliTest, LocateVariantsMatchGoldens) {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
      {{"--threshold", "2"}, "shift_match_t2.json"},
      {{"--threshold", "3"}, "shift_match_t3.json"},
      {{"--no-chain"}, "shift_match_no_chain.json"},
      {{"--no-kb"}, "shift_match_no_kb.json"},
      {{"--no-ast"}, "shift_match_no_ast.json"},
  };
  for (const auto& [flags, golden] : cases) {
    std::vector<std::string> args = Replay(flags);
    args.insert(args.end(), {"locate", (kShift / "source.py").string(),
                             (kShift / "translated.js").string()});
    CliResult r = Cli(args);
    ASSERT_EQ(r.code, kExitOk) << golden << ": " << r.err;
    EXPECT_EQ(r.out, ReadFile(kGolden / golden)) << golden;
  }
}

TEST_F(CliTest, NoAstReportsOneFragmentAndWritesOutFile) {
  fs::path dir = FreshDir("semloc_cli_out");
  CliResult r = Cli(Replay({"--no-ast", "--out", (dir / "r.json").string(), "locate",
                      (kShift / "source.py").string(), (kShift / "translated.js").string()}));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  json report = json::parse(ReadFile(dir / "r.json"));
  EXPECT_EQ(report["config_echo"]["fragment_count"], 1);
  EXPECT_EQ(report["config_echo"]["ast"], "disabled");
}

TEST_F(CliTest, MissingInputFileFails) {
  CliResult r = Cli(Replay({"locate", "/nonexistent.py", (kShift / "translated.js").string()}));
  EXPECT_EQ(r.code, kExitPipeline);
  EXPECT_NE(r.err.find("nonexistent.py"), std::string::npos);
}

TEST_F(CliTest, ReplayMissNamesTheExpectedFixture) {
  fs::path dir = FreshDir("semloc_cli_miss");
  WriteFile(dir / "t.js", ReadFile(kShift / "translated.js") + "// extra\n");
  CliResult r = Cli(Replay({"locate", (kShift / "source.py").string(), (dir / "t.js").string()}));
  EXPECT_EQ(r.code, kExitReplayMiss);
  EXPECT_NE(r.err.find(kReplay.string() + "/"), std::string::npos);
  EXPECT_NE(r.err.find(".json"), std::string::npos);
}

TEST_F(CliTest, MapAndDecomposeCommands) {
  const std::string src = (kShift / "source.py").string();
  const std::string tr = (kShift / "translated.js").string();
  CliResult map = Cli(Replay({"map", src, tr}));
  ASSERT_EQ(map.code, kExitOk) << map.err;
  fs::path dir = FreshDir("semloc_cli_map");
  WriteFile(dir / "map.json", map.out);

  CliResult via_llm = Cli(Replay({"decompose", src, tr}));
  CliResult via_file = Cli({"decompose", src, tr, "--map", (dir / "map.json").string()});
  ASSERT_EQ(via_llm.code, kExitOk) << via_llm.err;
  ASSERT_EQ(via_file.code, kExitOk) << via_file.err;
  EXPECT_EQ(via_llm.out, via_file.out);
  EXPECT_EQ(json::parse(via_file.out).size(), 7u);

  CliResult audit = Cli(Replay({"map", "--audit", src, tr}));
  ASSERT_EQ(audit.code, kExitOk);
  EXPECT_NE(audit.out.find("s.replace"), std::string::npos);
}

TEST_F(CliTest, EvalSweepMatchesGolden) {
  CliResult r = Cli(Replay({"--threshold", "1,2,3", "eval", (kRoot / "fixtures" / "bench").string()}));
  ASSERT_EQ(r.code, kExitOk) << r.err;
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["rows"], json::parse(ReadFile(kGolden / "bench_eval.json")));
  ASSERT_EQ(doc["rows"].size(), 3u);
  EXPECT_EQ(doc["config"]["thresholds"], json({1, 2, 3}));
  EXPECT_NE(r.err.find("threshold 3"), std::string::npos);
  EXPECT_NE(r.err.find("S_sem"), std::string::npos);
}

TEST_F(CliTest, EvalAblationsMatchGoldens) {
  for (const auto& [flag, golden] : std::vector<std::pair<std::string, std::string>>{
           {"--no-chain", "bench_no_chain.json"},
           {"--no-kb", "bench_no_kb.json"},
           {"--no-ast", "bench_no_ast.json"}}) {
    std::vector<std::string> args = Replay({flag});
    if (flag != "--no-ast") args.insert(args.end(), {"--threshold", "1,2,3"});
    args.insert(args.end(), {"--jobs", "3", "eval", (kRoot / "fixtures" / "bench").string()});
    CliResult r = Cli(args);
    ASSERT_EQ(r.code, kExitOk) << flag << ": " << r.err;
    EXPECT_EQ(json::parse(r.out)["rows"], json::parse(ReadFile(kGolden / golden))) << flag;
  }
}

TEST_F(CliTest, EvalKeepGoingRecordsUnreplayableSample) {
  fs::path bench = FreshDir("semloc_cli_bench");
  fs::copy(kRoot / "fixtures" / "bench", bench, fs::copy_options::recursive);
  fs::path extra = bench / "Leetcode" / "0003";
  fs::copy(bench / "Leetcode" / "0001", extra);
  WriteFile(extra / "translated.js", ReadFile(extra / "translated.js") + "// unseen\n");

  CliResult strict = Cli(Replay({"eval", bench.string()}));
  EXPECT_EQ(strict.code, kExitReplayMiss);

  CliResult r = Cli(Replay({"eval", "--keep-going", bench.string()}));
  EXPECT_EQ(r.code, kExitOk);
  json rows = json::parse(r.out)["rows"];
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_EQ(rows[0]["failures"].size(), 1u);
  EXPECT_NE(rows[0]["failures"][0].get<std::string>().find("0003"), std::string::npos);
  EXPECT_EQ(rows[0]["report"]["totals"]["n_samples"], 7);
  EXPECT_NE(r.err.find("manifest lists 2"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitWithTwo) {
  const std::string src = (kShift / "source.py").string();
  const std::string tr = (kShift / "translated.js").string();
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"locate", src}).code, kExitUsage);
  EXPECT_EQ(Cli(Replay({"--threshold", "0", "locate", src, tr})).code, kExitUsage);
  EXPECT_EQ(Cli(Replay({"--threshold", "x", "locate", src, tr})).code, kExitUsage);
  EXPECT_EQ(Cli(Replay({"--threshold", "1,2", "locate", src, tr})).code, kExitUsage);
  EXPECT_EQ(Cli(Replay({"--temperature", "1.5", "locate", src, tr})).code, kExitUsage);
  EXPECT_EQ(Cli(Replay({"--jobs", "0", "locate", src, tr})).code, kExitUsage);
  EXPECT_EQ(Cli({"--mode", "replay", "locate", src, tr}).code, kExitUsage);
  EXPECT_EQ(Cli({"--mode", "offline", "locate", src, tr}).code, kExitUsage);
  CliResult help = Cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("locate"), std::string::npos);
}

TEST_F(CliTest, EffectiveConfigReflectsFlags) {
  CliResult r = Cli(Replay({"--model", "m-x", "--temperature", "0.5", "--no-kb", "locate",
                      (kShift / "source.py").string(), (kShift / "translated.js").string()}));
  // No recording exists for this model, but the config is printed first.
  EXPECT_EQ(r.code, kExitReplayMiss);
  std::string line = r.err.substr(0, r.err.find('\n'));
  ASSERT_TRUE(StartsWith(line, "effective config: "));
  json config = json::parse(line.substr(std::string("effective config: ").size()));
  EXPECT_EQ(config["model"], "m-x");
  EXPECT_EQ(config["temperature"], 0.5);
  EXPECT_EQ(config["no_kb"], true);
  EXPECT_EQ(config["mode"], "replay");
}

}  // namespace
}  // namespace semloc
