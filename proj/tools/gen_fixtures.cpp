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

// Regenerates the shipped replay store and golden reports by running the
// pipeline against the offline mock analyst.
//
//   gen_fixtures <fixtures_dir> <kb.jsonl> <out_dir>
//
// Writes <out_dir>/replay/ and <out_dir>/golden/. Output is deterministic,
// so a fresh run must reproduce the committed files byte for byte.

#include <filesystem>
#include <iostream>
#include <string>

#include "json.hpp"
#include "mock_analyst.hpp"
#include "semloc/bench.hpp"
#include "semloc/error.hpp"
#include "semloc/pipeline.hpp"
#include "semloc/text.hpp"

namespace fs = std::filesystem;
using semloc::testing::MockAnalyst;
using semloc::testing::MockPair;

namespace {

MockPair LoadMockPair(const fs::path& dir) {
  MockPair p;
  p.pair.source_text = semloc::ReadFile(dir / "source.py");
  p.pair.translated_text = semloc::ReadFile(dir / "translated.js");
  p.labels = semloc::testing::ParseLabelFile(semloc::ReadFile(dir / "labels.txt"));
  if (fs::exists(dir / "mock.json")) {
    auto j = nlohmann::json::parse(semloc::ReadFile(dir / "mock.json"));
    p.garble_first_map = j.value("garble_first_map", false);
  }
  return p;
}

semloc::RunConfig BaseConfig(const fs::path& kb) {
  semloc::RunConfig c;  // library defaults, no environment overrides
  c.mode = semloc::Mode::kReplay;  // reports must match what replay runs echo
  c.kb_path = kb;
  return c;
}

void Golden(const fs::path& out, const std::string& name, const std::string& text) {
  semloc::WriteFile(out / "golden" / name, text + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: gen_fixtures <fixtures_dir> <kb.jsonl> <out_dir>\n";
    return 2;
  }
  const fs::path fixtures = argv[1];
  const fs::path kb_path = argv[2];
  const fs::path out = argv[3];
  try {
    fs::remove_all(out / "replay");
    fs::remove_all(out / "golden");
    fs::create_directories(out / "golden");

    MockAnalyst mock;
    mock.AddPair(LoadMockPair(fixtures / "shift_match"));
    semloc::LoadResult bench = semloc::LoadBenchmark(fixtures / "bench");
    for (const semloc::BenchSample& s : bench.samples) {
      mock.AddPair(LoadMockPair(fixtures / "bench" / s.origin / s.id));
    }
    semloc::RecordingClient recorder(mock, out / "replay");
    semloc::KnowledgeBase kb = semloc::LoadKb(kb_path);
    const semloc::PromptTemplates& templates = semloc::DefaultTemplates();

    semloc::CodePair shift_match;
    shift_match.source_text = semloc::ReadFile(fixtures / "shift_match" / "source.py");
    shift_match.translated_text = semloc::ReadFile(fixtures / "shift_match" / "translated.js");

    struct Variant {
      std::string name;
      int threshold;
      bool no_ast, no_chain, no_kb;
    };
    const Variant variants[] = {
        {"shift_match_t1", 1, false, false, false},     {"shift_match_t2", 2, false, false, false},
        {"shift_match_t3", 3, false, false, false},     {"shift_match_no_chain", 1, false, true, false},
        {"shift_match_no_kb", 1, false, false, true},   {"shift_match_no_ast", 1, true, false, false},
    };
    for (const Variant& v : variants) {
      semloc::RunConfig c = BaseConfig(kb_path);
      c.thresholds = {v.threshold};
      c.no_ast = v.no_ast;
      c.no_chain = v.no_chain;
      c.no_kb = v.no_kb;
      semloc::LocateOutcome outcome = semloc::LocatePair(
          shift_match, c, v.threshold, recorder, c.no_kb ? nullptr : &kb, templates);
      Golden(out, v.name + ".json", semloc::ReportToJson(outcome.report));
    }

    struct EvalVariant {
      std::string name;
      bool no_ast, no_chain, no_kb;
    };
    const EvalVariant evals[] = {{"bench_eval", false, false, false},
                                 {"bench_no_chain", false, true, false},
                                 {"bench_no_kb", false, false, true},
                                 {"bench_no_ast", true, false, false}};
    for (const EvalVariant& v : evals) {
      semloc::RunConfig c = BaseConfig(kb_path);
      c.thresholds = v.no_ast ? std::vector<int>{1} : std::vector<int>{1, 2, 3};
      c.no_ast = v.no_ast;
      c.no_chain = v.no_chain;
      c.no_kb = v.no_kb;
      std::vector<semloc::EvalRow> rows =
          semloc::RunEval(bench.samples, c, recorder, c.no_kb ? nullptr : &kb, templates);
      nlohmann::json doc = nlohmann::json::array();
      for (const semloc::EvalRow& row : rows) {
        doc.push_back({{"threshold", row.threshold},
                       {"report", nlohmann::json::parse(semloc::EvalReportToJson(row.report))},
                       {"failures", row.failures}});
      }
      Golden(out, v.name + ".json", doc.dump(2));
    }
    std::cout << "recorded " << recorder.log().size() << " requests into "
              << (out / "replay").string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "gen_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
