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

#include "semloc/bench.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "semloc/error.hpp"
#include "semloc/text.hpp"

namespace semloc {
namespace {

namespace fs = std::filesystem;

const fs::path kBench = fs::path(SEMLOC_SOURCE_DIR) / "fixtures" / "bench";

LocatorReport ReportFor(const BenchSample& sample, std::vector<LineNo> lines) {
  LocatorReport r;
  r.pair_digest = sample.Pair().Digest();
  r.suspicious_lines = std::move(lines);
  r.l_sus = static_cast<int>(r.suspicious_lines.size());
  return r;
}

const BenchSample& Find(const LoadResult& loaded, const std::string& origin,
                        const std::string& id) {
  for (const BenchSample& s : loaded.samples) {
    if (s.origin == origin && s.id == id) return s;
  }
  throw std::runtime_error("no sample " + origin + "/" + id);
}

// Writes a minimal valid sample; callers then break one file.
void WriteSample(const fs::path& dir, const std::string& mistakes) {
  fs::create_directories(dir);
  WriteFile(dir / "source.py", "x = 1\n");
  WriteFile(dir / "translated.js", "var x = 1;\nvar y = 2;\n");
  WriteFile(dir / "fixed.js", "var x = 1;\n");
  WriteFile(dir / "mistakes.json", mistakes);
}

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(LoadBenchmark, ReadsTheFixtureInOriginOrder) {
  LoadResult loaded = LoadBenchmark(kBench);
  ASSERT_EQ(loaded.samples.size(), 6u);
  EXPECT_TRUE(loaded.problems.empty());
  EXPECT_EQ(loaded.manifest_counts.at("Leetcode"), 2);
  EXPECT_EQ(loaded.manifest_counts.at("HumanEvalX"), 1);
  EXPECT_EQ(loaded.samples.front().origin, "GeeksForGeeks");
  EXPECT_EQ(loaded.samples.back().origin, "New_Leetcode");
  const BenchSample& l1 = Find(loaded, "Leetcode", "0001");
  ASSERT_EQ(l1.mistakes.size(), 2u);
  EXPECT_EQ(l1.mistakes[0].lines, (std::vector<LineNo>{2}));
  EXPECT_EQ(l1.mistakes[0].category, MistakeCategory::kOutputDiff);
  EXPECT_EQ(l1.mistakes[1].category, MistakeCategory::kHidden);
  EXPECT_EQ(*l1.mistakes[1].note, "gaps are sorted lexicographically");
}

TEST(LoadBenchmark, EmptyRootIsAnError) {
  fs::path dir = FreshDir("semloc_bench_empty");
  try {
    LoadBenchmark(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kEmptyBenchmark);
  }
  EXPECT_THROW(LoadBenchmark(dir / "missing"), Error);
}

TEST(LoadBenchmark, InvalidSamplesAreSkippedOrFatalWhenStrict) {
  fs::path dir = FreshDir("semloc_bench_invalid");
  WriteSample(dir / "Site" / "good", R"([{"lines":[1],"category":"hidden","fix":"x"}])");
  WriteSample(dir / "Site" / "range", R"([{"lines":[3],"category":"hidden","fix":"x"}])");
  WriteSample(dir / "Site" / "category", R"([{"lines":[1],"category":"subtle","fix":"x"}])");
  WriteSample(dir / "Site" / "unsorted", R"([{"lines":[2,1],"category":"hidden","fix":"x"}])");
  WriteSample(dir / "Site" / "none", "[]");
  WriteSample(dir / "Site" / "json", "{");
  WriteSample(dir / "Site" / "nofixed", R"([{"lines":[1],"category":"hidden","fix":"x"}])");
  fs::remove(dir / "Site" / "nofixed" / "fixed.js");

  LoadResult loaded = LoadBenchmark(dir);
  ASSERT_EQ(loaded.samples.size(), 1u);
  EXPECT_EQ(loaded.samples[0].id, "good");
  EXPECT_EQ(loaded.problems.size(), 6u);

  try {
    LoadBenchmark(dir, {.strict = true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kSampleValidation);
  }
}

TEST(LoadBenchmark, ManifestMismatchIsReported) {
  fs::path dir = FreshDir("semloc_bench_manifest");
  WriteSample(dir / "Site" / "a", R"([{"lines":[1],"category":"hidden","fix":"x"}])");
  WriteFile(dir / "manifest.json", R"({"origins":{"Site":2}})");
  LoadResult loaded = LoadBenchmark(dir);
  ASSERT_EQ(loaded.problems.size(), 1u);
  EXPECT_NE(loaded.problems[0].find("manifest lists 2"), std::string::npos);
  EXPECT_THROW(LoadBenchmark(dir, {.strict = true}), Error);
}

TEST(ScoreSample, AnyLineCountsUnlessFullCoverage) {
  BenchSample s;
  s.id = "x";
  s.origin = "o";
  s.source_program = "a\n";
  s.translated_program = "1\n2\n3\n4\n";
  s.fixed_program = "f\n";
  s.mistakes = {{{2, 3}, MistakeCategory::kHidden, "f", {}},
                {{4}, MistakeCategory::kOutputDiff, "f", {}}};
  LocatorReport r = ReportFor(s, {1, 3});
  SampleScore loose = ScoreSample(r, s);
  EXPECT_EQ(loose.hits, (std::vector<bool>{true, false}));
  EXPECT_EQ(loose.l_sus, 2);
  EXPECT_DOUBLE_EQ(loose.l_sus_ratio(), 0.5);
  SampleScore strict = ScoreSample(r, s, {.full_coverage = true});
  EXPECT_EQ(strict.hits, (std::vector<bool>{false, false}));
  SampleScore all = ScoreSample(ReportFor(s, {2, 3, 4}), s, {.full_coverage = true});
  EXPECT_EQ(all.hit_count(), 2);
}

TEST(ScoreSample, RejectsReportForAnotherPair) {
  LoadResult loaded = LoadBenchmark(kBench);
  LocatorReport r = ReportFor(loaded.samples[0], {1});
  try {
    ScoreSample(r, loaded.samples[1]);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDigestMismatch);
  }
}

// Every mistake found except the loop bound in Leetcode/0002.
TEST(Aggregate, HandComputedFixtureScores) {
  LoadResult loaded = LoadBenchmark(kBench);
  std::vector<SampleScore> scores = {
      ScoreSample(ReportFor(Find(loaded, "Leetcode", "0001"), {2, 7}),
                  Find(loaded, "Leetcode", "0001")),
      ScoreSample(ReportFor(Find(loaded, "Leetcode", "0002"), {5}),
                  Find(loaded, "Leetcode", "0002")),
      ScoreSample(ReportFor(Find(loaded, "GeeksForGeeks", "0001"), {2}),
                  Find(loaded, "GeeksForGeeks", "0001")),
      ScoreSample(ReportFor(Find(loaded, "GeeksForGeeks", "0002"), {3, 7}),
                  Find(loaded, "GeeksForGeeks", "0002")),
      ScoreSample(ReportFor(Find(loaded, "HumanEvalX", "0001"), {4}),
                  Find(loaded, "HumanEvalX", "0001")),
      ScoreSample(ReportFor(Find(loaded, "New_Leetcode", "0001"), {2}),
                  Find(loaded, "New_Leetcode", "0001")),
  };
  EvalReport r = Aggregate(scores);
  EXPECT_EQ(r.totals.n_samples, 6);
  EXPECT_EQ(r.totals.n_mistakes, 8);
  EXPECT_EQ(r.totals.n_hidden, 4);
  EXPECT_EQ(r.totals.n_output_diff, 4);
  EXPECT_DOUBLE_EQ(r.s_sem, 7.0 / 8.0);
  EXPECT_DOUBLE_EQ(*r.s_hid, 1.0);
  EXPECT_DOUBLE_EQ(*r.s_dif, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.mean_l_sus, 8.0 / 6.0);
  // 2/9, 1/16, 1/8, 2/8, 1/7, 1/10
  double ratio = (2.0 / 9 + 1.0 / 16 + 1.0 / 8 + 2.0 / 8 + 1.0 / 7 + 1.0 / 10) / 6;
  EXPECT_NEAR(r.mean_l_sus_ratio, ratio, 1e-12);
}

TEST(Aggregate, FailedSampleCountsAsMisses) {
  LoadResult loaded = LoadBenchmark(kBench);
  const BenchSample& l1 = Find(loaded, "Leetcode", "0001");
  EvalReport r = Aggregate({FailedSample(l1)});
  EXPECT_DOUBLE_EQ(r.s_sem, 0.0);
  EXPECT_EQ(r.per_sample[0].miss_count(), 2);
  EXPECT_TRUE(r.per_sample[0].failed);
  EXPECT_THROW(Aggregate({}), Error);
}

TEST(Aggregate, AbsentCategoryLeavesRateUnset) {
  SampleScore s;
  s.hits = {true};
  s.categories = {MistakeCategory::kHidden};
  s.translated_line_count = 4;
  s.l_sus = 1;
  EvalReport r = Aggregate({s});
  EXPECT_TRUE(r.s_hid);
  EXPECT_FALSE(r.s_dif);
  EXPECT_NE(RenderTable({{"t1", r}}).find("-"), std::string::npos);
  EXPECT_NE(EvalReportToJson(r).find("\"s_dif\": null"), std::string::npos);
}

TEST(Aggregate, SuspiciousLineRatioOnLongerPrograms) {
  // Four flagged lines on 17 and 18 line translations.
  SampleScore a;
  a.l_sus = 4;
  a.translated_line_count = 17;
  a.hits = {true};
  a.categories = {MistakeCategory::kOutputDiff};
  SampleScore b = a;
  b.translated_line_count = 18;
  EvalReport r = Aggregate({a, b});
  EXPECT_DOUBLE_EQ(r.mean_l_sus, 4.0);
  EXPECT_NEAR(r.mean_l_sus_ratio, 0.23, 0.01);
}

TEST(Tally, TotalsAddAcrossShards) {
  SampleScore a;
  a.hits = {true, false};
  a.categories = {MistakeCategory::kHidden, MistakeCategory::kOutputDiff};
  a.l_sus = 2;
  a.translated_line_count = 10;
  SampleScore b = a;
  b.hits = {false, true};
  EvalTotals sum = Tally({a});
  sum += Tally({b});
  EXPECT_EQ(sum, Tally({a, b}));
  EXPECT_DOUBLE_EQ(FromTotals(sum).s_sem, 0.5);
}

TEST(RenderTable, OneRowPerConfiguration) {
  SampleScore s;
  s.hits = {true, false};
  s.categories = {MistakeCategory::kHidden, MistakeCategory::kOutputDiff};
  s.l_sus = 3;
  s.translated_line_count = 12;
  std::string table = RenderTable({{"t1", Aggregate({s})}, {"t2", Aggregate({s})}});
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
  EXPECT_NE(table.find("50.0%"), std::string::npos);
  EXPECT_NE(table.find("3.00"), std::string::npos);
  EXPECT_NE(table.find("25.0%"), std::string::npos);
}

}  // namespace
}  // namespace semloc
