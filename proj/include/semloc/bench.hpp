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

#ifndef SEMLOC_BENCH_HPP_
#define SEMLOC_BENCH_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semloc/chain.hpp"
#include "semloc/srcmap.hpp"

namespace semloc {

// Hidden mistakes are not revealed by running tests; output_diff mistakes
// change the program's output without a runtime error.
enum class MistakeCategory { kHidden, kOutputDiff };

std::string_view CategoryName(MistakeCategory category);
MistakeCategory CategoryFromName(std::string_view name);  // throws SampleValidation

struct MistakeRecord {
  std::vector<LineNo> lines;
  MistakeCategory category = MistakeCategory::kOutputDiff;
  std::string fix;
  std::optional<std::string> note;
};

struct BenchSample {
  std::string id;
  std::string origin;
  std::string source_program;
  std::string translated_program;
  std::string fixed_program;
  std::vector<MistakeRecord> mistakes;

  CodePair Pair() const { return {source_program, translated_program}; }
};

// Throws SampleValidation naming the first broken invariant.
void ValidateSample(const BenchSample& sample);

struct LoadOptions {
  bool strict = false;  // abort on the first invalid sample
};

struct LoadResult {
  std::vector<BenchSample> samples;  // sorted by (origin, id)
  std::vector<std::string> problems;  // skipped samples and manifest mismatches
  std::map<std::string, int> manifest_counts;  // empty without a manifest
};

// Layout: <root>/<origin>/<id>/{source.py, translated.js, fixed.js,
// mistakes.json}, plus an optional <root>/manifest.json of the form
// {"origins": {"<origin>": <count>, ...}}.
// Throws IoFailure for a missing root, EmptyBenchmark when no valid sample
// remains, SampleValidation in strict mode.
LoadResult LoadBenchmark(const std::filesystem::path& root, const LoadOptions& options = {});

struct ScoreOptions {
  // Count a multi-line mistake as found only if every line is suspicious.
  bool full_coverage = false;
};

struct SampleScore {
  std::string sample_id;
  std::string origin;
  std::vector<bool> hits;  // one per mistake
  std::vector<MistakeCategory> categories;
  int l_sus = 0;
  int translated_line_count = 0;
  bool failed = false;  // pipeline error; every mistake counted as missed

  int hit_count() const;
  int miss_count() const { return static_cast<int>(hits.size()) - hit_count(); }
  double l_sus_ratio() const;
};

// Throws DigestMismatch if the report was produced for another pair.
SampleScore ScoreSample(const LocatorReport& report, const BenchSample& sample,
                        const ScoreOptions& options = {});

// Score for a sample whose pipeline run failed.
SampleScore FailedSample(const BenchSample& sample);

// Raw counts; ratios are derived from these.
struct EvalTotals {
  int n_samples = 0;
  int n_mistakes = 0;
  int n_hidden = 0;
  int n_output_diff = 0;
  int hits = 0;
  int hidden_hits = 0;
  int output_diff_hits = 0;
  long long sum_l_sus = 0;
  double sum_l_sus_ratio = 0.0;

  EvalTotals& operator+=(const EvalTotals& other);
  friend bool operator==(const EvalTotals&, const EvalTotals&) = default;
};

EvalTotals Tally(const std::vector<SampleScore>& scores);

struct EvalReport {
  double s_sem = 0.0;
  std::optional<double> s_hid;  // absent when no mistake is hidden
  std::optional<double> s_dif;  // absent when no mistake is output_diff
  double mean_l_sus = 0.0;
  double mean_l_sus_ratio = 0.0;
  std::vector<SampleScore> per_sample;
  EvalTotals totals;
};

EvalReport FromTotals(const EvalTotals& totals, std::vector<SampleScore> per_sample = {});

// Throws InvalidArgument for an empty score list.
EvalReport Aggregate(const std::vector<SampleScore>& scores);

std::string EvalReportToJson(const EvalReport& report);

// Plain-text table, one row per labelled report.
std::string RenderTable(const std::vector<std::pair<std::string, EvalReport>>& rows);

}  // namespace semloc

#endif  // SEMLOC_BENCH_HPP_
