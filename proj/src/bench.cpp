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

#include <algorithm>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "semloc/error.hpp"

namespace semloc {
namespace {

using nlohmann::json;

Error Invalid(const std::string& where, const std::string& why) {
  return Error(Errc::kSampleValidation, where + ": " + why);
}

std::string ReadSampleFile(const std::filesystem::path& path, const std::string& where) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Invalid(where, "missing " + path.filename().string());
  }
  return ReadFile(path);
}

std::vector<MistakeRecord> ParseMistakes(const std::string& text, const std::string& where) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Invalid(where, std::string("mistakes.json is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw Invalid(where, "mistakes.json must hold an array");
  std::vector<MistakeRecord> mistakes;
  for (const json& m : j) {
    try {
      MistakeRecord record;
      record.lines = m.at("lines").get<std::vector<LineNo>>();
      record.category = CategoryFromName(m.at("category").get<std::string>());
      record.fix = m.value("fix", std::string());
      if (m.contains("note") && !m["note"].is_null()) record.note = m["note"].get<std::string>();
      mistakes.push_back(std::move(record));
    } catch (const json::exception& e) {
      throw Invalid(where, std::string("malformed mistake entry: ") + e.what());
    }
  }
  return mistakes;
}

BenchSample LoadSample(const std::filesystem::path& dir, const std::string& origin) {
  BenchSample sample;
  sample.origin = origin;
  sample.id = dir.filename().string();
  std::string where = origin + "/" + sample.id;
  sample.source_program = ReadSampleFile(dir / "source.py", where);
  sample.translated_program = ReadSampleFile(dir / "translated.js", where);
  sample.fixed_program = ReadSampleFile(dir / "fixed.js", where);
  sample.mistakes = ParseMistakes(ReadSampleFile(dir / "mistakes.json", where), where);
  ValidateSample(sample);
  return sample;
}

std::vector<std::filesystem::path> SortedSubdirs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory()) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Percent(std::optional<double> ratio) {
  if (!ratio) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", *ratio * 100.0);
  return buf;
}

std::string Fixed(double value, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

}  // namespace

std::string_view CategoryName(MistakeCategory category) {
  return category == MistakeCategory::kHidden ? "hidden" : "output_diff";
}

MistakeCategory CategoryFromName(std::string_view name) {
  if (name == "hidden") return MistakeCategory::kHidden;
  if (name == "output_diff") return MistakeCategory::kOutputDiff;
  throw Error(Errc::kSampleValidation, "unknown mistake category '" + std::string(name) + "'");
}

void ValidateSample(const BenchSample& sample) {
  std::string where = sample.origin + "/" + sample.id;
  if (Trim(sample.source_program).empty()) throw Invalid(where, "source program is empty");
  if (Trim(sample.translated_program).empty()) throw Invalid(where, "translated program is empty");
  if (Trim(sample.fixed_program).empty()) throw Invalid(where, "fixed program is empty");
  if (sample.mistakes.empty()) throw Invalid(where, "sample lists no mistakes");
  const int n_tr = static_cast<int>(SplitLines(sample.translated_program).size());
  for (std::size_t i = 0; i < sample.mistakes.size(); ++i) {
    const MistakeRecord& m = sample.mistakes[i];
    std::string which = "mistake " + std::to_string(i + 1);
    if (m.lines.empty()) throw Invalid(where, which + " has no lines");
    for (std::size_t k = 0; k < m.lines.size(); ++k) {
      if (m.lines[k] < 1 || m.lines[k] > n_tr) {
        throw Invalid(where, which + " names line " + std::to_string(m.lines[k]) +
                                 " outside the translated program");
      }
      if (k > 0 && m.lines[k] <= m.lines[k - 1]) {
        throw Invalid(where, which + " lines are not sorted");
      }
    }
  }
}

LoadResult LoadBenchmark(const std::filesystem::path& root, const LoadOptions& options) {
  if (!std::filesystem::is_directory(root)) {
    throw Error(Errc::kIoFailure, "benchmark root " + root.string() + " is not a directory");
  }
  LoadResult result;
  std::filesystem::path manifest_path = root / "manifest.json";
  if (std::filesystem::is_regular_file(manifest_path)) {
    try {
      json manifest = json::parse(ReadFile(manifest_path));
      for (const auto& [origin, count] : manifest.at("origins").items()) {
        result.manifest_counts[origin] = count.get<int>();
      }
    } catch (const json::exception& e) {
      throw Error(Errc::kSampleValidation,
                  std::string("malformed benchmark manifest: ") + e.what());
    }
  }
  std::map<std::string, int> counts;
  for (const std::filesystem::path& origin_dir : SortedSubdirs(root)) {
    std::string origin = origin_dir.filename().string();
    for (const std::filesystem::path& sample_dir : SortedSubdirs(origin_dir)) {
      try {
        result.samples.push_back(LoadSample(sample_dir, origin));
        ++counts[origin];
      } catch (const Error& e) {
        if (options.strict || e.code() != Errc::kSampleValidation) throw;
        result.problems.push_back(std::string("skipped ") + e.what());
      }
    }
  }
  for (const auto& [origin, expected] : result.manifest_counts) {
    int found = counts.count(origin) ? counts[origin] : 0;
    if (found != expected) {
      std::string msg = "origin " + origin + ": manifest lists " + std::to_string(expected) +
                        " samples, found " + std::to_string(found);
      if (options.strict) throw Error(Errc::kSampleValidation, msg);
      result.problems.push_back(msg);
    }
  }
  if (result.samples.empty()) {
    throw Error(Errc::kEmptyBenchmark, "no valid samples under " + root.string());
  }
  return result;
}

int SampleScore::hit_count() const {
  return static_cast<int>(std::count(hits.begin(), hits.end(), true));
}

double SampleScore::l_sus_ratio() const {
  return translated_line_count == 0 ? 0.0
                                    : static_cast<double>(l_sus) / translated_line_count;
}

SampleScore ScoreSample(const LocatorReport& report, const BenchSample& sample,
                        const ScoreOptions& options) {
  if (report.pair_digest != sample.Pair().Digest()) {
    throw Error(Errc::kDigestMismatch,
                "report was not produced for sample " + sample.origin + "/" + sample.id);
  }
  std::set<LineNo> suspicious(report.suspicious_lines.begin(), report.suspicious_lines.end());
  SampleScore score;
  score.sample_id = sample.id;
  score.origin = sample.origin;
  score.l_sus = static_cast<int>(suspicious.size());
  score.translated_line_count = static_cast<int>(SplitLines(sample.translated_program).size());
  for (const MistakeRecord& m : sample.mistakes) {
    auto flagged = [&](LineNo l) { return suspicious.count(l) > 0; };
    bool hit = options.full_coverage ? std::all_of(m.lines.begin(), m.lines.end(), flagged)
                                     : std::any_of(m.lines.begin(), m.lines.end(), flagged);
    score.hits.push_back(hit);
    score.categories.push_back(m.category);
  }
  return score;
}

SampleScore FailedSample(const BenchSample& sample) {
  SampleScore score;
  score.sample_id = sample.id;
  score.origin = sample.origin;
  score.translated_line_count = static_cast<int>(SplitLines(sample.translated_program).size());
  score.failed = true;
  for (const MistakeRecord& m : sample.mistakes) {
    score.hits.push_back(false);
    score.categories.push_back(m.category);
  }
  return score;
}

EvalTotals& EvalTotals::operator+=(const EvalTotals& o) {
  n_samples += o.n_samples;
  n_mistakes += o.n_mistakes;
  n_hidden += o.n_hidden;
  n_output_diff += o.n_output_diff;
  hits += o.hits;
  hidden_hits += o.hidden_hits;
  output_diff_hits += o.output_diff_hits;
  sum_l_sus += o.sum_l_sus;
  sum_l_sus_ratio += o.sum_l_sus_ratio;
  return *this;
}

EvalTotals Tally(const std::vector<SampleScore>& scores) {
  EvalTotals t;
  for (const SampleScore& s : scores) {
    ++t.n_samples;
    t.sum_l_sus += s.l_sus;
    t.sum_l_sus_ratio += s.l_sus_ratio();
    for (std::size_t i = 0; i < s.hits.size(); ++i) {
      ++t.n_mistakes;
      if (s.hits[i]) ++t.hits;
      if (s.categories[i] == MistakeCategory::kHidden) {
        ++t.n_hidden;
        if (s.hits[i]) ++t.hidden_hits;
      } else {
        ++t.n_output_diff;
        if (s.hits[i]) ++t.output_diff_hits;
      }
    }
  }
  return t;
}

EvalReport FromTotals(const EvalTotals& t, std::vector<SampleScore> per_sample) {
  EvalReport r;
  r.totals = t;
  r.per_sample = std::move(per_sample);
  if (t.n_mistakes > 0) r.s_sem = static_cast<double>(t.hits) / t.n_mistakes;
  if (t.n_hidden > 0) r.s_hid = static_cast<double>(t.hidden_hits) / t.n_hidden;
  if (t.n_output_diff > 0) r.s_dif = static_cast<double>(t.output_diff_hits) / t.n_output_diff;
  if (t.n_samples > 0) {
    r.mean_l_sus = static_cast<double>(t.sum_l_sus) / t.n_samples;
    r.mean_l_sus_ratio = t.sum_l_sus_ratio / t.n_samples;
  }
  return r;
}

EvalReport Aggregate(const std::vector<SampleScore>& scores) {
  if (scores.empty()) throw Error(Errc::kInvalidArgument, "nothing to aggregate");
  return FromTotals(Tally(scores), scores);
}

std::string EvalReportToJson(const EvalReport& r) {
  auto optional_ratio = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  json per_sample = json::array();
  for (const SampleScore& s : r.per_sample) {
    per_sample.push_back({{"id", s.sample_id},
                          {"origin", s.origin},
                          {"hits", s.hit_count()},
                          {"misses", s.miss_count()},
                          {"l_sus", s.l_sus},
                          {"failed", s.failed}});
  }
  const EvalTotals& t = r.totals;
  json j = {{"s_sem", r.s_sem},
            {"s_hid", optional_ratio(r.s_hid)},
            {"s_dif", optional_ratio(r.s_dif)},
            {"mean_l_sus", r.mean_l_sus},
            {"mean_l_sus_ratio", r.mean_l_sus_ratio},
            {"per_sample", std::move(per_sample)},
            {"totals",
             {{"n_samples", t.n_samples},
              {"n_mistakes", t.n_mistakes},
              {"n_hidden", t.n_hidden},
              {"n_output_diff", t.n_output_diff},
              {"hits", t.hits},
              {"hidden_hits", t.hidden_hits},
              {"output_diff_hits", t.output_diff_hits}}}};
  return j.dump(2);
}

std::string RenderTable(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  std::size_t width = 6;
  for (const auto& [label, report] : rows) width = std::max(width, label.size());
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  std::string out = pad("config", width) + "  " + pad("S_sem", 7) + "  " + pad("S_hid", 7) +
                    "  " + pad("S_dif", 7) + "  " + pad("L_sus", 6) + "  L_sus/lines\n";
  for (const auto& [label, r] : rows) {
    out += pad(label, width) + "  " + pad(Percent(r.s_sem), 7) + "  " + pad(Percent(r.s_hid), 7) +
           "  " + pad(Percent(r.s_dif), 7) + "  " + pad(Fixed(r.mean_l_sus, 2), 6) + "  " +
           Percent(r.mean_l_sus_ratio) + "\n";
  }
  return out;
}

}  // namespace semloc
