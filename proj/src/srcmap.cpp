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

#include "semloc/srcmap.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "json.hpp"
#include "semloc/error.hpp"

namespace semloc {
namespace {

using nlohmann::json;

std::string_view RTrim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view LTrim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  return s;
}

// Parses "L<digits>" at the front of `s`, consuming it. Returns nullopt if
// `s` does not start that way.
std::optional<int> TakeLabel(std::string_view& s) {
  if (s.size() < 2 || s[0] != 'L' || !std::isdigit(static_cast<unsigned char>(s[1]))) {
    return std::nullopt;
  }
  std::size_t i = 1;
  long value = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    value = std::min(value * 10 + (s[i] - '0'), 1L << 30);
    ++i;
  }
  s.remove_prefix(i);
  return static_cast<int>(value);
}

struct SourceLabel {
  std::string code;
  std::optional<int> label;
};

// "<code>  # L<k>" -> code + k. Only the last '#' on the line is considered.
SourceLabel SplitSourceLabel(std::string_view line, int line_no) {
  std::string_view trimmed = RTrim(line);
  std::size_t hash = trimmed.rfind('#');
  if (hash == std::string_view::npos) return {std::string(line), std::nullopt};
  std::string_view rest = LTrim(trimmed.substr(hash + 1));
  std::optional<int> label = TakeLabel(rest);
  if (!label) return {std::string(line), std::nullopt};
  if (!rest.empty()) {
    throw Error(Errc::kBadLabel, "source line " + std::to_string(line_no) +
                                     ": malformed label comment '" +
                                     std::string(trimmed.substr(hash)) + "'");
  }
  return {std::string(RTrim(trimmed.substr(0, hash))), label};
}

struct TranslatedLabel {
  std::string code;
  std::vector<int> labels;
};

// "<code> // L<a>,L<b>" -> code + {a, b}. Only the last "//" is considered.
TranslatedLabel SplitTranslatedLabel(std::string_view line, int line_no) {
  std::string_view trimmed = RTrim(line);
  std::size_t slashes = trimmed.rfind("//");
  if (slashes == std::string_view::npos) return {std::string(line), {}};
  std::string_view rest = LTrim(trimmed.substr(slashes + 2));
  std::string_view probe = rest;
  if (!TakeLabel(probe)) return {std::string(line), {}};
  std::vector<int> labels;
  auto malformed = [&] {
    return Error(Errc::kBadLabel, "translated line " + std::to_string(line_no) +
                                      ": malformed label comment '" +
                                      std::string(trimmed.substr(slashes)) + "'");
  };
  while (true) {
    std::optional<int> label = TakeLabel(rest);
    if (!label) throw malformed();
    labels.push_back(*label);
    rest = LTrim(rest);
    if (rest.empty()) break;
    if (rest.front() != ',') throw malformed();
    rest = LTrim(rest.substr(1));
  }
  return {std::string(RTrim(trimmed.substr(0, slashes))), std::move(labels)};
}

std::vector<std::string> NormalizedLines(const std::vector<std::string>& lines) {
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (const std::string& l : lines) out.push_back(NormalizeWhitespace(l));
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

void CheckEcho(const std::vector<std::string>& echoed, std::string_view original,
               const char* side) {
  std::vector<std::string> want = NormalizedLines(SplitLines(original));
  std::vector<std::string> got = NormalizedLines(echoed);
  std::size_t n = std::min(want.size(), got.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (want[i] != got[i]) {
      throw Error(Errc::kMismatchedEcho,
                  std::string(side) + " line " + std::to_string(i + 1) +
                      " was altered: expected '" + want[i] + "', got '" + got[i] + "'");
    }
  }
  if (want.size() != got.size()) {
    throw Error(Errc::kMismatchedEcho,
                std::string(side) + " echo has " + std::to_string(got.size()) +
                    " lines, the original has " + std::to_string(want.size()));
  }
}

std::string StripOneTrailingNewline(std::string_view text) {
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
  return std::string(text);
}

bool IsStrictlyIncreasing(const std::vector<LineNo>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int Find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void Union(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

int CodePair::SourceLineCount() const {
  return static_cast<int>(SplitLines(source_text).size());
}

int CodePair::TranslatedLineCount() const {
  return static_cast<int>(SplitLines(translated_text).size());
}

std::string CodePair::Digest() const {
  std::string material;
  for (const std::string* field :
       {&source_language, &target_language, &source_text, &translated_text}) {
    material += std::to_string(field->size()) + ":" + *field;
  }
  return Sha256Hex(material);
}

void ValidatePair(const CodePair& pair) {
  if (Trim(pair.source_text).empty()) {
    throw Error(Errc::kInvalidArgument, "source program is empty");
  }
  if (Trim(pair.translated_text).empty()) {
    throw Error(Errc::kInvalidArgument, "translated program is empty");
  }
}

void ValidateSourceMap(const SourceMap& map, const CodePair& pair) {
  auto fail = [](const std::string& why) {
    return Error(Errc::kInvalidArgument, "invalid source map: " + why);
  };
  if (map.pair_digest != pair.Digest()) throw fail("pair digest does not match");
  const int n_src = pair.SourceLineCount();
  const int n_tr = pair.TranslatedLineCount();
  std::set<LineNo> seen_src;
  std::set<LineNo> seen_tr;
  LineNo previous_min = 0;
  for (std::size_t i = 0; i < map.fragments.size(); ++i) {
    const AtomicFragment& f = map.fragments[i];
    std::string where = "fragment " + std::to_string(i);
    if (f.source_lines.empty()) throw fail(where + " has no source lines");
    if (!IsStrictlyIncreasing(f.source_lines) || !IsStrictlyIncreasing(f.translated_lines)) {
      throw fail(where + " lines are not strictly increasing");
    }
    if (f.source_lines.front() <= previous_min) {
      throw fail(where + " is out of order");
    }
    previous_min = f.source_lines.front();
    for (LineNo l : f.source_lines) {
      if (l < 1 || l > n_src) throw fail(where + " source line out of range");
      if (!seen_src.insert(l).second) throw fail("source line " + std::to_string(l) + " in two fragments");
    }
    for (LineNo l : f.translated_lines) {
      if (l < 1 || l > n_tr) throw fail(where + " translated line out of range");
      if (!seen_tr.insert(l).second) throw fail("translated line " + std::to_string(l) + " in two fragments");
    }
  }
}

std::string SourceMapToJson(const SourceMap& map) {
  json fragments = json::array();
  for (const AtomicFragment& f : map.fragments) {
    fragments.push_back(json::array({f.source_lines, f.translated_lines}));
  }
  return json{{"pair_digest", map.pair_digest}, {"fragments", std::move(fragments)}}.dump();
}

SourceMap SourceMapFromJson(std::string_view text) {
  try {
    json j = json::parse(text);
    SourceMap map;
    map.pair_digest = j.value("pair_digest", std::string());
    for (const json& f : j.at("fragments")) {
      if (!f.is_array() || f.size() != 2) {
        throw Error(Errc::kInvalidArgument, "fragment is not a pair of line lists");
      }
      map.fragments.push_back(
          {f[0].get<std::vector<LineNo>>(), f[1].get<std::vector<LineNo>>()});
    }
    return map;
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("malformed source map: ") + e.what());
  }
}

std::vector<LineNo> LinesForSource(const SourceMap& map,
                                   std::span<const LineNo> source_lines) {
  std::set<LineNo> query(source_lines.begin(), source_lines.end());
  std::set<LineNo> result;
  for (const AtomicFragment& f : map.fragments) {
    bool hit = std::any_of(f.source_lines.begin(), f.source_lines.end(),
                           [&](LineNo l) { return query.count(l) > 0; });
    if (hit) result.insert(f.translated_lines.begin(), f.translated_lines.end());
  }
  return {result.begin(), result.end()};
}

AnnotatedPair RenderAnnotations(const SourceMap& map, const CodePair& pair) {
  std::vector<std::string> src = SplitLines(pair.source_text);
  std::vector<std::string> tr = SplitLines(pair.translated_text);
  for (const AtomicFragment& f : map.fragments) {
    std::string label;
    for (LineNo l : f.source_lines) {
      src.at(static_cast<std::size_t>(l - 1)) += "  # L" + std::to_string(l);
      label += (label.empty() ? "L" : ",L") + std::to_string(l);
    }
    for (LineNo l : f.translated_lines) {
      tr.at(static_cast<std::size_t>(l - 1)) += " // " + label;
    }
  }
  AnnotatedPair out;
  for (const std::string& l : src) out.source += l + "\n";
  for (const std::string& l : tr) out.translated += l + "\n";
  return out;
}

SourceMap ParseAnnotations(std::string_view annotated_source,
                           std::string_view annotated_translated,
                           const CodePair& pair) {
  const int n_src = pair.SourceLineCount();

  std::vector<std::string> src_code;
  std::vector<int> src_labels;  // 0 = unlabelled
  std::map<int, int> first_line_for_label;
  std::vector<std::string> annotated_src_lines = SplitLines(annotated_source);
  for (std::size_t i = 0; i < annotated_src_lines.size(); ++i) {
    int line_no = static_cast<int>(i) + 1;
    SourceLabel parsed = SplitSourceLabel(annotated_src_lines[i], line_no);
    int label = parsed.label.value_or(0);
    if (parsed.label) {
      SourceLabel again = SplitSourceLabel(parsed.code, line_no);
      if (again.label) {
        throw Error(Errc::kDuplicateSourceLabel,
                    "source line " + std::to_string(line_no) + " carries two labels");
      }
      auto [it, inserted] = first_line_for_label.emplace(label, line_no);
      if (!inserted) {
        throw Error(Errc::kDuplicateSourceLabel,
                    "label L" + std::to_string(label) + " appears on source lines " +
                        std::to_string(it->second) + " and " + std::to_string(line_no));
      }
    }
    src_code.push_back(std::move(parsed.code));
    src_labels.push_back(label);
  }

  std::vector<std::string> tr_code;
  std::vector<std::vector<int>> tr_labels;
  std::vector<std::string> annotated_tr_lines = SplitLines(annotated_translated);
  for (std::size_t i = 0; i < annotated_tr_lines.size(); ++i) {
    TranslatedLabel parsed = SplitTranslatedLabel(annotated_tr_lines[i], static_cast<int>(i) + 1);
    tr_code.push_back(std::move(parsed.code));
    tr_labels.push_back(std::move(parsed.labels));
  }

  CheckEcho(src_code, pair.source_text, "source");
  CheckEcho(tr_code, pair.translated_text, "translated");

  for (std::size_t i = 0; i < src_labels.size(); ++i) {
    int label = src_labels[i];
    if (label == 0) continue;
    if (label != static_cast<int>(i) + 1 || label > n_src) {
      throw Error(Errc::kBadLabel, "source line " + std::to_string(i + 1) +
                                       " is labelled L" + std::to_string(label));
    }
  }
  const int n_tr = pair.TranslatedLineCount();
  for (std::size_t i = 0; i < tr_labels.size(); ++i) {
    if (!tr_labels[i].empty() && static_cast<int>(i) >= n_tr) {
      throw Error(Errc::kBadLabel, "label on translated line " + std::to_string(i + 1) +
                                       " past the end of the program");
    }
    for (int label : tr_labels[i]) {
      if (label < 1 || label > n_src) {
        throw Error(Errc::kBadLabel, "translated line " + std::to_string(i + 1) +
                                         " names L" + std::to_string(label) +
                                         " but the source has " + std::to_string(n_src) +
                                         " lines");
      }
    }
  }

  // Group: source lines joined by a shared translated line form one fragment.
  DisjointSets sets(n_src + 1);
  std::vector<bool> active(static_cast<std::size_t>(n_src) + 1, false);
  for (std::size_t i = 0; i < src_labels.size(); ++i) {
    if (src_labels[i] != 0 && src_labels[i] <= n_src) active[src_labels[i]] = true;
  }
  for (const std::vector<int>& labels : tr_labels) {
    for (int label : labels) {
      active[label] = true;
      sets.Union(labels.front(), label);
    }
  }
  std::map<int, AtomicFragment> by_root;
  for (int l = 1; l <= n_src; ++l) {
    if (active[l]) by_root[sets.Find(l)].source_lines.push_back(l);
  }
  for (std::size_t i = 0; i < tr_labels.size(); ++i) {
    if (tr_labels[i].empty()) continue;
    by_root[sets.Find(tr_labels[i].front())].translated_lines.push_back(
        static_cast<LineNo>(i) + 1);
  }

  SourceMap map;
  map.pair_digest = pair.Digest();
  for (auto& [root, fragment] : by_root) map.fragments.push_back(std::move(fragment));
  std::sort(map.fragments.begin(), map.fragments.end(),
            [](const AtomicFragment& a, const AtomicFragment& b) {
              return a.source_lines.front() < b.source_lines.front();
            });
  return map;
}

AnnotatedPair ExtractAnnotatedBlocks(std::string_view reply) {
  std::optional<std::string> python;
  std::optional<std::string> javascript;
  std::vector<std::string> lines = SplitLines(reply);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string fence = Trim(lines[i]);
    if (!StartsWith(fence, "```")) continue;
    std::string tag = Trim(fence.substr(3));
    std::optional<std::string>* target = nullptr;
    if (tag == "python" || tag == "py" || tag == "python3") target = &python;
    if (tag == "javascript" || tag == "js") target = &javascript;
    std::string body;
    std::size_t j = i + 1;
    for (; j < lines.size() && Trim(lines[j]) != "```"; ++j) body += lines[j] + "\n";
    if (target != nullptr && !target->has_value()) *target = std::move(body);
    i = j;
  }
  if (!python) throw Error(Errc::kMismatchedEcho, "reply has no ```python block");
  if (!javascript) throw Error(Errc::kMismatchedEcho, "reply has no ```javascript block");
  return {std::move(*python), std::move(*javascript)};
}

std::string BuildMapPrompt(const CodePair& pair, std::string_view demos,
                           std::string_view dynamic_template) {
  if (Trim(demos).empty()) {
    throw Error(Errc::kInvalidArgument, "map prompt needs at least one demonstration");
  }
  std::string src = StripOneTrailingNewline(pair.source_text);
  std::string tr = StripOneTrailingNewline(pair.translated_text);
  std::string dynamic = FillTemplate(dynamic_template, {{kPythonCode, src}, {kJavaScriptCode, tr}});
  std::string out(demos);
  if (!out.empty() && out.back() != '\n') out += '\n';
  return out + "\n" + dynamic;
}

MapResult GenerateSourceMap(const CodePair& pair, LlmClient& llm,
                            const MapOptions& options) {
  ValidatePair(pair);
  const PromptTemplates& t = options.templates ? *options.templates : DefaultTemplates();
  const std::string prompt = BuildMapPrompt(pair, t.map_demo, t.map);
  std::string last_error;
  std::string last_reply;
  for (int attempt = 0; attempt <= std::max(0, options.max_retries); ++attempt) {
    LlmRequest request;
    request.model_id = options.model.model_id;
    request.temperature = options.model.temperature;
    std::string content = prompt;
    if (attempt > 0) content += FillTemplate(t.map_retry, {{kErrorText, last_error}});
    request.messages.push_back({Role::kUser, std::move(content)});
    last_reply = llm.Complete(request, {"map", -1});
    try {
      AnnotatedPair blocks = ExtractAnnotatedBlocks(last_reply);
      SourceMap map = ParseAnnotations(blocks.source, blocks.translated, pair);
      ValidateSourceMap(map, pair);
      return {std::move(map), attempt};
    } catch (const Error& e) {
      if (e.code() != Errc::kMismatchedEcho && e.code() != Errc::kBadLabel &&
          e.code() != Errc::kDuplicateSourceLabel && e.code() != Errc::kInvalidArgument) {
        throw;
      }
      last_error = e.what();
    }
  }
  throw MapGenerationFailed(last_error, last_reply);
}

std::string AuditExport(const SourceMap& map, const CodePair& pair) {
  std::vector<std::string> src = SplitLines(pair.source_text);
  std::vector<std::string> tr = SplitLines(pair.translated_text);
  std::string out = "pair " + map.pair_digest + "\n";
  std::set<LineNo> mapped_tr;
  for (std::size_t i = 0; i < map.fragments.size(); ++i) {
    const AtomicFragment& f = map.fragments[i];
    out += "\nfragment " + std::to_string(i + 1) + "\n";
    for (LineNo l : f.source_lines) {
      out += "  py " + std::to_string(l) + " | " + src.at(static_cast<std::size_t>(l - 1)) + "\n";
    }
    if (f.translated_lines.empty()) out += "  js (no counterpart)\n";
    for (LineNo l : f.translated_lines) {
      mapped_tr.insert(l);
      out += "  js " + std::to_string(l) + " | " + tr.at(static_cast<std::size_t>(l - 1)) + "\n";
    }
  }
  std::string unmapped;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    LineNo l = static_cast<LineNo>(i) + 1;
    if (!mapped_tr.count(l) && !Trim(tr[i]).empty()) unmapped += " " + std::to_string(l);
  }
  if (!unmapped.empty()) out += "\nunmapped translated lines:" + unmapped + "\n";
  return out;
}

}  // namespace semloc
