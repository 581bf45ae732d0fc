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

#include "mock_analyst.hpp"

#include <regex>
#include <set>
#include <sstream>

#include "semloc/error.hpp"
#include "semloc/text.hpp"

namespace semloc::testing {
namespace {

enum class Insight {
  kObvious,  // noticed even by the single-prompt baseline
  kBuiltIn,  // noticed in the chain's comparison step
  kNeedsKb,  // acknowledged only after documentation is shown
};

struct Hazard {
  std::string subject;
  std::regex py;
  std::regex js;
  std::string py_fqn;
  std::string js_fqn;
  std::string py_behaviour;
  std::string js_behaviour;
  std::string difference;  // "none" when both sides agree
  Insight insight;
};

const std::vector<Hazard>& Hazards() {
  static const std::vector<Hazard> kHazards = [] {
    std::vector<Hazard> h;
    auto add = [&](std::string subject, const char* py, const char* js, std::string py_fqn,
                   std::string js_fqn, std::string pb, std::string jb, std::string diff,
                   Insight insight) {
      h.push_back({std::move(subject), std::regex(py), std::regex(js), std::move(py_fqn),
                   std::move(js_fqn), std::move(pb), std::move(jb), std::move(diff), insight});
    };
    add("str.replace / String.prototype.replace", R"(\.replace\()", R"(\.replace\(\s*['"])",
        "str.replace", "String.prototype.replace", "replaces every occurrence",
        "replaces only the first occurrence of a string pattern",
        "only the first match is replaced in JavaScript", Insight::kObvious);
    add("operator.% / operator.%", R"(\s%\s)", R"(\s%\s)", "operator.%", "operator.%",
        "result takes the sign of the divisor", "result takes the sign of the dividend",
        "negative operands give a different remainder", Insight::kBuiltIn);
    add("collections.Counter / Map", R"(Counter\()", R"(new Map\(\s*\))", "collections.Counter",
        "Map", "counts the elements of its argument", "creates an empty map",
        "the Map starts empty so nothing is counted", Insight::kBuiltIn);
    add("sorted / Array.prototype.sort", R"(sorted\(|\.sort\(\s*\))", R"(\.sort\(\s*\))",
        "sorted", "Array.prototype.sort", "orders numbers by value",
        "orders elements as strings unless a comparator is given",
        "numbers are compared as strings in JavaScript", Insight::kBuiltIn);
    add("dict.__getitem__ / Map.prototype.get", R"(\w\[\w+\])",
        R"(\.get\([^)]*\)(?!\s*(\|\||\?\?)))", "dict.__getitem__", "Map.prototype.get",
        "returns the stored value", "returns undefined for a missing key",
        "a missing key yields undefined instead of a default", Insight::kNeedsKb);
    add("int / parseInt", R"(\bint\()", R"(parseInt\()", "int", "parseInt",
        "raises on malformed text", "stops at the first invalid character",
        "malformed input is silently truncated", Insight::kNeedsKb);
    add("round / Math.round", R"(\bround\()", R"(Math\.round\()", "round", "Math.round",
        "rounds halves to the even neighbour", "rounds halves towards positive infinity",
        "ties such as 2.5 round differently", Insight::kNeedsKb);
    add("operator.// / Math.floor", R"(//)", R"(Math\.floor\()", "operator.//", "Math.floor",
        "floor division", "floor of the quotient", "none", Insight::kBuiltIn);
    add("len / length", R"(\blen\()", R"(\.length\b)", "len", "String.prototype.length",
        "number of elements", "number of elements", "none", Insight::kBuiltIn);
    add("str.startswith / String.prototype.startsWith", R"(\.startswith\()",
        R"(\.startsWith\()", "str.startswith", "String.prototype.startsWith",
        "prefix test", "prefix test", "none", Insight::kBuiltIn);
    add("list.append / Array.prototype.push", R"(\.append\()", R"(\.push\()", "list.append",
        "Array.prototype.push", "appends one element", "appends elements", "none",
        Insight::kBuiltIn);
    add("slicing / slice", R"(\[[^\]\[]*:[^\]\[]*\])", R"(\.slice\()", "slice",
        "String.prototype.slice", "copies a range", "copies a range", "none",
        Insight::kBuiltIn);
    return h;
  }();
  return kHazards;
}

std::string Fenced(std::string_view text, std::string_view tag) {
  const std::string open = "```" + std::string(tag) + "\n";
  std::size_t start = text.find(open);
  if (start == std::string_view::npos) return {};
  start += open.size();
  std::size_t end = text.find("\n```", start);
  if (end == std::string_view::npos) return {};
  return std::string(text.substr(start, end - start));
}

// Strips the "k: " prefixes added by NumberLines.
std::vector<std::string> Unnumber(const std::string& numbered) {
  std::vector<std::string> lines;
  for (const std::string& line : SplitLines(numbered)) {
    std::size_t colon = line.find(": ");
    lines.push_back(colon == std::string::npos ? line : line.substr(colon + 2));
  }
  return lines;
}

std::string Answer(const std::vector<std::string>& rows) {
  std::string out = "```answer\n";
  if (rows.empty()) out += "none\n";
  for (const std::string& r : rows) out += r + "\n";
  return out + "```\n";
}

bool Matches(const std::regex& re, const std::string& text) {
  return std::regex_search(text, re);
}

bool HasKbFact(const LlmRequest& request, const Hazard& h) {
  for (const Message& m : request.messages) {
    if (m.role == Role::kUser && m.content.find("- " + h.js_fqn + " (") != std::string::npos) {
      return true;
    }
    if (m.role == Role::kUser && m.content.find("- " + h.js_fqn + ":") != std::string::npos) {
      return true;
    }
  }
  return false;
}

std::string AnswerDetect(const LlmRequest& request) {
  const std::string& prompt = request.messages.front().content;
  const std::string py = Fenced(prompt, "python");
  const std::string js = Fenced(prompt, "javascript");
  std::vector<std::string> rows;
  std::set<std::string> seen;
  for (const Hazard& h : Hazards()) {
    if (Matches(h.py, py) && seen.insert("python: " + h.py_fqn).second) {
      rows.push_back("python: " + h.py_fqn);
    }
  }
  for (const Hazard& h : Hazards()) {
    if (Matches(h.js, js) && seen.insert("javascript: " + h.js_fqn).second) {
      rows.push_back("javascript: " + h.js_fqn);
    }
  }
  return "The snippets use the following operators and methods.\n\n" + Answer(rows);
}

std::string AnswerCompare(const LlmRequest& request) {
  const std::string& prompt = request.messages.front().content;
  const std::string py = Fenced(prompt, "python");
  const std::string js = Fenced(prompt, "javascript");
  const bool corrected = request.messages.size() >= 3;
  std::vector<std::string> rows;
  for (const Hazard& h : Hazards()) {
    if (!Matches(h.py, py) || !Matches(h.js, js)) continue;
    std::string diff = h.difference;
    std::string js_behaviour = h.js_behaviour;
    if (h.insight == Insight::kNeedsKb && !(corrected && HasKbFact(request, h))) {
      diff = "none";
      js_behaviour = h.py_behaviour;
    }
    rows.push_back(h.subject + " | " + h.py_behaviour + " | " + js_behaviour + " | " + diff);
  }
  std::string lead = corrected ? "After checking the documentation, the differences are:\n\n"
                               : "Comparing the two snippets:\n\n";
  return lead + Answer(rows);
}

// Subjects the diff summary message marks as behaving differently.
std::set<std::string> EstablishedDifferences(const std::string& summary) {
  std::set<std::string> out;
  for (const Hazard& h : Hazards()) {
    const std::string head = "- " + h.subject + ": ";
    std::size_t at = summary.find(head);
    if (at == std::string::npos) continue;
    if (summary.compare(at + head.size(), 5, "none ") == 0) continue;
    out.insert(h.subject);
  }
  return out;
}

std::string AnswerLocate(const LlmRequest& request) {
  const std::size_t turn = (request.messages.size() + 1) / 2;  // 1-based user turn
  if (turn == 1) {
    return "I will compare the two programs statement by statement and keep track of every "
           "operator and API call whose behaviour could differ.";
  }
  if (turn == 2) {
    return "The established differences narrow the analysis to the statements that use "
           "those operators and methods.";
  }
  if (turn > 3) return Answer({});  // reformat request; never expected
  const std::string& first = request.messages[0].content;
  const std::vector<std::string> lines = Unnumber(Fenced(first, "javascript"));
  const std::set<std::string> established =
      EstablishedDifferences(request.messages[2].content);
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const Hazard& h : Hazards()) {
      if (established.count(h.subject) && Matches(h.js, lines[i])) {
        rows.push_back("L" + std::to_string(i + 1) + ": " + h.difference);
        break;
      }
    }
  }
  return (rows.empty() ? "The translation looks faithful.\n\n"
                       : "Yes, the translation contains errors.\n\n") +
         Answer(rows);
}

std::string AnswerFewShot(const LlmRequest& request) {
  const std::string& prompt = request.messages.front().content;
  // Skip the worked example; the pair under test follows "Now analyse".
  std::size_t at = prompt.find("Now analyse");
  const std::string tail = at == std::string::npos ? prompt : prompt.substr(at);
  const std::string py = Fenced(tail, "python");
  const std::vector<std::string> lines = Unnumber(Fenced(tail, "javascript"));
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const Hazard& h : Hazards()) {
      if (h.insight == Insight::kObvious && Matches(h.py, py) && Matches(h.js, lines[i])) {
        rows.push_back("L" + std::to_string(i + 1) + ": " + h.difference);
        break;
      }
    }
  }
  return Answer(rows);
}

}  // namespace

LineLabels ParseLabelFile(std::string_view text) {
  LineLabels labels;
  for (const std::string& raw : SplitLines(text)) {
    std::string row = Trim(raw);
    std::vector<int> items;
    if (row != "-") {
      std::stringstream in(row);
      std::string item;
      while (std::getline(in, item, ',')) items.push_back(std::stoi(item));
    }
    labels.push_back(std::move(items));
  }
  return labels;
}

void MockAnalyst::AddPair(MockPair pair) {
  if (static_cast<int>(pair.labels.size()) != pair.pair.TranslatedLineCount()) {
    throw Error(Errc::kInvalidArgument, "label file does not cover every translated line");
  }
  pairs_.push_back(std::move(pair));
}

std::string MockAnalyst::AnswerMap(const LlmRequest& request) const {
  const std::string& prompt = request.messages.front().content;
  const std::size_t task = prompt.find("### Task");
  const std::string dynamic = task == std::string::npos ? prompt : prompt.substr(task);
  const std::string py = Fenced(dynamic, "python");
  const std::string js = Fenced(dynamic, "javascript");
  const MockPair* match = nullptr;
  for (const MockPair& p : pairs_) {
    if (NormalizeWhitespace(p.pair.source_text) == NormalizeWhitespace(py) &&
        NormalizeWhitespace(p.pair.translated_text) == NormalizeWhitespace(js)) {
      match = &p;
    }
  }
  if (match == nullptr) return "I cannot annotate programs I do not recognise.";

  std::vector<std::string> src = SplitLines(match->pair.source_text);
  std::vector<std::string> tr = SplitLines(match->pair.translated_text);
  std::string src_out;
  for (std::size_t i = 0; i < src.size(); ++i) {
    src_out += src[i];
    if (!Trim(src[i]).empty()) src_out += "  # L" + std::to_string(i + 1);
    src_out += "\n";
  }
  const bool retry = prompt.find("### Correction") != std::string::npos;
  std::string tr_out;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (match->garble_first_map && !retry && i == 0) continue;  // drops a line
    tr_out += tr[i];
    const std::vector<int>& labels = match->labels[i];
    for (std::size_t k = 0; k < labels.size(); ++k) {
      tr_out += (k == 0 ? " // L" : ",L") + std::to_string(labels[k]);
    }
    tr_out += "\n";
  }
  return "Here are the annotated programs.\n\n```python\n" + src_out + "```\n\n```javascript\n" +
         tr_out + "```\n";
}

std::string MockAnalyst::Complete(const LlmRequest& request, const CallContext& context) {
  ValidateRequest(request);
  const std::string& step = context.step;
  const bool reformat = request.messages.size() > 1 &&
                        request.messages.back().content.find("did not end with a usable answer") !=
                            std::string::npos;
  if (reformat) return Answer({});
  if (step == "map") return AnswerMap(request);
  if (step == "detect") return AnswerDetect(request);
  if (step == "compare") return AnswerCompare(request);
  if (step == "locate") return AnswerLocate(request);
  if (step == "few_shot") return AnswerFewShot(request);
  return Answer({});
}

}  // namespace semloc::testing
