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

#include "semloc/decompose.hpp"

#include <algorithm>

#include "json.hpp"
#include "semloc/error.hpp"

namespace semloc {
namespace {

bool IsCompound(const AstNode& node) {
  return std::any_of(node.children.begin(), node.children.end(),
                     [](const AstNode& c) { return c.kind != NodeKind::kCall; });
}

bool HasPredefined(const AstNode& node) {
  if (IsPredefined(node.kind)) return true;
  return std::any_of(node.children.begin(), node.children.end(), HasPredefined);
}

class Splitter {
 public:
  Splitter(const CodePair& pair, const SourceMap& map, int threshold)
      : pair_(pair),
        map_(map),
        threshold_(threshold),
        claimed_(static_cast<std::size_t>(pair.SourceLineCount()) + 2, false) {}

  void Visit(const AstNode& node, std::optional<int> parent) {
    if (!IsPredefined(node.kind)) {
      for (const AstNode& child : node.children) Visit(child, parent);
      return;
    }
    int depth = NestingDepth(node);
    if (depth <= threshold_) {
      Emit(node, Claim(node.span), depth, parent, false);
      return;
    }
    // Reserve the header's slot so it precedes its descendants.
    int slot = static_cast<int>(slots_.size());
    slots_.emplace_back();
    int header_depth = 0;
    bool compound = IsCompound(node);
    for (const AstNode& child : node.children) {
      if (compound && child.kind == NodeKind::kCall &&
          1 + NestingDepth(child) <= threshold_) {
        header_depth = std::max(header_depth, 1 + NestingDepth(child));
        continue;
      }
      Visit(child, slot);
    }
    Fill(slot, node, Claim(node.span), header_depth, parent, true);
  }

  std::vector<SubcodePair> Finish() {
    // Drop empty slots; re-point children of dropped headers upward.
    std::vector<int> new_id(slots_.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (slots_[i].live) new_id[i] = next++;
    }
    auto resolve = [&](std::optional<int> p) -> std::optional<int> {
      while (p && !slots_[static_cast<std::size_t>(*p)].live) {
        p = slots_[static_cast<std::size_t>(*p)].parent;
      }
      if (!p) return std::nullopt;
      return new_id[static_cast<std::size_t>(*p)];
    };
    std::vector<SubcodePair> out;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
      if (!slots_[i].live) continue;
      SubcodePair sub = std::move(slots_[i].sub);
      sub.id = new_id[i];
      sub.parent_id = resolve(slots_[i].parent);
      out.push_back(std::move(sub));
    }
    return out;
  }

 private:
  struct Slot {
    bool live = false;
    std::optional<int> parent;  // slot index
    SubcodePair sub;
  };

  std::vector<LineNo> Claim(const Span& span) {
    std::vector<LineNo> lines;
    for (LineNo l = span.start_line; l <= span.end_line; ++l) {
      if (l >= 1 && l < static_cast<LineNo>(claimed_.size()) && !claimed_[l]) {
        claimed_[l] = true;
        lines.push_back(l);
      }
    }
    return lines;
  }

  void Emit(const AstNode& node, std::vector<LineNo> lines, int depth,
            std::optional<int> parent, bool header) {
    int slot = static_cast<int>(slots_.size());
    slots_.emplace_back();
    Fill(slot, node, std::move(lines), depth, parent, header);
  }

  void Fill(int slot, const AstNode& node, std::vector<LineNo> lines, int depth,
            std::optional<int> parent, bool header) {
    Slot& s = slots_[static_cast<std::size_t>(slot)];
    s.parent = parent;
    if (lines.empty()) return;  // every line already owned by someone else
    s.live = true;
    s.sub.kind = node.kind;
    s.sub.source_span = node.span;
    s.sub.source_text = JoinSelectedLines(source_lines_, lines);
    s.sub.translated_lines = LinesForSource(map_, lines);
    s.sub.translated_text = JoinSelectedLines(translated_lines_, s.sub.translated_lines);
    s.sub.source_lines = std::move(lines);
    s.sub.depth_at_emit = depth;
    s.sub.header = header;
  }

  const CodePair& pair_;
  const SourceMap& map_;
  const int threshold_;
  const std::vector<std::string> source_lines_ = SplitLines(pair_.source_text);
  const std::vector<std::string> translated_lines_ = SplitLines(pair_.translated_text);
  std::vector<bool> claimed_;
  std::vector<Slot> slots_;
};

std::vector<LineNo> AllLines(int count) {
  std::vector<LineNo> lines(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) lines[static_cast<std::size_t>(i)] = i + 1;
  return lines;
}

}  // namespace

std::vector<SubcodePair> Decompose(const CodePair& pair, const SourceMap& map,
                                   int threshold, const AstNode& ast) {
  if (threshold < 1) {
    throw Error(Errc::kInvalidArgument,
                "decomposition threshold must be at least 1, got " + std::to_string(threshold));
  }
  if (map.pair_digest != pair.Digest()) {
    throw Error(Errc::kDigestMismatch, "source map was built for a different code pair");
  }
  if (!HasPredefined(ast)) {
    // Nothing to split at: the whole program is one fragment.
    SubcodePair whole;
    whole.kind = NodeKind::kOther;
    whole.source_lines = AllLines(pair.SourceLineCount());
    whole.source_span = {1, std::max(1, pair.SourceLineCount())};
    whole.source_text = pair.source_text;
    whole.translated_lines = LinesForSource(map, whole.source_lines);
    whole.translated_text =
        JoinSelectedLines(SplitLines(pair.translated_text), whole.translated_lines);
    return {whole};
  }
  Splitter splitter(pair, map, threshold);
  splitter.Visit(ast, std::nullopt);
  return splitter.Finish();
}

SubcodePair WholeProgramFragment(const CodePair& pair) {
  SubcodePair whole;
  whole.kind = NodeKind::kOther;
  whole.source_lines = AllLines(pair.SourceLineCount());
  whole.source_span = {1, std::max(1, pair.SourceLineCount())};
  whole.source_text = pair.source_text;
  whole.translated_lines = AllLines(pair.TranslatedLineCount());
  whole.translated_text = pair.translated_text;
  return whole;
}

std::string SubcodesToJson(const std::vector<SubcodePair>& subs) {
  nlohmann::json out = nlohmann::json::array();
  for (const SubcodePair& s : subs) {
    out.push_back({
        {"id", s.id},
        {"kind", NodeKindName(s.kind)},
        {"source_span", {s.source_span.start_line, s.source_span.end_line}},
        {"source_lines", s.source_lines},
        {"translated_lines", s.translated_lines},
        {"source_text", s.source_text},
        {"translated_text", s.translated_text},
        {"depth_at_emit", s.depth_at_emit},
        {"parent_id", s.parent_id ? nlohmann::json(*s.parent_id) : nlohmann::json(nullptr)},
        {"header", s.header},
        {"unmapped", s.unmapped()},
    });
  }
  return out.dump(2);
}

}  // namespace semloc
