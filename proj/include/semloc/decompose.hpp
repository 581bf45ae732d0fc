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

#ifndef SEMLOC_DECOMPOSE_HPP_
#define SEMLOC_DECOMPOSE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "semloc/pyast.hpp"
#include "semloc/srcmap.hpp"

namespace semloc {

inline constexpr int kDefaultThreshold = 1;

struct SubcodePair {
  int id = 0;
  NodeKind kind = NodeKind::kOther;
  Span source_span;
  // The lines this fragment owns. Equal to the span for whole subtrees; a
  // header owns its span minus the lines owned by its descendants.
  std::vector<LineNo> source_lines;
  std::string source_text;
  std::vector<LineNo> translated_lines;
  std::string translated_text;
  int depth_at_emit = 0;
  std::optional<int> parent_id;
  bool header = false;

  bool unmapped() const { return translated_lines.empty(); }
  friend bool operator==(const SubcodePair&, const SubcodePair&) = default;
};

// Depth-first split of `ast` at predefined node kinds. A node whose nesting
// depth is at most `threshold` becomes one fragment; a deeper node is split
// into its descendants plus a header fragment holding its remaining lines.
// Calls in a split compound statement's own header (a loop's iterable, a
// decorator) stay in that header when they are shallow enough.
//
// Throws InvalidArgument if threshold < 1, DigestMismatch if `map` was
// built for a different pair.
std::vector<SubcodePair> Decompose(const CodePair& pair, const SourceMap& map,
                                   int threshold, const AstNode& ast);

// One fragment spanning both whole programs; used when decomposition is
// disabled. Needs no source map.
SubcodePair WholeProgramFragment(const CodePair& pair);

std::string SubcodesToJson(const std::vector<SubcodePair>& subs);

}  // namespace semloc

#endif  // SEMLOC_DECOMPOSE_HPP_
