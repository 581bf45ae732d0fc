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

#ifndef SEMLOC_SRCMAP_HPP_
#define SEMLOC_SRCMAP_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semloc/llm.hpp"
#include "semloc/prompts.hpp"
#include "semloc/text.hpp"

namespace semloc {

struct CodePair {
  std::string source_text;
  std::string translated_text;
  std::string source_language = "python";
  std::string target_language = "javascript";

  int SourceLineCount() const;
  int TranslatedLineCount() const;
  // SHA-256 over the four fields, each length-prefixed.
  std::string Digest() const;
};

// Throws InvalidArgument if either text is empty.
void ValidatePair(const CodePair& pair);

struct AtomicFragment {
  std::vector<LineNo> source_lines;
  std::vector<LineNo> translated_lines;

  friend bool operator==(const AtomicFragment&, const AtomicFragment&) = default;
};

struct SourceMap {
  std::vector<AtomicFragment> fragments;
  std::string pair_digest;

  friend bool operator==(const SourceMap&, const SourceMap&) = default;
};

// Checks ordering, disjointness on each side, bounds and the digest.
// Throws InvalidArgument describing the first violation.
void ValidateSourceMap(const SourceMap& map, const CodePair& pair);

std::string SourceMapToJson(const SourceMap& map);
SourceMap SourceMapFromJson(std::string_view json);  // throws InvalidArgument

// Sorted union of translated lines over fragments whose source lines
// intersect `source_lines`.
std::vector<LineNo> LinesForSource(const SourceMap& map,
                                   std::span<const LineNo> source_lines);

struct AnnotatedPair {
  std::string source;
  std::string translated;
};

// Inverse of ParseAnnotations for canonical maps: fragments with no
// translated lines hold a single source line.
AnnotatedPair RenderAnnotations(const SourceMap& map, const CodePair& pair);

// Reads "# L<k>" labels off source lines and "// L<a>,L<b>" labels off
// translated lines. Translated lines whose label sets share a source line
// end up in one fragment.
SourceMap ParseAnnotations(std::string_view annotated_source,
                           std::string_view annotated_translated,
                           const CodePair& pair);

// Pulls the ```python and ```javascript blocks out of a model reply.
// Throws MismatchedEcho if either is missing.
AnnotatedPair ExtractAnnotatedBlocks(std::string_view reply);

std::string BuildMapPrompt(const CodePair& pair, std::string_view demos,
                           std::string_view dynamic_template);

struct MapOptions {
  ModelConfig model;
  int max_retries = 2;
  const PromptTemplates* templates = nullptr;  // defaults when null
};

struct MapResult {
  SourceMap map;
  int retry_count = 0;
};

// Throws MapGenerationFailed when every attempt produced an unusable reply.
MapResult GenerateSourceMap(const CodePair& pair, LlmClient& llm,
                            const MapOptions& options);

// Human-readable side-by-side listing of each fragment for manual review.
std::string AuditExport(const SourceMap& map, const CodePair& pair);

}  // namespace semloc

#endif  // SEMLOC_SRCMAP_HPP_
