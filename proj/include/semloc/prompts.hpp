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

#ifndef SEMLOC_PROMPTS_HPP_
#define SEMLOC_PROMPTS_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semloc {

// Placeholder tokens recognised in templates.
inline constexpr std::string_view kPythonCode = "{python code}";
inline constexpr std::string_view kJavaScriptCode = "{JavaScript code}";
inline constexpr std::string_view kSourceFragment = "{source_fragment}";
inline constexpr std::string_view kTranslatedFragment = "{translated_fragment}";
inline constexpr std::string_view kSimilarApis = "{similar APIs and operators}";
inline constexpr std::string_view kKbFacts = "{kb_facts}";
inline constexpr std::string_view kDiffSummary = "{diff_summary}";
inline constexpr std::string_view kErrorText = "{error}";
inline constexpr std::string_view kAnalysis = "{analysis}";

struct PromptTemplates {
  std::string map_demo;
  std::string map;
  std::string map_retry;
  std::string detect;
  std::string compare;
  std::string compare_correct;
  std::string locate_initial;
  std::string locate_diff;
  std::string locate_final;
  std::string few_shot;
  std::string reformat;
  std::string extract;
};

// The templates compiled into the library (copies of templates/*.txt).
const PromptTemplates& DefaultTemplates();

// File stem for each field, in declaration order ("map_demo", "map", ...).
const std::vector<std::string_view>& TemplateNames();

// Starts from the defaults and replaces every template for which
// `<dir>/<name>.txt` exists. Throws IoFailure if `dir` is not a directory.
PromptTemplates LoadTemplates(const std::filesystem::path& dir);

// Substitutes every occurrence of each key in one left-to-right pass, so
// substituted text is never rescanned. Throws MissingPlaceholder when a key
// does not occur in the template.
std::string FillTemplate(
    std::string_view tmpl,
    const std::vector<std::pair<std::string_view, std::string_view>>& values);

}  // namespace semloc

#endif  // SEMLOC_PROMPTS_HPP_
