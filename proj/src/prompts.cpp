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

#include "semloc/prompts.hpp"

#include "semloc/error.hpp"
#include "semloc/text.hpp"

namespace semloc {
namespace internal {
// Defined in the build-generated templates_embedded.cpp.
std::string_view EmbeddedTemplate(std::string_view name);
}  // namespace internal

namespace {

std::string* Field(PromptTemplates& t, std::string_view name) {
  if (name == "map_demo") return &t.map_demo;
  if (name == "map") return &t.map;
  if (name == "map_retry") return &t.map_retry;
  if (name == "detect") return &t.detect;
  if (name == "compare") return &t.compare;
  if (name == "compare_correct") return &t.compare_correct;
  if (name == "locate_initial") return &t.locate_initial;
  if (name == "locate_diff") return &t.locate_diff;
  if (name == "locate_final") return &t.locate_final;
  if (name == "few_shot") return &t.few_shot;
  if (name == "reformat") return &t.reformat;
  if (name == "extract") return &t.extract;
  return nullptr;
}

}  // namespace

const std::vector<std::string_view>& TemplateNames() {
  static const std::vector<std::string_view> kNames = {
      "map_demo",       "map",         "map_retry",    "detect",
      "compare",        "compare_correct", "locate_initial", "locate_diff",
      "locate_final",   "few_shot",    "reformat",     "extract"};
  return kNames;
}

const PromptTemplates& DefaultTemplates() {
  static const PromptTemplates kDefaults = [] {
    PromptTemplates t;
    for (std::string_view name : TemplateNames()) {
      *Field(t, name) = std::string(internal::EmbeddedTemplate(name));
    }
    return t;
  }();
  return kDefaults;
}

PromptTemplates LoadTemplates(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::kIoFailure, "template directory " + dir.string() + " does not exist");
  }
  PromptTemplates t = DefaultTemplates();
  for (std::string_view name : TemplateNames()) {
    std::filesystem::path path = dir / (std::string(name) + ".txt");
    if (std::filesystem::is_regular_file(path)) *Field(t, name) = ReadFile(path);
  }
  return t;
}

std::string FillTemplate(
    std::string_view tmpl,
    const std::vector<std::pair<std::string_view, std::string_view>>& values) {
  for (const auto& [key, value] : values) {
    if (tmpl.find(key) == std::string_view::npos) {
      throw Error(Errc::kMissingPlaceholder,
                  "template lacks placeholder " + std::string(key));
    }
  }
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool replaced = false;
    if (tmpl[i] == '{') {
      for (const auto& [key, value] : values) {
        if (tmpl.compare(i, key.size(), key) == 0) {
          out += value;
          i += key.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += tmpl[i++];
  }
  return out;
}

}  // namespace semloc
