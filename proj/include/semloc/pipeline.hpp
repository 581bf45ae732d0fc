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

#ifndef SEMLOC_PIPELINE_HPP_
#define SEMLOC_PIPELINE_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semloc/bench.hpp"
#include "semloc/chain.hpp"
#include "semloc/decompose.hpp"
#include "semloc/kb.hpp"
#include "semloc/llm.hpp"
#include "semloc/prompts.hpp"
#include "semloc/srcmap.hpp"

namespace semloc {

enum class Mode { kLive, kReplay, kRecord };

std::string_view ModeName(Mode mode);
Mode ModeFromName(std::string_view name);  // throws InvalidConfig

struct RunConfig {
  std::vector<int> thresholds{kDefaultThreshold};  // several only for eval sweeps
  ModelConfig model;
  Mode mode = Mode::kLive;
  bool no_ast = false;
  bool no_chain = false;
  bool no_kb = false;
  std::filesystem::path kb_path;
  std::filesystem::path templates_dir;
  std::filesystem::path replay_dir;
  int jobs = 1;
  int map_retries = 2;
  bool aux_extraction = false;
  bool keep_going = false;
  bool full_coverage = false;
};

// Library defaults with SEMLOC_MODEL / SEMLOC_TEMPERATURE applied.
RunConfig DefaultRunConfig();

// Throws InvalidConfig on the first bad field.
void ValidateRunConfig(const RunConfig& config);

// Every field, for attributing results to a configuration.
std::string RunConfigToJson(const RunConfig& config);

struct LlmBackend {
  std::unique_ptr<LlmClient> upstream;  // live client behind a recorder
  std::unique_ptr<LlmClient> client;
  const RequestLog* log = nullptr;
};

// Live: HTTP client. Replay: client over the loaded store. Record: HTTP
// client wrapped so every exchange lands in replay_dir.
LlmBackend MakeBackend(const RunConfig& config);

// Loads the knowledge base unless it is disabled. Null when no_kb is set.
std::unique_ptr<KnowledgeBase> MakeKnowledgeBase(const RunConfig& config);

PromptTemplates MakeTemplates(const RunConfig& config);

struct LocateOutcome {
  LocatorReport report;
  std::optional<SourceMap> map;  // absent with no_ast
  int map_retry_count = 0;
  std::vector<SubcodePair> subs;
};

// map -> decompose -> chain for one pair at one threshold.
LocateOutcome LocatePair(const CodePair& pair, const RunConfig& config, int threshold,
                         LlmClient& llm, const KnowledgeBase* kb,
                         const PromptTemplates& templates);

struct EvalRow {
  int threshold = kDefaultThreshold;
  EvalReport report;
  std::vector<std::string> failures;  // "<origin>/<id>: <error>" per failed sample
};

// Locates and scores every sample once per threshold. Samples run on
// config.jobs workers; the source map of a sample is generated once and
// shared across thresholds. Errors abort unless keep_going is set.
std::vector<EvalRow> RunEval(const std::vector<BenchSample>& samples,
                             const RunConfig& config, LlmClient& llm,
                             const KnowledgeBase* kb, const PromptTemplates& templates);

}  // namespace semloc

#endif  // SEMLOC_PIPELINE_HPP_
