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

#ifndef SEMLOC_CHAIN_HPP_
#define SEMLOC_CHAIN_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semloc/decompose.hpp"
#include "semloc/kb.hpp"
#include "semloc/llm.hpp"
#include "semloc/prompts.hpp"
#include "semloc/srcmap.hpp"

namespace semloc {

struct FqnList {
  std::vector<std::string> source_items;
  std::vector<std::string> target_items;

  bool empty() const { return source_items.empty() && target_items.empty(); }
  friend bool operator==(const FqnList&, const FqnList&) = default;
};

struct LinkedFact {
  std::string fqn;                         // as named by the model
  std::optional<std::string> resolved;     // knowledge-base key, if found
  std::optional<std::string> description;  // absent when not found
  std::string declaration;
};

struct DiffEntry {
  std::string subject;
  std::string source_behavior;
  std::string target_behavior;
  std::string difference;
  bool kb_backed = false;

  friend bool operator==(const DiffEntry&, const DiffEntry&) = default;
};

struct DiffSummary {
  std::vector<DiffEntry> entries;
};

struct Finding {
  LineNo translated_line = 0;  // whole-file coordinates
  std::string rationale;
  int subcode_id = 0;
  std::vector<std::string> related_subjects;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ConfigEcho {
  int threshold = kDefaultThreshold;
  double temperature = kDefaultTemperature;
  std::string model_id{kDefaultModel};
  std::string mode = "replay";
  bool ai_chain = true;
  bool ast = true;
  bool kb = true;
  int fragment_count = 0;

  friend bool operator==(const ConfigEcho&, const ConfigEcho&) = default;
};

struct ChainStats {
  int llm_requests = 0;
  int kb_lookups = 0;
  int kb_hits = 0;

  friend bool operator==(const ChainStats&, const ChainStats&) = default;
};

struct LocatorReport {
  std::string pair_digest;
  std::vector<Finding> findings;
  std::vector<LineNo> suspicious_lines;
  int l_sus = 0;
  std::vector<std::string> diagnostics;
  ConfigEcho config_echo;
  ChainStats stats;
};

std::string ReportToJson(const LocatorReport& report);
LocatorReport ReportFromJson(std::string_view json);  // throws InvalidArgument

// Everything a step needs to talk to the model.
struct StepEnv {
  LlmClient* llm = nullptr;
  ModelConfig model;
  const PromptTemplates* templates = nullptr;  // defaults when null
  bool aux_extraction = false;  // extra extraction request when locate output is unusable
};

// Per-fragment bookkeeping shared by the steps.
struct StepLog {
  int llm_requests = 0;
  int kb_lookups = 0;
  int kb_hits = 0;
  std::vector<std::string> diagnostics;
};

// --- answer-block parsers (nullopt = unusable) ------------------------------

// Body lines of the last ```answer block, or nullopt if there is none.
std::optional<std::vector<std::string>> AnswerBlock(std::string_view reply);
std::optional<FqnList> ParseDetectAnswer(std::string_view reply);
std::optional<std::vector<DiffEntry>> ParseCompareAnswer(std::string_view reply);
// (fragment-relative line, rationale) pairs.
std::optional<std::vector<std::pair<int, std::string>>> ParseLocateAnswer(
    std::string_view reply);

// "k: text" per line, k counting from 1.
std::string NumberLines(std::string_view text);

// --- steps --------------------------------------------------------------------

// One request plus at most one reformat follow-up. Degrades to an empty list.
FqnList DetectApis(const SubcodePair& sub, const StepEnv& env, StepLog& log);

// Looks up target items only. A null `kb` yields all-absent facts and no
// lookups.
std::vector<LinkedFact> LinkKnowledge(const FqnList& fqns, const KnowledgeBase* kb,
                                      StepLog* log = nullptr);

// Zero turns for an empty list; the correction turn only runs when at
// least one fact is present.
DiffSummary CompareStep(const SubcodePair& sub, const FqnList& fqns,
                        const std::vector<LinkedFact>& facts, const StepEnv& env,
                        StepLog& log);

// Three turns in one conversation, plus one reformat turn if needed.
std::vector<Finding> LocateStep(const SubcodePair& sub, const DiffSummary& diff,
                                const StepEnv& env, StepLog& log);

// Single few-shot request replacing the whole chain.
std::vector<Finding> FewShotStep(const SubcodePair& sub, const StepEnv& env,
                                 StepLog& log);

struct ChainConfig {
  ModelConfig model;
  int threshold = kDefaultThreshold;
  std::string mode = "replay";
  bool no_ast = false;
  bool no_chain = false;
  bool no_kb = false;
  bool aux_extraction = false;
  int fragment_jobs = 1;
};

// Runs detect, link, compare and locate per fragment and merges the
// findings. Parse problems become diagnostics; backend failures propagate.
LocatorReport RunChain(const CodePair& pair, const std::vector<SubcodePair>& subs,
                       const KnowledgeBase* kb, LlmClient& llm,
                       const ChainConfig& config,
                       const PromptTemplates* templates = nullptr);

}  // namespace semloc

#endif  // SEMLOC_CHAIN_HPP_
