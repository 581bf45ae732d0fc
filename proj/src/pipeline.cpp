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

#include "semloc/pipeline.hpp"

#include "json.hpp"
#include "semloc/error.hpp"
#include "semloc/parallel.hpp"
#include "semloc/pyast.hpp"

namespace semloc {
namespace {

ChainConfig ToChainConfig(const RunConfig& config, int threshold) {
  ChainConfig c;
  c.model = config.model;
  c.threshold = threshold;
  c.mode = std::string(ModeName(config.mode));
  c.no_ast = config.no_ast;
  c.no_chain = config.no_chain;
  c.no_kb = config.no_kb;
  c.aux_extraction = config.aux_extraction;
  return c;
}

struct Prepared {
  std::optional<SourceMap> map;
  int retry_count = 0;
  AstNode ast;
};

Prepared Prepare(const CodePair& pair, const RunConfig& config, LlmClient& llm,
                 const PromptTemplates& templates) {
  ValidatePair(pair);
  Prepared p;
  p.ast = ParseSourceAst(pair.source_text, pair.source_language);
  if (!config.no_ast) {
    MapOptions options;
    options.model = config.model;
    options.max_retries = config.map_retries;
    options.templates = &templates;
    MapResult result = GenerateSourceMap(pair, llm, options);
    p.map = std::move(result.map);
    p.retry_count = result.retry_count;
  }
  return p;
}

LocateOutcome Finish(const CodePair& pair, const Prepared& prepared, const RunConfig& config,
                     int threshold, LlmClient& llm, const KnowledgeBase* kb,
                     const PromptTemplates& templates) {
  LocateOutcome out;
  out.map = prepared.map;
  out.map_retry_count = prepared.retry_count;
  if (config.no_ast) {
    out.subs.push_back(WholeProgramFragment(pair));
  } else {
    out.subs = Decompose(pair, *prepared.map, threshold, prepared.ast);
  }
  out.report = RunChain(pair, out.subs, kb, llm, ToChainConfig(config, threshold), &templates);
  return out;
}

}  // namespace

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kLive: return "live";
    case Mode::kReplay: return "replay";
    case Mode::kRecord: return "record";
  }
  return "live";
}

Mode ModeFromName(std::string_view name) {
  if (name == "live") return Mode::kLive;
  if (name == "replay") return Mode::kReplay;
  if (name == "record") return Mode::kRecord;
  throw Error(Errc::kInvalidConfig,
              "mode must be live, replay or record, not '" + std::string(name) + "'");
}

RunConfig DefaultRunConfig() {
  RunConfig config;
  config.model = DefaultConfig();
  return config;
}

void ValidateRunConfig(const RunConfig& config) {
  if (config.thresholds.empty()) throw Error(Errc::kInvalidConfig, "no threshold given");
  for (int t : config.thresholds) {
    if (t < 1) {
      throw Error(Errc::kInvalidConfig, "threshold must be at least 1, got " + std::to_string(t));
    }
  }
  ValidateTemperature(config.model.temperature);
  if (config.model.model_id.empty()) throw Error(Errc::kInvalidConfig, "model id is empty");
  if (config.jobs < 1) throw Error(Errc::kInvalidConfig, "--jobs must be at least 1");
  if (config.map_retries < 0) throw Error(Errc::kInvalidConfig, "map retries must be >= 0");
  if (config.mode != Mode::kLive && config.replay_dir.empty()) {
    throw Error(Errc::kInvalidConfig,
                std::string(ModeName(config.mode)) + " mode needs a replay directory");
  }
  if (!config.no_kb && config.kb_path.empty()) {
    throw Error(Errc::kInvalidConfig, "no knowledge base path (pass --kb or --no-kb)");
  }
}

std::string RunConfigToJson(const RunConfig& config) {
  nlohmann::json j = {{"thresholds", config.thresholds},
                      {"model", config.model.model_id},
                      {"temperature", config.model.temperature},
                      {"mode", ModeName(config.mode)},
                      {"no_ast", config.no_ast},
                      {"no_chain", config.no_chain},
                      {"no_kb", config.no_kb},
                      {"kb", config.kb_path.string()},
                      {"templates", config.templates_dir.string()},
                      {"replay_dir", config.replay_dir.string()},
                      {"jobs", config.jobs},
                      {"map_retries", config.map_retries},
                      {"aux_extraction", config.aux_extraction},
                      {"keep_going", config.keep_going},
                      {"full_coverage", config.full_coverage}};
  return j.dump();
}

LlmBackend MakeBackend(const RunConfig& config) {
  LlmBackend backend;
  switch (config.mode) {
    case Mode::kReplay: {
      auto client = std::make_unique<ReplayClient>(ReplayStore::Load(config.replay_dir));
      backend.log = &client->log();
      backend.client = std::move(client);
      break;
    }
    case Mode::kLive: {
      auto client = std::make_unique<HttpChatClient>(HttpConfigFromEnv());
      backend.log = &client->log();
      backend.client = std::move(client);
      break;
    }
    case Mode::kRecord: {
      backend.upstream = std::make_unique<HttpChatClient>(HttpConfigFromEnv());
      auto client = std::make_unique<RecordingClient>(*backend.upstream, config.replay_dir);
      backend.log = &client->log();
      backend.client = std::move(client);
      break;
    }
  }
  return backend;
}

std::unique_ptr<KnowledgeBase> MakeKnowledgeBase(const RunConfig& config) {
  if (config.no_kb) return nullptr;
  return std::make_unique<KnowledgeBase>(LoadKb(config.kb_path));
}

PromptTemplates MakeTemplates(const RunConfig& config) {
  if (config.templates_dir.empty()) return DefaultTemplates();
  return LoadTemplates(config.templates_dir);
}

LocateOutcome LocatePair(const CodePair& pair, const RunConfig& config, int threshold,
                         LlmClient& llm, const KnowledgeBase* kb,
                         const PromptTemplates& templates) {
  Prepared prepared = Prepare(pair, config, llm, templates);
  return Finish(pair, prepared, config, threshold, llm, kb, templates);
}

std::vector<EvalRow> RunEval(const std::vector<BenchSample>& samples, const RunConfig& config,
                             LlmClient& llm, const KnowledgeBase* kb,
                             const PromptTemplates& templates) {
  if (samples.empty()) throw Error(Errc::kEmptyBenchmark, "no samples to evaluate");
  const std::size_t n_thresholds = config.thresholds.size();
  // scores[t][s]
  std::vector<std::vector<SampleScore>> scores(n_thresholds,
                                               std::vector<SampleScore>(samples.size()));
  std::vector<std::vector<std::string>> failures(n_thresholds,
                                                 std::vector<std::string>(samples.size()));
  ScoreOptions score_options;
  score_options.full_coverage = config.full_coverage;

  ParallelFor(samples.size(), config.jobs, [&](std::size_t s) {
    const BenchSample& sample = samples[s];
    CodePair pair = sample.Pair();
    auto fail_all_from = [&](std::size_t first, const std::exception& e) {
      if (!config.keep_going) throw;
      for (std::size_t t = first; t < n_thresholds; ++t) {
        scores[t][s] = FailedSample(sample);
        failures[t][s] = sample.origin + "/" + sample.id + ": " + e.what();
      }
    };
    std::optional<Prepared> prepared;
    try {
      prepared = Prepare(pair, config, llm, templates);
    } catch (const Error& e) {
      fail_all_from(0, e);
      return;
    }
    for (std::size_t t = 0; t < n_thresholds; ++t) {
      try {
        LocateOutcome outcome =
            Finish(pair, *prepared, config, config.thresholds[t], llm, kb, templates);
        scores[t][s] = ScoreSample(outcome.report, sample, score_options);
      } catch (const Error& e) {
        fail_all_from(t, e);
        return;
      }
    }
  });

  std::vector<EvalRow> rows;
  for (std::size_t t = 0; t < n_thresholds; ++t) {
    EvalRow row;
    row.threshold = config.thresholds[t];
    row.report = Aggregate(scores[t]);
    for (std::string& f : failures[t]) {
      if (!f.empty()) row.failures.push_back(std::move(f));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace semloc
