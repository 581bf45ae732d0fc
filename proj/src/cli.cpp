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

#include "semloc/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "semloc/bench.hpp"
#include "semloc/error.hpp"
#include "semloc/kb.hpp"
#include "semloc/pipeline.hpp"
#include "semloc/text.hpp"

#ifndef SEMLOC_DEFAULT_KB
#define SEMLOC_DEFAULT_KB ""
#endif

namespace semloc {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string model;
  double temperature = -1.0;
  std::string threshold;
  std::string mode;
  std::string kb;
  std::string templates;
  std::string replay_dir;
  bool no_ast = false;
  bool no_chain = false;
  bool no_kb = false;
  int jobs = 1;
  std::string out;
  std::string request_log;
  int map_retries = 2;
  bool aux_extraction = false;
  bool keep_going = false;
  bool full_coverage = false;
  bool strict = false;
  bool audit = false;
  std::string map_file;
  std::string source;
  std::string translated;
  std::string doc_dir;
  std::string bench_root;
};

std::vector<int> ParseThresholds(const std::string& text) {
  std::vector<int> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw Error(Errc::kInvalidConfig, "bad threshold '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw Error(Errc::kInvalidConfig, "empty --threshold");
  return values;
}

RunConfig BuildConfig(const Flags& f) {
  RunConfig c = DefaultRunConfig();
  if (!f.model.empty()) c.model.model_id = f.model;
  if (f.temperature >= 0.0) c.model.temperature = f.temperature;
  if (!f.threshold.empty()) c.thresholds = ParseThresholds(f.threshold);
  if (!f.mode.empty()) c.mode = ModeFromName(f.mode);
  c.kb_path = f.kb.empty() ? fs::path(SEMLOC_DEFAULT_KB) : fs::path(f.kb);
  c.templates_dir = f.templates;
  c.replay_dir = f.replay_dir;
  c.no_ast = f.no_ast;
  c.no_chain = f.no_chain;
  c.no_kb = f.no_kb;
  c.jobs = f.jobs;
  c.map_retries = f.map_retries;
  c.aux_extraction = f.aux_extraction;
  c.keep_going = f.keep_going;
  c.full_coverage = f.full_coverage;
  ValidateRunConfig(c);
  return c;
}

void Emit(const Flags& f, std::ostream& out, const std::string& text) {
  if (f.out.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    WriteFile(f.out, text.back() == '\n' ? text : text + "\n");
  }
}

CodePair ReadPair(const Flags& f) {
  CodePair pair;
  pair.source_text = ReadFile(f.source);
  pair.translated_text = ReadFile(f.translated);
  return pair;
}

int SingleThreshold(const RunConfig& c) {
  if (c.thresholds.size() != 1) {
    throw Error(Errc::kInvalidConfig, "a threshold sweep is only supported by eval");
  }
  return c.thresholds.front();
}

void SaveRequestLog(const Flags& f, const LlmBackend& backend) {
  if (!f.request_log.empty() && backend.log != nullptr) {
    WriteFile(f.request_log, backend.log->ToJsonLines());
  }
}

int CmdKbBuild(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.out.empty()) throw Error(Errc::kInvalidConfig, "kb build needs --out");
  IngestSummary summary = IngestDirectory(f.doc_dir, "javascript");
  for (const IngestFailure& failure : summary.failures) {
    err << "skipped " << failure.page.string() << ": " << failure.message << "\n";
  }
  if (summary.kb.records().empty()) {
    throw Error(Errc::kNoApiFound, "no API records found under " + f.doc_dir);
  }
  StoreKb(summary.kb, f.out);
  out << "pages: " << summary.pages << "\nrecords: " << summary.kb.records().size()
      << "\naliases: " << summary.kb.aliases().size() << "\n";
  return kExitOk;
}

int CmdMap(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig c = BuildConfig(f);
  err << "effective config: " << RunConfigToJson(c) << "\n";
  CodePair pair = ReadPair(f);
  LlmBackend backend = MakeBackend(c);
  PromptTemplates templates = MakeTemplates(c);
  MapOptions options;
  options.model = c.model;
  options.max_retries = c.map_retries;
  options.templates = &templates;
  MapResult result;
  try {
    result = GenerateSourceMap(pair, *backend.client, options);
  } catch (...) {
    SaveRequestLog(f, backend);
    throw;
  }
  SaveRequestLog(f, backend);
  err << "retries: " << result.retry_count << "\n";
  Emit(f, out, f.audit ? AuditExport(result.map, pair) : SourceMapToJson(result.map));
  return kExitOk;
}

int CmdDecompose(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig c = BuildConfig(f);
  err << "effective config: " << RunConfigToJson(c) << "\n";
  const int threshold = SingleThreshold(c);
  CodePair pair = ReadPair(f);
  ValidatePair(pair);
  AstNode ast = ParseSourceAst(pair.source_text, pair.source_language);
  std::vector<SubcodePair> subs;
  if (c.no_ast) {
    subs.push_back(WholeProgramFragment(pair));
  } else if (!f.map_file.empty()) {
    SourceMap map = SourceMapFromJson(ReadFile(f.map_file));
    subs = Decompose(pair, map, threshold, ast);
  } else {
    LlmBackend backend = MakeBackend(c);
    PromptTemplates templates = MakeTemplates(c);
    MapOptions options;
    options.model = c.model;
    options.max_retries = c.map_retries;
    options.templates = &templates;
    MapResult result = GenerateSourceMap(pair, *backend.client, options);
    SaveRequestLog(f, backend);
    subs = Decompose(pair, result.map, threshold, ast);
  }
  Emit(f, out, SubcodesToJson(subs));
  return kExitOk;
}

int CmdLocate(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig c = BuildConfig(f);
  err << "effective config: " << RunConfigToJson(c) << "\n";
  const int threshold = SingleThreshold(c);
  CodePair pair = ReadPair(f);
  LlmBackend backend = MakeBackend(c);
  std::unique_ptr<KnowledgeBase> kb = MakeKnowledgeBase(c);
  PromptTemplates templates = MakeTemplates(c);
  LocateOutcome outcome;
  try {
    outcome = LocatePair(pair, c, threshold, *backend.client, kb.get(), templates);
  } catch (...) {
    SaveRequestLog(f, backend);
    throw;
  }
  SaveRequestLog(f, backend);
  for (const std::string& d : outcome.report.diagnostics) err << "diagnostic: " << d << "\n";
  Emit(f, out, ReportToJson(outcome.report));
  return kExitOk;
}

int CmdEval(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig c = BuildConfig(f);
  err << "effective config: " << RunConfigToJson(c) << "\n";
  LoadOptions load_options;
  load_options.strict = f.strict;
  LoadResult bench = LoadBenchmark(f.bench_root, load_options);
  for (const std::string& p : bench.problems) err << "benchmark: " << p << "\n";
  LlmBackend backend = MakeBackend(c);
  std::unique_ptr<KnowledgeBase> kb = MakeKnowledgeBase(c);
  PromptTemplates templates = MakeTemplates(c);
  std::vector<EvalRow> rows;
  try {
    rows = RunEval(bench.samples, c, *backend.client, kb.get(), templates);
  } catch (...) {
    SaveRequestLog(f, backend);
    throw;
  }
  SaveRequestLog(f, backend);

  nlohmann::json doc;
  doc["config"] = nlohmann::json::parse(RunConfigToJson(c));
  doc["rows"] = nlohmann::json::array();
  std::vector<std::pair<std::string, EvalReport>> table;
  for (const EvalRow& row : rows) {
    doc["rows"].push_back({{"threshold", row.threshold},
                           {"report", nlohmann::json::parse(EvalReportToJson(row.report))},
                           {"failures", row.failures}});
    for (const std::string& failure : row.failures) err << "failed: " << failure << "\n";
    std::string label = "threshold " + std::to_string(row.threshold);
    if (c.no_ast) label += " no-ast";
    if (c.no_chain) label += " no-chain";
    if (c.no_kb) label += " no-kb";
    table.emplace_back(label, row.report);
  }
  Emit(f, out, doc.dump(2));
  err << RenderTable(table);
  return kExitOk;
}

int ExitCodeFor(Errc code) {
  switch (code) {
    case Errc::kInvalidConfig: return kExitUsage;
    case Errc::kReplayMiss: return kExitReplayMiss;
    default: return kExitPipeline;
  }
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Localize semantic mistakes in Python to JavaScript translations", "semloc"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--model", f.model, "Model id (default: SEMLOC_MODEL or gpt-4o-mini)");
  app.add_option("--temperature", f.temperature, "Sampling temperature (default 0.2)");
  app.add_option("--threshold", f.threshold,
                 "Decomposition threshold; eval also accepts a list such as 1,2,3");
  app.add_option("--mode", f.mode, "live, replay or record (default live)");
  app.add_option("--kb", f.kb, "Knowledge base JSONL file");
  app.add_option("--templates", f.templates, "Directory overriding prompt templates");
  app.add_option("--replay-dir", f.replay_dir, "Replay store directory");
  app.add_flag("--no-ast", f.no_ast, "Skip mapping and decomposition");
  app.add_flag("--no-chain", f.no_chain, "Replace the chain with one few-shot prompt");
  app.add_flag("--no-kb", f.no_kb, "Do not consult the knowledge base");
  app.add_option("--jobs", f.jobs, "Worker count for eval and fragments");
  app.add_option("--out", f.out, "Write the result to this file");
  app.add_option("--request-log", f.request_log, "Write every LLM request as JSON Lines");
  app.add_option("--map-retries", f.map_retries, "Source map regeneration attempts");
  app.add_flag("--aux-extraction", f.aux_extraction,
               "Ask the model to extract lines when a locate reply is malformed");

  CLI::App* kb = app.add_subcommand("kb", "Knowledge base commands");
  kb->require_subcommand(1);
  CLI::App* kb_build = kb->add_subcommand("build", "Ingest documentation pages into a KB");
  kb_build->add_option("doc_dir", f.doc_dir, "Directory of HTML pages")->required();

  auto add_pair = [&](CLI::App* cmd) {
    cmd->add_option("source", f.source, "Python source file")->required();
    cmd->add_option("translated", f.translated, "JavaScript translation")->required();
  };
  CLI::App* map = app.add_subcommand("map", "Generate the source map of a pair");
  add_pair(map);
  map->add_flag("--audit", f.audit, "Print annotated programs instead of JSON");
  CLI::App* decompose = app.add_subcommand("decompose", "Split a pair into subcode pairs");
  add_pair(decompose);
  decompose->add_option("--map", f.map_file, "Use this source map JSON instead of the LLM");
  CLI::App* locate = app.add_subcommand("locate", "Report suspicious translated lines");
  add_pair(locate);
  CLI::App* eval = app.add_subcommand("eval", "Score the locator on a benchmark");
  eval->add_option("bench_root", f.bench_root, "Benchmark directory")->required();
  eval->add_flag("--keep-going", f.keep_going, "Record failed samples as all-miss");
  eval->add_flag("--full-coverage", f.full_coverage,
                 "Count a mistake only when all of its lines are reported");
  eval->add_flag("--strict", f.strict, "Abort on malformed samples instead of skipping");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (kb_build->parsed()) return CmdKbBuild(f, out, err);
    if (map->parsed()) return CmdMap(f, out, err);
    if (decompose->parsed()) return CmdDecompose(f, out, err);
    if (locate->parsed()) return CmdLocate(f, out, err);
    if (eval->parsed()) return CmdEval(f, out, err);
  } catch (const ReplayMiss& e) {
    err << "replay miss: " << e.what() << " (expected "
        << (fs::path(f.replay_dir) / (e.digest() + ".json")).string() << ")\n";
    return kExitReplayMiss;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace semloc
