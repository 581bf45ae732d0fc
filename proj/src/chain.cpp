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

#include "semloc/chain.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "json.hpp"
#include "semloc/error.hpp"
#include "semloc/parallel.hpp"

namespace semloc {
namespace {

using nlohmann::json;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string StripBullet(std::string line) {
  line = Trim(line);
  if (StartsWith(line, "- ") || StartsWith(line, "* ")) line = Trim(line.substr(2));
  return line;
}

bool IsNone(const std::vector<std::string>& body) {
  return body.size() == 1 && Lower(StripBullet(body.front())) == "none";
}

void PushUnique(std::vector<std::string>& list, std::string item) {
  if (item.empty()) return;
  if (std::find(list.begin(), list.end(), item) == list.end()) list.push_back(std::move(item));
}

// A multi-turn exchange with the model. Every Ask is one request.
class Conversation {
 public:
  Conversation(const StepEnv& env, std::string step, int subcode_id, StepLog& log)
      : env_(env), step_(std::move(step)), subcode_id_(subcode_id), log_(log) {
    request_.model_id = env.model.model_id;
    request_.temperature = env.model.temperature;
  }

  std::string Ask(std::string content) {
    request_.messages.push_back({Role::kUser, std::move(content)});
    std::string reply = env_.llm->Complete(request_, {step_, subcode_id_});
    ++log_.llm_requests;
    request_.messages.push_back({Role::kAssistant, reply});
    return reply;
  }

 private:
  const StepEnv& env_;
  std::string step_;
  int subcode_id_;
  StepLog& log_;
  LlmRequest request_;
};

const PromptTemplates& TemplatesOf(const StepEnv& env) {
  return env.templates ? *env.templates : DefaultTemplates();
}

std::string FragmentLabel(const SubcodePair& sub) {
  return "fragment " + std::to_string(sub.id);
}

// Last '.'-separated component of each whitespace/slash separated token.
std::vector<std::string> SubjectKeys(std::string_view subject) {
  std::vector<std::string> keys;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t dot = token.rfind('.');
    std::string key = dot == std::string::npos || dot + 1 == token.size()
                          ? token
                          : token.substr(dot + 1);
    PushUnique(keys, key);
    token.clear();
  };
  for (char c : subject) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '/' || c == ',' ||
        c == '(' || c == ')') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  // Bare words like "vs" carry no signal.
  keys.erase(std::remove_if(keys.begin(), keys.end(),
                            [](const std::string& k) { return k == "vs" || k == "and"; }),
             keys.end());
  return keys;
}

std::vector<Finding> ToFindings(const SubcodePair& sub,
                                const std::vector<std::pair<int, std::string>>& items,
                                const DiffSummary* diff, StepLog& log) {
  std::vector<Finding> findings;
  const std::vector<std::string> fragment_lines = SplitLines(sub.translated_text);
  const int m = static_cast<int>(sub.translated_lines.size());
  for (const auto& [k, rationale] : items) {
    int index = k;
    if (index < 1 || index > m) {
      index = std::clamp(index, 1, m);
      log.diagnostics.push_back(FragmentLabel(sub) + ": cited line L" + std::to_string(k) +
                                " lies outside the fragment; clamped to L" +
                                std::to_string(index));
    }
    Finding f;
    f.translated_line = sub.translated_lines[static_cast<std::size_t>(index - 1)];
    f.rationale = rationale;
    f.subcode_id = sub.id;
    if (diff != nullptr) {
      std::size_t at = static_cast<std::size_t>(index - 1);
      const std::string text = at < fragment_lines.size() ? fragment_lines[at] : "";
      for (const DiffEntry& e : diff->entries) {
        if (Lower(Trim(e.difference)) == "none") continue;
        for (const std::string& key : SubjectKeys(e.subject)) {
          if (text.find(key) != std::string::npos) {
            PushUnique(f.related_subjects, e.subject);
            break;
          }
        }
      }
    }
    findings.push_back(std::move(f));
  }
  return findings;
}

std::string SimilarApisText(const FqnList& fqns) {
  std::string out;
  for (const std::string& s : fqns.source_items) out += "python: " + s + "\n";
  for (const std::string& t : fqns.target_items) out += "javascript: " + t + "\n";
  return out;
}

std::string KbFactsText(const std::vector<LinkedFact>& facts) {
  std::string out;
  for (const LinkedFact& f : facts) {
    if (!f.description) continue;
    out += "- " + *f.resolved;
    if (!f.declaration.empty()) out += " (" + f.declaration + ")";
    out += ": " + *f.description + "\n";
  }
  return out;
}

std::string DiffSummaryText(const DiffSummary& diff) {
  if (diff.entries.empty()) return "No differences were established.\n";
  std::string out;
  for (const DiffEntry& e : diff.entries) {
    out += "- " + e.subject + ": " + e.difference + " (Python: " + e.source_behavior +
           "; JavaScript: " + e.target_behavior + ")\n";
  }
  return out;
}

std::optional<std::vector<std::pair<int, std::string>>> LocateWithFallback(
    Conversation& conversation, std::string reply, const SubcodePair& sub,
    const StepEnv& env, StepLog& log) {
  auto parsed = ParseLocateAnswer(reply);
  if (parsed) return parsed;
  reply = conversation.Ask(TemplatesOf(env).reformat);
  parsed = ParseLocateAnswer(reply);
  if (parsed) return parsed;
  if (env.aux_extraction) {
    Conversation extractor(env, "extract", sub.id, log);
    parsed = ParseLocateAnswer(
        extractor.Ask(FillTemplate(TemplatesOf(env).extract, {{kAnalysis, reply}})));
    if (parsed) return parsed;
  }
  log.diagnostics.push_back(FragmentLabel(sub) + ": locate output unparseable; no findings");
  return std::nullopt;
}

json ConfigEchoToJson(const ConfigEcho& c) {
  return {{"threshold", c.threshold},
          {"temperature", c.temperature},
          {"model", c.model_id},
          {"mode", c.mode},
          {"ai_chain", c.ai_chain ? "enabled" : "disabled"},
          {"ast", c.ast ? "enabled" : "disabled"},
          {"kb", c.kb ? "enabled" : "disabled"},
          {"fragment_count", c.fragment_count}};
}

}  // namespace

// --- parsers ----------------------------------------------------------------

std::optional<std::vector<std::string>> AnswerBlock(std::string_view reply) {
  std::vector<std::string> lines = SplitLines(reply);
  std::optional<std::vector<std::string>> block;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string fence = Trim(lines[i]);
    if (!StartsWith(fence, "```") || Lower(Trim(fence.substr(3))) != "answer") continue;
    std::vector<std::string> body;
    std::size_t j = i + 1;
    for (; j < lines.size() && !StartsWith(Trim(lines[j]), "```"); ++j) {
      std::string line = Trim(lines[j]);
      if (!line.empty()) body.push_back(std::move(line));
    }
    block = std::move(body);
    i = j;
  }
  return block;
}

std::optional<FqnList> ParseDetectAnswer(std::string_view reply) {
  auto body = AnswerBlock(reply);
  if (!body || body->empty()) return std::nullopt;
  FqnList list;
  if (IsNone(*body)) return list;
  bool any = false;
  for (const std::string& raw : *body) {
    std::string line = StripBullet(raw);
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string side = Lower(Trim(line.substr(0, colon)));
    std::string item = Trim(line.substr(colon + 1));
    if (side == "python" || side == "py") {
      PushUnique(list.source_items, item);
      any = true;
    } else if (side == "javascript" || side == "js") {
      PushUnique(list.target_items, item);
      any = true;
    }
  }
  if (!any) return std::nullopt;
  return list;
}

std::optional<std::vector<DiffEntry>> ParseCompareAnswer(std::string_view reply) {
  auto body = AnswerBlock(reply);
  if (!body || body->empty()) return std::nullopt;
  std::vector<DiffEntry> entries;
  if (IsNone(*body)) return entries;
  for (const std::string& raw : *body) {
    std::string line = StripBullet(raw);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t bar = line.find('|', start);
      fields.push_back(Trim(line.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    if (fields.size() != 4 || fields[0].empty()) continue;
    if (Lower(fields[0]) == "subject") continue;  // echoed header row
    entries.push_back({fields[0], fields[1], fields[2], fields[3], false});
  }
  if (entries.empty()) return std::nullopt;
  return entries;
}

std::optional<std::vector<std::pair<int, std::string>>> ParseLocateAnswer(
    std::string_view reply) {
  auto body = AnswerBlock(reply);
  if (!body || body->empty()) return std::nullopt;
  std::vector<std::pair<int, std::string>> items;
  if (IsNone(*body)) return items;
  for (const std::string& raw : *body) {
    std::string line = StripBullet(raw);
    if (line.size() < 2 || (line[0] != 'L' && line[0] != 'l') ||
        !std::isdigit(static_cast<unsigned char>(line[1]))) {
      continue;
    }
    std::size_t i = 1;
    long k = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
      k = std::min(k * 10 + (line[i] - '0'), 1L << 30);
      ++i;
    }
    std::string rest = Trim(line.substr(i));
    if (!rest.empty() && (rest[0] == ':' || rest[0] == '-')) rest = Trim(rest.substr(1));
    items.emplace_back(static_cast<int>(k), rest);
  }
  if (items.empty()) return std::nullopt;
  return items;
}

std::string NumberLines(std::string_view text) {
  std::string out;
  int k = 0;
  for (const std::string& line : SplitLines(text)) {
    out += std::to_string(++k) + ": " + line + "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

// --- steps ------------------------------------------------------------------

FqnList DetectApis(const SubcodePair& sub, const StepEnv& env, StepLog& log) {
  const PromptTemplates& t = TemplatesOf(env);
  Conversation conversation(env, "detect", sub.id, log);
  std::string reply = conversation.Ask(FillTemplate(
      t.detect, {{kSourceFragment, sub.source_text}, {kTranslatedFragment, sub.translated_text}}));
  auto parsed = ParseDetectAnswer(reply);
  if (!parsed) parsed = ParseDetectAnswer(conversation.Ask(t.reformat));
  if (!parsed) {
    log.diagnostics.push_back(FragmentLabel(sub) +
                              ": detect output unparseable; continuing without API names");
    return {};
  }
  return *parsed;
}

std::vector<LinkedFact> LinkKnowledge(const FqnList& fqns, const KnowledgeBase* kb,
                                      StepLog* log) {
  std::vector<LinkedFact> facts;
  for (const std::string& item : fqns.target_items) {
    LinkedFact fact;
    fact.fqn = item;
    if (kb != nullptr) {
      const ApiRecord* record = kb->Lookup(item);
      if (log != nullptr) {
        ++log->kb_lookups;
        if (record != nullptr) ++log->kb_hits;
      }
      if (record != nullptr) {
        fact.resolved = record->fqn;
        fact.description = record->description;
        fact.declaration = record->declaration;
      }
    }
    facts.push_back(std::move(fact));
  }
  return facts;
}

DiffSummary CompareStep(const SubcodePair& sub, const FqnList& fqns,
                        const std::vector<LinkedFact>& facts, const StepEnv& env,
                        StepLog& log) {
  DiffSummary summary;
  if (fqns.empty()) return summary;
  const PromptTemplates& t = TemplatesOf(env);
  Conversation conversation(env, "compare", sub.id, log);
  std::string reply = conversation.Ask(FillTemplate(
      t.compare, {{kSourceFragment, sub.source_text},
                  {kTranslatedFragment, sub.translated_text},
                  {kSimilarApis, SimilarApisText(fqns)}}));
  std::string kb_text = KbFactsText(facts);
  bool corrected = !kb_text.empty();
  if (corrected) reply = conversation.Ask(FillTemplate(t.compare_correct, {{kKbFacts, kb_text}}));
  auto entries = ParseCompareAnswer(reply);
  if (!entries) {
    log.diagnostics.push_back(FragmentLabel(sub) + ": compare output unparseable; no differences");
    return summary;
  }
  summary.entries = std::move(*entries);
  if (corrected) {
    for (DiffEntry& e : summary.entries) {
      for (const LinkedFact& f : facts) {
        if (!f.description) continue;
        for (const std::string& key : SubjectKeys(*f.resolved + " " + f.fqn)) {
          if (e.subject.find(key) != std::string::npos) e.kb_backed = true;
        }
      }
    }
  }
  return summary;
}

std::vector<Finding> LocateStep(const SubcodePair& sub, const DiffSummary& diff,
                                const StepEnv& env, StepLog& log) {
  if (sub.translated_lines.empty()) return {};
  const PromptTemplates& t = TemplatesOf(env);
  Conversation conversation(env, "locate", sub.id, log);
  conversation.Ask(FillTemplate(t.locate_initial, {{kSourceFragment, sub.source_text},
                                                   {kTranslatedFragment, NumberLines(sub.translated_text)}}));
  conversation.Ask(FillTemplate(t.locate_diff, {{kDiffSummary, DiffSummaryText(diff)}}));
  std::string reply = conversation.Ask(t.locate_final);
  auto items = LocateWithFallback(conversation, reply, sub, env, log);
  if (!items) return {};
  return ToFindings(sub, *items, &diff, log);
}

std::vector<Finding> FewShotStep(const SubcodePair& sub, const StepEnv& env, StepLog& log) {
  if (sub.translated_lines.empty()) return {};
  Conversation conversation(env, "few_shot", sub.id, log);
  std::string reply = conversation.Ask(FillTemplate(
      TemplatesOf(env).few_shot, {{kSourceFragment, sub.source_text},
                                  {kTranslatedFragment, NumberLines(sub.translated_text)}}));
  auto items = ParseLocateAnswer(reply);
  if (!items) {
    log.diagnostics.push_back(FragmentLabel(sub) + ": few-shot output unparseable; no findings");
    return {};
  }
  return ToFindings(sub, *items, nullptr, log);
}

LocatorReport RunChain(const CodePair& pair, const std::vector<SubcodePair>& subs,
                       const KnowledgeBase* kb, LlmClient& llm, const ChainConfig& config,
                       const PromptTemplates* templates) {
  if (subs.empty()) {
    throw Error(Errc::kInvalidArgument, "the chain needs at least one fragment");
  }
  StepEnv env;
  env.llm = &llm;
  env.model = config.model;
  env.templates = templates;
  env.aux_extraction = config.aux_extraction;
  const KnowledgeBase* linked_kb = config.no_kb ? nullptr : kb;

  struct Outcome {
    StepLog log;
    std::vector<Finding> findings;
  };
  std::vector<Outcome> outcomes(subs.size());
  ParallelFor(subs.size(), config.fragment_jobs, [&](std::size_t i) {
    const SubcodePair& sub = subs[i];
    Outcome& out = outcomes[i];
    if (sub.translated_lines.empty()) {
      out.log.diagnostics.push_back(FragmentLabel(sub) +
                                    ": no translated lines map to this fragment; skipped");
      return;
    }
    if (config.no_chain) {
      out.findings = FewShotStep(sub, env, out.log);
      return;
    }
    FqnList fqns = DetectApis(sub, env, out.log);
    std::vector<LinkedFact> facts = LinkKnowledge(fqns, linked_kb, &out.log);
    DiffSummary diff = CompareStep(sub, fqns, facts, env, out.log);
    out.findings = LocateStep(sub, diff, env, out.log);
  });

  LocatorReport report;
  report.pair_digest = pair.Digest();
  const int n_tr = pair.TranslatedLineCount();
  std::set<LineNo> lines;
  for (Outcome& out : outcomes) {
    report.stats.llm_requests += out.log.llm_requests;
    report.stats.kb_lookups += out.log.kb_lookups;
    report.stats.kb_hits += out.log.kb_hits;
    for (std::string& d : out.log.diagnostics) report.diagnostics.push_back(std::move(d));
    for (Finding& f : out.findings) {
      if (f.translated_line < 1 || f.translated_line > n_tr) continue;
      lines.insert(f.translated_line);
      report.findings.push_back(std::move(f));
    }
  }
  std::stable_sort(report.findings.begin(), report.findings.end(),
                   [](const Finding& a, const Finding& b) {
                     return a.translated_line < b.translated_line;
                   });
  report.suspicious_lines.assign(lines.begin(), lines.end());
  report.l_sus = static_cast<int>(report.suspicious_lines.size());
  report.config_echo.threshold = config.threshold;
  report.config_echo.temperature = config.model.temperature;
  report.config_echo.model_id = config.model.model_id;
  report.config_echo.mode = config.mode;
  report.config_echo.ai_chain = !config.no_chain;
  report.config_echo.ast = !config.no_ast;
  report.config_echo.kb = !config.no_kb;
  report.config_echo.fragment_count = static_cast<int>(subs.size());
  return report;
}

// --- serialization ----------------------------------------------------------

std::string ReportToJson(const LocatorReport& report) {
  json findings = json::array();
  for (const Finding& f : report.findings) {
    findings.push_back({{"translated_line", f.translated_line},
                        {"rationale", f.rationale},
                        {"subcode_id", f.subcode_id},
                        {"related_subjects", f.related_subjects}});
  }
  json j = {{"pair_digest", report.pair_digest},
            {"suspicious_lines", report.suspicious_lines},
            {"l_sus", report.l_sus},
            {"findings", std::move(findings)},
            {"diagnostics", report.diagnostics},
            {"config_echo", ConfigEchoToJson(report.config_echo)},
            {"stats",
             {{"llm_requests", report.stats.llm_requests},
              {"kb_lookups", report.stats.kb_lookups},
              {"kb_hits", report.stats.kb_hits}}}};
  return j.dump(2);
}

LocatorReport ReportFromJson(std::string_view text) {
  try {
    json j = json::parse(text);
    LocatorReport r;
    r.pair_digest = j.at("pair_digest").get<std::string>();
    r.suspicious_lines = j.at("suspicious_lines").get<std::vector<LineNo>>();
    r.l_sus = j.at("l_sus").get<int>();
    for (const json& f : j.value("findings", json::array())) {
      r.findings.push_back({f.at("translated_line").get<LineNo>(),
                            f.value("rationale", std::string()), f.value("subcode_id", 0),
                            f.value("related_subjects", std::vector<std::string>())});
    }
    r.diagnostics = j.value("diagnostics", std::vector<std::string>());
    if (j.contains("config_echo")) {
      const json& c = j["config_echo"];
      r.config_echo.threshold = c.value("threshold", kDefaultThreshold);
      r.config_echo.temperature = c.value("temperature", kDefaultTemperature);
      r.config_echo.model_id = c.value("model", std::string(kDefaultModel));
      r.config_echo.mode = c.value("mode", std::string("replay"));
      r.config_echo.ai_chain = c.value("ai_chain", std::string("enabled")) == "enabled";
      r.config_echo.ast = c.value("ast", std::string("enabled")) == "enabled";
      r.config_echo.kb = c.value("kb", std::string("enabled")) == "enabled";
      r.config_echo.fragment_count = c.value("fragment_count", 0);
    }
    if (j.contains("stats")) {
      const json& s = j["stats"];
      r.stats = {s.value("llm_requests", 0), s.value("kb_lookups", 0), s.value("kb_hits", 0)};
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("malformed locator report: ") + e.what());
  }
}

}  // namespace semloc
