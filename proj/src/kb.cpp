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

#include "semloc/kb.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>

#include "json.hpp"
#include "semloc/error.hpp"
#include "semloc/text.hpp"

namespace semloc {
namespace {

using nlohmann::json;

// Built-in instance types tried by prototype expansion, in a fixed order.
constexpr std::array<std::string_view, 16> kBuiltinTypes = {
    "String", "Array",  "Map",     "Set",     "Object",  "Number",
    "RegExp", "Date",   "Promise", "BigInt",  "Boolean", "Function",
    "Symbol", "WeakMap", "WeakSet", "Error"};

// ---------------------------------------------------------------------------
// HTML subset reader

enum class BlockKind { kHeading, kParagraph, kCode };

struct Block {
  BlockKind kind;
  int level = 0;  // heading level
  std::string text;
};

std::string LowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string DecodeEntities(std::string_view s) {
  static const std::array<std::pair<std::string_view, std::string_view>, 7>
      kNamed = {{{"&lt;", "<"},
                 {"&gt;", ">"},
                 {"&amp;", "&"},
                 {"&quot;", "\""},
                 {"&#39;", "'"},
                 {"&apos;", "'"},
                 {"&nbsp;", " "}}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      bool matched = false;
      for (const auto& [name, value] : kNamed) {
        if (s.substr(i, name.size()) == name) {
          out += value;
          i += name.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out += s[i++];
  }
  return out;
}

class HtmlReader {
 public:
  explicit HtmlReader(std::string_view page) : page_(page) {}

  std::vector<Block> Read() {
    std::size_t i = 0;
    while (i < page_.size()) {
      if (page_[i] != '<') {
        std::size_t next = page_.find('<', i);
        if (next == std::string_view::npos) next = page_.size();
        Text(page_.substr(i, next - i));
        i = next;
        continue;
      }
      if (page_.substr(i, 4) == "<!--") {
        std::size_t end = page_.find("-->", i + 4);
        if (end == std::string_view::npos) Fail("unterminated comment");
        i = end + 3;
        continue;
      }
      std::size_t close = page_.find('>', i);
      if (close == std::string_view::npos) Fail("unterminated tag");
      Tag(page_.substr(i + 1, close - i - 1));
      i = close + 1;
    }
    if (open_ == Open::kHeading || open_ == Open::kPre) {
      Fail("unclosed <" + open_name_ + ">");
    }
    if (open_ == Open::kParagraph) Flush();
    return std::move(blocks_);
  }

 private:
  enum class Open { kNone, kHeading, kParagraph, kPre };

  [[noreturn]] void Fail(const std::string& what) {
    throw Error(Errc::kMalformedPage, "malformed page: " + what);
  }

  void Text(std::string_view raw) {
    if (open_ != Open::kNone) buffer_ += raw;
  }

  void Tag(std::string_view body) {
    if (body.empty()) Fail("empty tag");
    if (body.front() == '!' || body.front() == '?') return;  // doctype etc.
    bool closing = body.front() == '/';
    if (closing) body.remove_prefix(1);
    std::size_t name_end = 0;
    while (name_end < body.size() &&
           std::isalnum(static_cast<unsigned char>(body[name_end]))) {
      ++name_end;
    }
    if (name_end == 0) Fail("bad tag name");
    std::string name = LowerAscii(body.substr(0, name_end));

    bool heading = name.size() == 2 && name[0] == 'h' && name[1] >= '1' &&
                   name[1] <= '6';
    if (name == "br") {
      if (open_ != Open::kNone) buffer_ += open_ == Open::kPre ? "\n" : " ";
      return;
    }
    if (!heading && name != "p" && name != "pre") return;  // inline or layout

    if (closing) {
      if (open_ == Open::kNone || name != open_name_) {
        if (name == "p" && open_ == Open::kNone) return;  // stray </p>
        Fail("unexpected </" + name + ">");
      }
      Flush();
      return;
    }
    if (open_ == Open::kParagraph) {
      Flush();  // a new block implicitly ends an open paragraph
    } else if (open_ != Open::kNone) {
      Fail("<" + name + "> inside <" + open_name_ + ">");
    }
    open_name_ = name;
    if (heading) {
      open_ = Open::kHeading;
      level_ = name[1] - '0';
    } else if (name == "p") {
      open_ = Open::kParagraph;
    } else {
      open_ = Open::kPre;
    }
  }

  void Flush() {
    Block block;
    std::string text = DecodeEntities(buffer_);
    switch (open_) {
      case Open::kHeading:
        block.kind = BlockKind::kHeading;
        block.level = level_;
        block.text = NormalizeWhitespace(text);
        break;
      case Open::kParagraph:
        block.kind = BlockKind::kParagraph;
        block.text = NormalizeWhitespace(text);
        break;
      case Open::kPre: {
        block.kind = BlockKind::kCode;
        // Keep layout but drop the blank edges that <pre> markup leaves.
        std::size_t b = text.find_first_not_of("\r\n");
        std::size_t e = text.find_last_not_of(" \t\r\n");
        block.text = b == std::string::npos ? "" : text.substr(b, e - b + 1);
        break;
      }
      case Open::kNone:
        return;
    }
    if (!block.text.empty()) blocks_.push_back(std::move(block));
    buffer_.clear();
    open_ = Open::kNone;
    open_name_.clear();
  }

  std::string_view page_;
  std::vector<Block> blocks_;
  Open open_ = Open::kNone;
  std::string open_name_;
  int level_ = 0;
  std::string buffer_;
};

bool IsSectionTitle(const std::string& text) {
  static const std::set<std::string> kTitles = {
      "syntax",          "parameters",       "return value",
      "description",     "examples",         "exceptions",
      "specifications",  "browser compatibility", "see also",
      "notes",           "constructor",      "static methods",
      "static properties", "instance methods", "instance properties",
      "value",           "try it",           "polyfill"};
  return kTitles.count(LowerAscii(text)) > 0;
}

// Returns the fqn a heading names, or "" if it is not an API heading.
std::string ApiNameFromHeading(const std::string& heading) {
  static const std::regex kIdentChain(
      R"(^[A-Za-z_$][A-Za-z0-9_$]*(\.[A-Za-z_$][A-Za-z0-9_$]*)*$)");
  static const std::regex kOperator(R"(^operator\.\S+$)");
  std::string text = Trim(heading);
  if (text.size() > 2 && text.ends_with("()")) text.resize(text.size() - 2);
  if (IsSectionTitle(text)) return "";
  if (std::regex_match(text, kOperator)) return text;
  if (std::regex_match(text, kIdentChain)) return text;
  return "";
}

// Strips an argument list or "()" suffix and a trailing ';'.
std::string NormalizeKey(std::string_view name) {
  std::string key = Trim(name);
  while (!key.empty() && key.back() == ';') key.pop_back();
  if (!key.empty() && key.back() == ')') {
    std::size_t open = key.find('(');
    if (open != std::string::npos && open > 0) key.resize(open);
  }
  return Trim(key);
}

}  // namespace

// ---------------------------------------------------------------------------
// KnowledgeBase

void KnowledgeBase::Add(ApiRecord record) {
  if (record.fqn.empty()) {
    throw Error(Errc::kInvalidArgument, "API record with empty fqn");
  }
  if (record.description.empty()) {
    throw Error(Errc::kInvalidArgument,
                "API record " + record.fqn + " has no description");
  }
  if (records_.count(record.fqn) || aliases_.count(record.fqn)) {
    throw Error(Errc::kInvalidArgument, "duplicate fqn " + record.fqn);
  }
  std::string key = record.fqn;
  records_.emplace(std::move(key), std::move(record));
}

void KnowledgeBase::AddAlias(std::string alias, std::string target) {
  if (!records_.count(target)) {
    throw Error(Errc::kInvalidArgument,
                "alias " + alias + " targets unknown fqn " + target);
  }
  if (alias.empty() || records_.count(alias)) {
    throw Error(Errc::kInvalidArgument, "alias " + alias + " shadows a record");
  }
  aliases_[std::move(alias)] = std::move(target);
}

void KnowledgeBase::DeriveAliases() {
  std::map<std::string, std::set<std::string>> candidates;
  for (const auto& [fqn, record] : records_) {
    if (StartsWith(fqn, "operator.")) {
      candidates[fqn.substr(9)].insert(fqn);
      continue;
    }
    std::size_t proto = fqn.find(".prototype.");
    if (proto != std::string::npos) {
      candidates[fqn.substr(0, proto) + "." + fqn.substr(proto + 11)].insert(
          fqn);
      continue;
    }
    if (fqn.find('.') == std::string::npos &&
        std::isupper(static_cast<unsigned char>(fqn.front()))) {
      candidates["new " + fqn].insert(fqn);
    }
  }
  for (auto& [alias, targets] : candidates) {
    if (targets.size() != 1 || records_.count(alias)) continue;
    auto it = aliases_.find(alias);
    if (it != aliases_.end() && it->second != *targets.begin()) continue;
    aliases_[alias] = *targets.begin();
  }
}

const ApiRecord* KnowledgeBase::Direct(const std::string& key,
                                       LookupRoute* route) const {
  if (auto it = records_.find(key); it != records_.end()) {
    *route = LookupRoute::kExact;
    return &it->second;
  }
  if (auto it = aliases_.find(key); it != aliases_.end()) {
    *route = LookupRoute::kAlias;
    return &records_.at(it->second);
  }
  return nullptr;
}

LookupResult KnowledgeBase::Resolve(std::string_view name) const {
  std::string key = NormalizeKey(name);
  if (key.empty()) return {};
  LookupRoute route = LookupRoute::kNone;
  if (const ApiRecord* hit = Direct(key, &route)) return {hit, route};

  std::string method = key;
  if (std::size_t dot = key.rfind('.');
      dot != std::string::npos && !StartsWith(key, "operator.")) {
    method = key.substr(dot + 1);
    if (method.empty()) return {};
    if (const ApiRecord* hit = Direct(method, &route)) {
      return {hit, LookupRoute::kReceiverStripped};
    }
  }

  const ApiRecord* found = nullptr;
  for (std::string_view type : kBuiltinTypes) {
    std::string candidate = std::string(type) + ".prototype." + method;
    if (auto it = records_.find(candidate); it != records_.end()) {
      if (found != nullptr) return {};  // ambiguous
      found = &it->second;
    }
  }
  if (found) return {found, LookupRoute::kPrototypeExpansion};
  return {};
}

// ---------------------------------------------------------------------------
// Ingestion

std::vector<ApiRecord> IngestDoc(std::string_view page,
                                 std::string_view language,
                                 std::string_view source_url) {
  std::vector<Block> blocks = HtmlReader(page).Read();

  struct Entity {
    std::string fqn;
    std::string declaration;
    std::vector<std::string> paragraphs;
  };
  std::vector<Entity> entities;
  std::string section;  // "" = directly below the API heading

  for (const Block& block : blocks) {
    switch (block.kind) {
      case BlockKind::kHeading: {
        std::string fqn = ApiNameFromHeading(block.text);
        if (!fqn.empty()) {
          entities.push_back({fqn, {}, {}});
          section.clear();
        } else {
          section = LowerAscii(Trim(block.text));
        }
        break;
      }
      case BlockKind::kParagraph:
        if (!entities.empty() && (section.empty() || section == "description")) {
          entities.back().paragraphs.push_back(block.text);
        }
        break;
      case BlockKind::kCode:
        if (!entities.empty() && entities.back().declaration.empty() &&
            (section.empty() || section == "syntax")) {
          entities.back().declaration = block.text;
        }
        break;
    }
  }

  std::vector<ApiRecord> records;
  std::set<std::string> seen;
  for (Entity& entity : entities) {
    if (entity.declaration.empty() || entity.paragraphs.empty()) continue;
    if (!seen.insert(entity.fqn).second) continue;
    std::string description;
    for (const std::string& p : entity.paragraphs) {
      if (!description.empty()) description += ' ';
      description += p;
    }
    records.push_back({entity.fqn, entity.declaration, description,
                       std::string(language), std::string(source_url)});
  }
  if (records.empty()) {
    throw Error(Errc::kNoApiFound,
                "page contains no API declaration with a description");
  }
  return records;
}

IngestSummary IngestDirectory(const std::filesystem::path& dir,
                              std::string_view language) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(Errc::kIoFailure, "not a readable directory: " + dir.string());
  }
  std::vector<fs::path> pages;
  for (fs::recursive_directory_iterator it(dir, ec), end; it != end;
       it.increment(ec)) {
    if (ec) break;
    if (!it->is_regular_file()) continue;
    std::string ext = LowerAscii(it->path().extension().string());
    if (ext == ".html" || ext == ".htm") pages.push_back(it->path());
  }
  if (ec) {
    throw Error(Errc::kIoFailure,
                "cannot list " + dir.string() + ": " + ec.message());
  }
  std::sort(pages.begin(), pages.end());

  IngestSummary summary;
  for (const fs::path& page : pages) {
    ++summary.pages;
    try {
      std::string url = fs::relative(page, dir).generic_string();
      for (ApiRecord& record : IngestDoc(ReadFile(page), language, url)) {
        if (summary.kb.records().count(record.fqn)) continue;
        summary.kb.Add(std::move(record));
      }
    } catch (const Error& e) {
      summary.failures.push_back({page, e.what()});
    }
  }
  summary.kb.DeriveAliases();
  return summary;
}

// ---------------------------------------------------------------------------
// Persistence

std::string SerializeKb(const KnowledgeBase& kb) {
  std::string out = json{{"format_version", kKbFormatVersion}}.dump() + "\n";
  for (const auto& [fqn, r] : kb.records()) {
    json line = {{"fqn", r.fqn},
                 {"declaration", r.declaration},
                 {"description", r.description},
                 {"language", r.language},
                 {"source_url", r.source_url}};
    out += line.dump() + "\n";
  }
  for (const auto& [alias, target] : kb.aliases()) {
    out += json{{"alias", alias}, {"target", target}}.dump() + "\n";
  }
  return out;
}

void StoreKb(const KnowledgeBase& kb, const std::filesystem::path& path) {
  WriteFile(path, SerializeKb(kb));
}

KnowledgeBase ParseKb(std::string_view jsonl) {
  KnowledgeBase kb;
  std::vector<std::pair<std::string, std::string>> aliases;
  bool header_seen = false;
  int line_no = 0;
  for (const std::string& raw : SplitLines(jsonl)) {
    ++line_no;
    if (Trim(raw).empty()) continue;
    json line = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    auto malformed = [&](const std::string& why) {
      return Error(Errc::kIoFailure, "knowledge base line " +
                                         std::to_string(line_no) + ": " + why);
    };
    if (line.is_discarded() || !line.is_object()) throw malformed("not a JSON object");
    if (!header_seen) {
      if (!line.contains("format_version")) {
        throw Error(Errc::kFormatVersionMismatch,
                    "knowledge base has no format_version header");
      }
      const json& v = line["format_version"];
      if (!v.is_number_integer() || v.get<int>() != kKbFormatVersion) {
        throw Error(Errc::kFormatVersionMismatch,
                    "unsupported knowledge base format_version " + v.dump());
      }
      header_seen = true;
      continue;
    }
    auto str = [&](const char* key) {
      auto it = line.find(key);
      if (it == line.end() || !it->is_string()) {
        throw malformed(std::string("missing string field '") + key + "'");
      }
      return it->get<std::string>();
    };
    if (line.contains("alias")) {
      if (line.size() != 2) throw malformed("unexpected alias fields");
      aliases.emplace_back(str("alias"), str("target"));
      continue;
    }
    if (line.size() != 5) throw malformed("record must have exactly 5 fields");
    try {
      kb.Add({str("fqn"), str("declaration"), str("description"),
              str("language"), str("source_url")});
    } catch (const Error& e) {
      throw malformed(e.what());
    }
  }
  if (!header_seen) {
    throw Error(Errc::kFormatVersionMismatch,
                "knowledge base has no format_version header");
  }
  for (auto& [alias, target] : aliases) {
    try {
      kb.AddAlias(std::move(alias), std::move(target));
    } catch (const Error& e) {
      throw Error(Errc::kIoFailure, std::string("knowledge base: ") + e.what());
    }
  }
  return kb;
}

KnowledgeBase LoadKb(const std::filesystem::path& path) {
  return ParseKb(ReadFile(path));
}

}  // namespace semloc
