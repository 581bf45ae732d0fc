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

#ifndef SEMLOC_KB_HPP_
#define SEMLOC_KB_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace semloc {

// One documented API of the target language.
struct ApiRecord {
  std::string fqn;          // retrieval key, e.g. "String.prototype.replace"
  std::string declaration;  // signature text from the syntax block
  std::string description;  // functional behaviour prose
  std::string language;
  std::string source_url;   // empty for hand-authored records

  friend bool operator==(const ApiRecord&, const ApiRecord&) = default;
};

// Which step of the lookup cascade produced a hit.
enum class LookupRoute {
  kNone,
  kExact,
  kAlias,
  kReceiverStripped,
  kPrototypeExpansion,
};

struct LookupResult {
  const ApiRecord* record = nullptr;
  LookupRoute route = LookupRoute::kNone;

  explicit operator bool() const { return record != nullptr; }
};

// Target-language API knowledge base. Immutable once built or loaded, so
// concurrent readers need no locking.
class KnowledgeBase {
 public:
  // Throws InvalidArgument on an empty fqn/description or a duplicate fqn.
  void Add(ApiRecord record);

  // Throws InvalidArgument if `target` is not a record or `alias` shadows one.
  void AddAlias(std::string alias, std::string target);

  // Registers the ingest-time normalization aliases for every record:
  // "T.prototype.m" gets "T.m", a constructor "T" gets "new T", and an
  // operator record "operator.<op>" gets the bare operator "<op>".
  // Aliases that would collide with a record or another alias are skipped.
  void DeriveAliases();

  // Cascade: exact fqn, alias table, receiver-stripped name, then
  // "<Type>.prototype.<method>" over the built-in instance types. Argument
  // lists and a trailing "()" are ignored. An ambiguous prototype expansion
  // resolves to nothing.
  LookupResult Resolve(std::string_view name) const;

  const ApiRecord* Lookup(std::string_view name) const {
    return Resolve(name).record;
  }

  const std::map<std::string, ApiRecord>& records() const { return records_; }
  const std::map<std::string, std::string>& aliases() const {
    return aliases_;
  }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;

 private:
  const ApiRecord* Direct(const std::string& key, LookupRoute* route) const;

  std::map<std::string, ApiRecord> records_;
  std::map<std::string, std::string> aliases_;
};

// Extracts API records from one documentation page in the supported HTML
// subset (h1-h6, p, pre/code). A heading whose text is an API name opens an
// entity; its description is taken from the paragraphs directly below it and
// under a "Description" heading, its declaration from the first code block
// directly below it or under "Syntax". Every other section (parameters,
// examples, compatibility, ...) is dropped.
//
// Throws MalformedPage or NoApiFound.
std::vector<ApiRecord> IngestDoc(std::string_view page,
                                 std::string_view language,
                                 std::string_view source_url = {});

struct IngestFailure {
  std::filesystem::path page;
  std::string message;
};

struct IngestSummary {
  KnowledgeBase kb;
  std::size_t pages = 0;
  std::vector<IngestFailure> failures;
};

// Ingests every *.html / *.htm file below `dir` (recursively, in path
// order). Per-page failures are collected, not thrown; duplicate fqns keep
// the first occurrence. Aliases are derived at the end.
IngestSummary IngestDirectory(const std::filesystem::path& dir,
                              std::string_view language);

inline constexpr int kKbFormatVersion = 1;

// JSON Lines: a {"format_version": N} header, one object per record, then
// one {"alias", "target"} object per alias. Output is sorted and stable.
void StoreKb(const KnowledgeBase& kb, const std::filesystem::path& path);
std::string SerializeKb(const KnowledgeBase& kb);

KnowledgeBase LoadKb(const std::filesystem::path& path);
KnowledgeBase ParseKb(std::string_view jsonl);

}  // namespace semloc

#endif  // SEMLOC_KB_HPP_
