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

#include "semloc/error.hpp"
#include "semloc/text.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <fstream>
#include <sstream>

namespace semloc {

std::string_view ErrcName(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kInvalidConfig: return "InvalidConfig";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kMalformedPage: return "MalformedPage";
    case Errc::kNoApiFound: return "NoApiFound";
    case Errc::kFormatVersionMismatch: return "FormatVersionMismatch";
    case Errc::kMissingPlaceholder: return "MissingPlaceholder";
    case Errc::kMismatchedEcho: return "MismatchedEcho";
    case Errc::kBadLabel: return "BadLabel";
    case Errc::kDuplicateSourceLabel: return "DuplicateSourceLabel";
    case Errc::kMapGenerationFailed: return "MapGenerationFailed";
    case Errc::kSyntaxError: return "SyntaxError";
    case Errc::kLlmBackendUnavailable: return "LlmBackendUnavailable";
    case Errc::kReplayMiss: return "ReplayMiss";
    case Errc::kRateLimited: return "RateLimited";
    case Errc::kEmptyBenchmark: return "EmptyBenchmark";
    case Errc::kSampleValidation: return "SampleValidation";
    case Errc::kDigestMismatch: return "DigestMismatch";
  }
  return "Unknown";
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

std::string JoinSelectedLines(const std::vector<std::string>& lines,
                              std::span<const LineNo> numbers) {
  std::string out;
  bool first = true;
  for (LineNo n : numbers) {
    if (n < 1 || static_cast<std::size_t>(n) > lines.size()) continue;
    if (!first) out += '\n';
    out += lines[n - 1];
    first = false;
  }
  return out;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string NormalizeWhitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(Errc::kInvalidArgument, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::kIoFailure, "cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(Errc::kIoFailure, "cannot write " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw Error(Errc::kIoFailure, "write failed for " + path.string());
  }
}

}  // namespace semloc
