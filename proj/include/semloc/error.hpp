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

#ifndef SEMLOC_ERROR_HPP_
#define SEMLOC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace semloc {

// Every failure the library reports is one of these. Recoverable
// degradations (unparseable chain output and the like) are not errors;
// they are recorded as diagnostics on the report instead.
enum class Errc {
  kInvalidArgument,
  kInvalidConfig,
  kIoFailure,
  // kb
  kMalformedPage,
  kNoApiFound,
  kFormatVersionMismatch,
  // srcmap
  kMissingPlaceholder,
  kMismatchedEcho,
  kBadLabel,
  kDuplicateSourceLabel,
  kMapGenerationFailed,
  // decompose
  kSyntaxError,
  // llm
  kLlmBackendUnavailable,
  kReplayMiss,
  kRateLimited,
  // bench
  kEmptyBenchmark,
  kSampleValidation,
  kDigestMismatch,
};

std::string_view ErrcName(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error(Errc::kSyntaxError,
              "line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Raised when source-map generation has exhausted its retries. Carries the
// last parse failure and the raw model output so a fixture author can see
// what went wrong.
class MapGenerationFailed : public Error {
 public:
  MapGenerationFailed(std::string last_error, std::string raw_output)
      : Error(Errc::kMapGenerationFailed,
              "source map generation failed: " + last_error),
        last_error_(std::move(last_error)),
        raw_output_(std::move(raw_output)) {}

  const std::string& last_error() const noexcept { return last_error_; }
  const std::string& raw_output() const noexcept { return raw_output_; }

 private:
  std::string last_error_;
  std::string raw_output_;
};

class ReplayMiss : public Error {
 public:
  ReplayMiss(std::string digest, std::string rendered_prompt)
      : Error(Errc::kReplayMiss, "no replay entry for request " + digest),
        digest_(std::move(digest)),
        rendered_prompt_(std::move(rendered_prompt)) {}

  const std::string& digest() const noexcept { return digest_; }
  const std::string& rendered_prompt() const noexcept {
    return rendered_prompt_;
  }

 private:
  std::string digest_;
  std::string rendered_prompt_;
};

}  // namespace semloc

#endif  // SEMLOC_ERROR_HPP_
