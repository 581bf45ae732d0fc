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

#ifndef SEMLOC_LLM_HPP_
#define SEMLOC_LLM_HPP_

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace semloc {

inline constexpr double kDefaultTemperature = 0.2;
inline constexpr std::string_view kDefaultModel = "gpt-4o-mini";

enum class Role { kSystem, kUser, kAssistant };

std::string_view RoleName(Role role);
Role RoleFromName(std::string_view name);  // throws InvalidArgument

struct Message {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const Message&, const Message&) = default;
};

struct LlmRequest {
  std::string model_id;
  double temperature = kDefaultTemperature;
  std::vector<Message> messages;

  friend bool operator==(const LlmRequest&, const LlmRequest&) = default;
};

// Throws InvalidArgument if the request breaks its invariants (no messages,
// temperature outside [0, 1]).
void ValidateRequest(const LlmRequest& request);

// Compact JSON with a fixed key order; the replay key hashes exactly this.
std::string CanonicalJson(const LlmRequest& request);
LlmRequest RequestFromJson(std::string_view json);

// Hex SHA-256 of CanonicalJson(request).
std::string ReplayKey(const LlmRequest& request);

// Which pipeline step issued a request. Only used for logging.
struct CallContext {
  std::string step;
  int subcode_id = -1;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  // Must be safe to call from several threads at once.
  virtual std::string Complete(const LlmRequest& request,
                               const CallContext& context = {}) = 0;
};

struct RequestLogEntry {
  std::string digest;
  std::string step;
  int subcode_id = -1;
};

// Thread-safe append-only record of served requests.
class RequestLog {
 public:
  void Append(RequestLogEntry entry);
  std::vector<RequestLogEntry> Snapshot() const;
  std::size_t size() const;
  // One JSON object per line.
  std::string ToJsonLines() const;

 private:
  mutable std::mutex mu_;
  std::vector<RequestLogEntry> entries_;
};

struct ReplayEntry {
  LlmRequest request;
  std::string response;
};

// A directory holding one <digest>.json file per request plus manifest.json.
class ReplayStore {
 public:
  ReplayStore() = default;

  // Throws IoFailure when the directory or an entry cannot be read,
  // FormatVersionMismatch on an unknown manifest version, DigestMismatch
  // when an entry's file name disagrees with its request.
  static ReplayStore Load(const std::filesystem::path& dir);

  const ReplayEntry* Find(const std::string& digest) const;
  // Returns the digest under which the entry is stored.
  std::string Put(LlmRequest request, std::string response);
  void Save(const std::filesystem::path& dir) const;

  const std::map<std::string, ReplayEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, ReplayEntry> entries_;
};

inline constexpr int kReplayFormatVersion = 1;

// Serves responses from a loaded store and never touches the network.
class ReplayClient : public LlmClient {
 public:
  explicit ReplayClient(ReplayStore store) : store_(std::move(store)) {}

  std::string Complete(const LlmRequest& request,
                       const CallContext& context = {}) override;

  const RequestLog& log() const { return log_; }
  const ReplayStore& store() const { return store_; }

 private:
  const ReplayStore store_;
  RequestLog log_;
};

// Forwards to another client and persists every exchange to `dir`.
class RecordingClient : public LlmClient {
 public:
  RecordingClient(LlmClient& inner, std::filesystem::path dir);

  std::string Complete(const LlmRequest& request,
                       const CallContext& context = {}) override;

  const RequestLog& log() const { return log_; }

 private:
  LlmClient& inner_;
  std::filesystem::path dir_;
  std::mutex mu_;
  ReplayStore store_;
  RequestLog log_;
};

struct HttpConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  int max_rate_limit_retries = 5;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
  std::chrono::seconds timeout{120};
  // Injection point for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// OpenAI-style POST {base_url}/chat/completions.
class HttpChatClient : public LlmClient {
 public:
  explicit HttpChatClient(HttpConfig config);

  std::string Complete(const LlmRequest& request,
                       const CallContext& context = {}) override;

  const RequestLog& log() const { return log_; }

 private:
  HttpConfig config_;
  RequestLog log_;
};

struct ModelConfig {
  std::string model_id{kDefaultModel};
  double temperature = kDefaultTemperature;
};

// Throws InvalidConfig unless 0 <= t <= 1.
void ValidateTemperature(double temperature);

// Defaults, overridden by SEMLOC_MODEL and SEMLOC_TEMPERATURE.
ModelConfig DefaultConfig();
ModelConfig DefaultConfig(
    const std::function<const char*(const char*)>& getenv_fn);

// Live endpoint settings from SEMLOC_BASE_URL and SEMLOC_API_KEY.
HttpConfig HttpConfigFromEnv();

}  // namespace semloc

#endif  // SEMLOC_LLM_HPP_
