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

#include "semloc/llm.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "semloc/error.hpp"
#include "semloc/text.hpp"

namespace semloc {
namespace {

using nlohmann::json;

json RequestToJson(const LlmRequest& request) {
  // nlohmann::json keeps object keys sorted, which fixes the key order.
  json messages = json::array();
  for (const Message& m : request.messages) {
    messages.push_back({{"content", m.content}, {"role", RoleName(m.role)}});
  }
  return {{"messages", std::move(messages)},
          {"model", request.model_id},
          {"temperature", request.temperature}};
}

LlmRequest RequestFromJsonValue(const json& j) {
  LlmRequest request;
  try {
    request.model_id = j.at("model").get<std::string>();
    request.temperature = j.at("temperature").get<double>();
    for (const json& m : j.at("messages")) {
      request.messages.push_back({RoleFromName(m.at("role").get<std::string>()),
                                  m.at("content").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("malformed request: ") + e.what());
  }
  return request;
}

void WriteEntryFile(const std::filesystem::path& dir, const std::string& digest,
                    const ReplayEntry& entry) {
  json j = {{"request", RequestToJson(entry.request)}, {"response", entry.response}};
  WriteFile(dir / (digest + ".json"), j.dump(2) + "\n");
}

void WriteManifest(const std::filesystem::path& dir,
                   const std::map<std::string, ReplayEntry>& entries) {
  json list = json::array();
  for (const auto& [digest, entry] : entries) list.push_back(digest);
  json manifest = {{"format_version", kReplayFormatVersion}, {"entries", std::move(list)}};
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

Role RoleFromName(std::string_view name) {
  if (name == "system") return Role::kSystem;
  if (name == "user") return Role::kUser;
  if (name == "assistant") return Role::kAssistant;
  throw Error(Errc::kInvalidArgument, "unknown message role '" + std::string(name) + "'");
}

void ValidateRequest(const LlmRequest& request) {
  if (request.messages.empty()) {
    throw Error(Errc::kInvalidArgument, "request has no messages");
  }
  if (!(request.temperature >= 0.0 && request.temperature <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "temperature must lie in [0, 1]");
  }
}

std::string CanonicalJson(const LlmRequest& request) {
  return RequestToJson(request).dump();
}

LlmRequest RequestFromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("malformed request: ") + e.what());
  }
  return RequestFromJsonValue(j);
}

std::string ReplayKey(const LlmRequest& request) {
  return Sha256Hex(CanonicalJson(request));
}

// --- RequestLog -------------------------------------------------------------

void RequestLog::Append(RequestLogEntry entry) {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.push_back(std::move(entry));
}

std::vector<RequestLogEntry> RequestLog::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_;
}

std::size_t RequestLog::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

std::string RequestLog::ToJsonLines() const {
  std::string out;
  for (const RequestLogEntry& e : Snapshot()) {
    json j = {{"digest", e.digest}, {"step", e.step}, {"subcode_id", e.subcode_id}};
    out += j.dump() + "\n";
  }
  return out;
}

// --- ReplayStore ------------------------------------------------------------

ReplayStore ReplayStore::Load(const std::filesystem::path& dir) {
  std::filesystem::path manifest_path = dir / "manifest.json";
  if (!std::filesystem::is_regular_file(manifest_path)) {
    throw Error(Errc::kIoFailure,
                "replay store " + dir.string() + " has no manifest.json");
  }
  json manifest;
  try {
    manifest = json::parse(ReadFile(manifest_path));
  } catch (const json::exception& e) {
    throw Error(Errc::kIoFailure, "cannot parse " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object() || manifest.value("format_version", -1) != kReplayFormatVersion) {
    throw Error(Errc::kFormatVersionMismatch,
                "replay manifest " + manifest_path.string() +
                    " does not declare format_version " +
                    std::to_string(kReplayFormatVersion));
  }
  ReplayStore store;
  for (const json& item : manifest.value("entries", json::array())) {
    std::string digest = item.get<std::string>();
    std::filesystem::path path = dir / (digest + ".json");
    json j;
    try {
      j = json::parse(ReadFile(path));
    } catch (const json::exception& e) {
      throw Error(Errc::kIoFailure, "cannot parse " + path.string() + ": " + e.what());
    }
    ReplayEntry entry;
    entry.request = RequestFromJsonValue(j.at("request"));
    entry.response = j.at("response").get<std::string>();
    if (ReplayKey(entry.request) != digest) {
      throw Error(Errc::kDigestMismatch,
                  "replay entry " + path.string() + " does not hash to its name");
    }
    store.entries_.emplace(std::move(digest), std::move(entry));
  }
  return store;
}

const ReplayEntry* ReplayStore::Find(const std::string& digest) const {
  auto it = entries_.find(digest);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string ReplayStore::Put(LlmRequest request, std::string response) {
  std::string digest = ReplayKey(request);
  entries_[digest] = ReplayEntry{std::move(request), std::move(response)};
  return digest;
}

void ReplayStore::Save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::kIoFailure, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [digest, entry] : entries_) WriteEntryFile(dir, digest, entry);
  WriteManifest(dir, entries_);
}

// --- clients ----------------------------------------------------------------

std::string ReplayClient::Complete(const LlmRequest& request,
                                   const CallContext& context) {
  std::string digest = ReplayKey(request);
  const ReplayEntry* entry = store_.Find(digest);
  if (entry == nullptr) {
    std::string rendered;
    for (const Message& m : request.messages) {
      rendered += "[" + std::string(RoleName(m.role)) + "]\n" + m.content + "\n";
    }
    throw ReplayMiss(digest, rendered);
  }
  log_.Append({digest, context.step, context.subcode_id});
  return entry->response;
}

RecordingClient::RecordingClient(LlmClient& inner, std::filesystem::path dir)
    : inner_(inner), dir_(std::move(dir)) {
  if (std::filesystem::exists(dir_ / "manifest.json")) {
    store_ = ReplayStore::Load(dir_);
  } else {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(Errc::kIoFailure, "cannot create " + dir_.string() + ": " + ec.message());
  }
}

std::string RecordingClient::Complete(const LlmRequest& request,
                                      const CallContext& context) {
  std::string response = inner_.Complete(request, context);
  std::string digest;
  {
    std::lock_guard<std::mutex> lock(mu_);
    digest = store_.Put(request, response);
    WriteEntryFile(dir_, digest, *store_.Find(digest));
    WriteManifest(dir_, store_.entries());
  }
  log_.Append({digest, context.step, context.subcode_id});
  return response;
}

HttpChatClient::HttpChatClient(HttpConfig config) : config_(std::move(config)) {
  if (!config_.sleep) {
    config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string HttpChatClient::Complete(const LlmRequest& request,
                                     const CallContext& context) {
  ValidateRequest(request);
  // Split "scheme://host[:port]/prefix" into the origin and the path prefix.
  std::string base = config_.base_url;
  while (!base.empty() && base.back() == '/') base.pop_back();
  std::size_t scheme_end = base.find("://");
  std::size_t path_start =
      base.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  std::string origin = path_start == std::string::npos ? base : base.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : base.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(config_.timeout);
  client.set_read_timeout(config_.timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  std::string body = CanonicalJson(request);

  std::chrono::milliseconds delay = config_.initial_backoff;
  for (int attempt = 0;; ++attempt) {
    httplib::Result result =
        client.Post(prefix + "/chat/completions", headers, body, "application/json");
    if (!result) {
      throw Error(Errc::kLlmBackendUnavailable,
                  "cannot reach " + origin + ": " + httplib::to_string(result.error()));
    }
    if (result->status == 429) {
      if (attempt >= config_.max_rate_limit_retries) {
        throw Error(Errc::kRateLimited, "rate limited by " + origin + " after " +
                                            std::to_string(attempt + 1) + " attempts");
      }
      config_.sleep(delay);
      delay = std::min(delay * 2, config_.max_backoff);
      continue;
    }
    if (result->status != 200) {
      throw Error(Errc::kLlmBackendUnavailable,
                  "endpoint returned HTTP " + std::to_string(result->status) + ": " +
                      result->body.substr(0, 500));
    }
    std::string content;
    try {
      json reply = json::parse(result->body);
      content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw Error(Errc::kLlmBackendUnavailable,
                  std::string("malformed completion response: ") + e.what());
    }
    log_.Append({ReplayKey(request), context.step, context.subcode_id});
    return content;
  }
}

// --- configuration ----------------------------------------------------------

void ValidateTemperature(double temperature) {
  if (!(temperature >= 0.0 && temperature <= 1.0)) {
    throw Error(Errc::kInvalidConfig, "temperature " + std::to_string(temperature) +
                                          " is outside [0, 1]");
  }
}

ModelConfig DefaultConfig() {
  return DefaultConfig([](const char* name) { return std::getenv(name); });
}

ModelConfig DefaultConfig(const std::function<const char*(const char*)>& getenv_fn) {
  ModelConfig config;
  if (const char* model = getenv_fn("SEMLOC_MODEL"); model != nullptr && *model != '\0') {
    config.model_id = model;
  }
  if (const char* t = getenv_fn("SEMLOC_TEMPERATURE"); t != nullptr && *t != '\0') {
    char* end = nullptr;
    double value = std::strtod(t, &end);
    if (end == t || *end != '\0') {
      throw Error(Errc::kInvalidConfig,
                  std::string("SEMLOC_TEMPERATURE is not a number: ") + t);
    }
    ValidateTemperature(value);
    config.temperature = value;
  }
  return config;
}

HttpConfig HttpConfigFromEnv() {
  HttpConfig config;
  if (const char* url = std::getenv("SEMLOC_BASE_URL"); url != nullptr && *url != '\0') {
    config.base_url = url;
  }
  if (const char* key = std::getenv("SEMLOC_API_KEY"); key != nullptr) {
    config.api_key = key;
  }
  return config;
}

}  // namespace semloc
