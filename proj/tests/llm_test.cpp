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

#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <map>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "semloc/error.hpp"
#include "semloc/text.hpp"

namespace semloc {
namespace {

namespace fs = std::filesystem;

LlmRequest Request(std::string text) {
  LlmRequest r;
  r.model_id = "gpt-4o-mini";
  r.messages = {{Role::kSystem, "be brief"}, {Role::kUser, std::move(text)}};
  return r;
}

class EchoClient : public LlmClient {
 public:
  std::string Complete(const LlmRequest& request, const CallContext&) override {
    ++calls;
    return "echo: " + request.messages.back().content;
  }
  std::atomic<int> calls{0};
};

fs::path FreshDir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

TEST(LlmRequest, ValidationEnforcesInvariants) {
  EXPECT_NO_THROW(ValidateRequest(Request("hi")));
  LlmRequest empty = Request("hi");
  empty.messages.clear();
  EXPECT_THROW(ValidateRequest(empty), Error);
  LlmRequest hot = Request("hi");
  hot.temperature = 1.5;
  EXPECT_THROW(ValidateRequest(hot), Error);
  EXPECT_THROW(RoleFromName("tool"), Error);
}

TEST(ReplayKey, StableAcrossSerializationAndSensitiveToContent) {
  LlmRequest r = Request("compare these");
  EXPECT_EQ(ReplayKey(RequestFromJson(CanonicalJson(r))), ReplayKey(r));
  EXPECT_EQ(RequestFromJson(CanonicalJson(r)), r);
  LlmRequest other = r;
  other.temperature = 0.0;
  EXPECT_NE(ReplayKey(other), ReplayKey(r));
  other = r;
  other.model_id = "llama-3-70b";
  EXPECT_NE(ReplayKey(other), ReplayKey(r));
  other = r;
  other.messages[0].role = Role::kUser;
  EXPECT_NE(ReplayKey(other), ReplayKey(r));
  EXPECT_EQ(ReplayKey(r).size(), 64u);
}

TEST(ReplayKey, CanonicalJsonIsFixed) {
  LlmRequest r;
  r.model_id = "m";
  r.temperature = 0.2;
  r.messages = {{Role::kUser, "q"}};
  EXPECT_EQ(CanonicalJson(r),
            R"({"messages":[{"content":"q","role":"user"}],"model":"m","temperature":0.2})");
}

TEST(Replay, RecordThenReplayIsByteIdentical) {
  fs::path dir = FreshDir("semloc_llm_record");
  EchoClient inner;
  std::string recorded;
  {
    RecordingClient recorder(inner, dir);
    recorded = recorder.Complete(Request("abc"), {"detect", 0});
    EXPECT_EQ(recorder.log().size(), 1u);
  }
  ReplayClient replay(ReplayStore::Load(dir));
  EXPECT_EQ(replay.Complete(Request("abc"), {"detect", 0}), recorded);
  EXPECT_EQ(inner.calls.load(), 1);
  ASSERT_EQ(replay.log().size(), 1u);
  EXPECT_EQ(replay.log().Snapshot()[0].step, "detect");
  EXPECT_EQ(replay.log().Snapshot()[0].digest, ReplayKey(Request("abc")));
  fs::remove_all(dir);
}

TEST(Replay, MissCarriesDigestAndPrompt) {
  ReplayStore store;
  store.Put(Request("known"), "stored");
  ReplayClient replay(std::move(store));
  EXPECT_EQ(replay.Complete(Request("known")), "stored");
  try {
    replay.Complete(Request("unknown prompt"));
    FAIL();
  } catch (const ReplayMiss& e) {
    EXPECT_EQ(e.code(), Errc::kReplayMiss);
    EXPECT_EQ(e.digest(), ReplayKey(Request("unknown prompt")));
    EXPECT_NE(e.rendered_prompt().find("unknown prompt"), std::string::npos);
  }
}

TEST(Replay, RecorderKeepsEarlierEntries) {
  fs::path dir = FreshDir("semloc_llm_reuse");
  EchoClient inner;
  {
    RecordingClient recorder(inner, dir);
    recorder.Complete(Request("one"));
  }
  {
    RecordingClient recorder(inner, dir);
    recorder.Complete(Request("one"));
    recorder.Complete(Request("two"));
  }
  // Recording always asks the backend; earlier entries stay in the store.
  EXPECT_EQ(inner.calls.load(), 3);
  EXPECT_EQ(ReplayStore::Load(dir).size(), 2u);
  fs::remove_all(dir);
}

TEST(Replay, ConcurrentRecordingKeepsEveryEntry) {
  fs::path dir = FreshDir("semloc_llm_concurrent");
  EchoClient inner;
  RecordingClient recorder(inner, dir);
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (int i = 0; i < 10; ++i) recorder.Complete(Request(std::to_string(w * 100 + i)));
    });
  }
  for (std::thread& t : workers) t.join();
  EXPECT_EQ(ReplayStore::Load(dir).size(), 40u);
  fs::remove_all(dir);
}

TEST(ReplayStore, LoadRejectsCorruption) {
  fs::path dir = FreshDir("semloc_llm_corrupt");
  {
    EchoClient inner;
    RecordingClient recorder(inner, dir);
    recorder.Complete(Request("x"));
  }
  try {
    ReplayStore::Load(dir / "missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kIoFailure);
  }
  // An entry whose content no longer hashes to its name.
  const std::string digest = ReplayKey(Request("x"));
  auto entry = nlohmann::json::parse(ReadFile(dir / (digest + ".json")));
  entry["request"]["model"] = "tampered";
  WriteFile(dir / (digest + ".json"), entry.dump());
  try {
    ReplayStore::Load(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kDigestMismatch);
  }
  WriteFile(dir / "manifest.json", R"({"format_version": 9, "entries": []})");
  try {
    ReplayStore::Load(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kFormatVersionMismatch);
  }
  fs::remove_all(dir);
}

TEST(DefaultConfig, BuiltInDefaultsWithoutOverrides) {
  ModelConfig c = DefaultConfig([](const char*) -> const char* { return nullptr; });
  EXPECT_DOUBLE_EQ(c.temperature, 0.2);
  EXPECT_EQ(c.model_id, "gpt-4o-mini");
}

TEST(DefaultConfig, EnvironmentOverrides) {
  std::map<std::string, const char*> env = {{"SEMLOC_TEMPERATURE", "0.0"},
                                            {"SEMLOC_MODEL", "llama-3-70b"}};
  auto getenv_fn = [&](const char* k) -> const char* {
    auto it = env.find(k);
    return it == env.end() ? nullptr : it->second;
  };
  ModelConfig c = DefaultConfig(getenv_fn);
  EXPECT_DOUBLE_EQ(c.temperature, 0.0);
  EXPECT_EQ(c.model_id, "llama-3-70b");
  env["SEMLOC_TEMPERATURE"] = "1.5";
  try {
    DefaultConfig(getenv_fn);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidConfig);
  }
  env["SEMLOC_TEMPERATURE"] = "warm";
  EXPECT_THROW(DefaultConfig(getenv_fn), Error);
}

// --- HTTP backend against a local server ------------------------------------

class LocalServer {
 public:
  LocalServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpChatClient, RetriesRateLimitsWithExponentialBackoff) {
  LocalServer local;
  std::atomic<int> hits{0};
  std::string seen_auth, seen_body;
  local.server().Post("/v1/chat/completions", [&](const httplib::Request& req,
                                                 httplib::Response& res) {
    if (++hits <= 2) {
      res.status = 429;
      return;
    }
    seen_auth = req.get_header_value("Authorization");
    seen_body = req.body;
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"ok!"}}]})",
                    "application/json");
  });
  std::vector<long> sleeps;
  HttpConfig config;
  config.base_url = local.base_url();
  config.api_key = "test-key";
  config.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
  HttpChatClient client(config);
  EXPECT_EQ(client.Complete(Request("hello")), "ok!");
  EXPECT_EQ(sleeps, (std::vector<long>{500, 1000}));
  EXPECT_EQ(seen_auth, "Bearer test-key");
  auto body = nlohmann::json::parse(seen_body);
  EXPECT_EQ(body["model"], "gpt-4o-mini");
  EXPECT_DOUBLE_EQ(body["temperature"].get<double>(), 0.2);
  EXPECT_EQ(body["messages"].size(), 2u);
  EXPECT_EQ(client.log().size(), 1u);
}

TEST(HttpChatClient, PersistentRateLimitSurfaces) {
  LocalServer local;
  local.server().Post("/v1/chat/completions",
                      [](const httplib::Request&, httplib::Response& res) { res.status = 429; });
  HttpConfig config;
  config.base_url = local.base_url();
  config.max_rate_limit_retries = 3;
  std::vector<long> sleeps;
  config.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
  HttpChatClient client(config);
  try {
    client.Complete(Request("hello"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kRateLimited);
  }
  EXPECT_EQ(sleeps, (std::vector<long>{500, 1000, 2000}));
}

TEST(HttpChatClient, ServerErrorsAndBadBodiesAreBackendUnavailable) {
  LocalServer local;
  local.server().Post("/v1/chat/completions", [](const httplib::Request&,
                                                 httplib::Response& res) {
    res.status = 500;
    res.set_content("boom", "text/plain");
  });
  local.server().Post("/bad/chat/completions", [](const httplib::Request&,
                                                  httplib::Response& res) {
    res.set_content("{\"choices\": []}", "application/json");
  });
  HttpConfig config;
  config.base_url = local.base_url();
  config.sleep = [](std::chrono::milliseconds) {};
  try {
    HttpChatClient(config).Complete(Request("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLlmBackendUnavailable);
  }
  config.base_url = local.base_url().substr(0, local.base_url().size() - 3) + "/bad";
  try {
    HttpChatClient(config).Complete(Request("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLlmBackendUnavailable);
  }
}

TEST(HttpChatClient, UnreachableEndpointIsBackendUnavailable) {
  HttpConfig config;
  config.base_url = "http://127.0.0.1:1/v1";
  config.timeout = std::chrono::seconds(2);
  try {
    HttpChatClient(config).Complete(Request("x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLlmBackendUnavailable);
  }
}

}  // namespace
}  // namespace semloc
