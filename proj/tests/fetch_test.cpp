// Copyright 2026 The propaganda-lens Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "plens/fetch.hpp"
#include "plens/http_endpoint.hpp"
#include "plens/random.hpp"
#include "test_util.hpp"

namespace plens {
namespace {

using testing::ReadFile;
using testing::TempDir;

// Scripted endpoint: per-account queue of responses, then ok forever.
// Records the simulated time of every call.
class ScriptedEndpoint : public ScoreEndpoint {
 public:
  explicit ScriptedEndpoint(Clock &clock) : clock_(clock) {}

  void Script(const std::string &id, std::vector<EndpointResponse::Kind> kinds) {
    script_[id] = std::move(kinds);
  }

  EndpointResponse Fetch(const std::string &account_id) override {
    std::lock_guard lock(mu_);
    calls.push_back(clock_.Now());
    ++per_account[account_id];
    EndpointResponse r;
    r.kind = EndpointResponse::Kind::kOk;
    auto &queue = script_[account_id];
    if (!queue.empty()) {
      r.kind = queue.front();
      queue.erase(queue.begin());
    }
    r.scores = ScoreVector{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    return r;
  }

  std::vector<double> calls;
  std::map<std::string, int> per_account;

 private:
  Clock &clock_;
  std::mutex mu_;
  std::map<std::string, std::vector<EndpointResponse::Kind>> script_;
};

std::vector<std::string> Ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("acct" + std::to_string(i));
  return ids;
}

ClientConfig Unlimited() {
  ClientConfig c;
  c.rate_limit_per_minute = 0;
  return c;
}

TEST(RateLimiter, SlidingWindowNeverExceeded) {
  for (unsigned in_flight : {1u, 4u}) {
    SimulatedClock clock;
    ScriptedEndpoint endpoint(clock);
    ClientConfig cfg;
    cfg.rate_limit_per_minute = 60;
    cfg.in_flight = in_flight;
    const auto results = FetchScores(Ids(120), endpoint, clock, cfg);
    ASSERT_EQ(endpoint.calls.size(), 120u);
    auto times = endpoint.calls;
    std::sort(times.begin(), times.end());
    for (std::size_t i = 0; i < times.size(); ++i) {
      std::size_t in_window = 0;
      for (double t : times) in_window += t > times[i] - 60.0 && t <= times[i];
      ASSERT_LE(in_window, 60u) << "window ending at " << times[i];
    }
    // 120 requests at 60/min need at least one full extra window.
    EXPECT_GE(times.back(), 60.0);
    for (const auto &r : results) EXPECT_TRUE(r.record);
  }
}

TEST(RateLimiter, ZeroMeansUnlimited) {
  SimulatedClock clock;
  RateLimiter limiter(clock, 0);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(limiter.Acquire(), 0.0);
}

TEST(FetchScores, ExponentialBackoffThenSuccess) {
  SimulatedClock clock;
  ScriptedEndpoint endpoint(clock);
  using Kind = EndpointResponse::Kind;
  endpoint.Script("acct0", {Kind::kTransient, Kind::kTransient});
  const auto results = FetchScores(Ids(1), endpoint, clock, Unlimited());
  ASSERT_EQ(results.size(), 1u);
  EXPECT_EQ(results[0].attempts, 3u);
  EXPECT_FALSE(results[0].fetch_failed);
  EXPECT_EQ(endpoint.calls, (std::vector<double>{0.0, 1.0, 3.0}));
}

TEST(FetchScores, RetryCapMarksFailureAndSkipsStore) {
  TempDir dir;
  SimulatedClock clock;
  ScriptedEndpoint endpoint(clock);
  using Kind = EndpointResponse::Kind;
  endpoint.Script("acct1", std::vector<Kind>(10, Kind::kTransient));
  auto cfg = Unlimited();
  cfg.retry_cap = 3;
  const auto store = dir / "store.jsonl";
  const auto results = FetchScores(Ids(3), endpoint, clock, cfg, store);
  EXPECT_TRUE(results[1].fetch_failed);
  EXPECT_FALSE(results[1].record);
  EXPECT_EQ(results[1].attempts, 4u);
  EXPECT_TRUE(results[0].record);
  EXPECT_TRUE(results[2].record);
  const auto [stored, rep] = LoadScores(store);
  ASSERT_EQ(stored.size(), 2u);
  EXPECT_EQ(stored[0].account_id, "acct0");
  EXPECT_EQ(stored[1].account_id, "acct2");
}

TEST(FetchScores, StatusesRecorded) {
  SimulatedClock clock;
  ScriptedEndpoint endpoint(clock);
  using Kind = EndpointResponse::Kind;
  endpoint.Script("acct0", {Kind::kSuspended});
  endpoint.Script("acct1", {Kind::kIdMismatch});
  const auto results = FetchScores(Ids(3), endpoint, clock, Unlimited());
  EXPECT_EQ(results[0].record->status, AccountStatus::kSuspended);
  EXPECT_FALSE(results[0].record->scores);
  EXPECT_EQ(results[1].record->status, AccountStatus::kIdMismatch);
  EXPECT_EQ(results[2].record->status, AccountStatus::kOk);
  EXPECT_EQ(results[2].record->fetched_at, clock.WallNow());
}

TEST(FetchScores, ResumesFromStore) {
  TempDir dir;
  const auto store = dir / "store.jsonl";
  SimulatedClock clock;
  {
    ScriptedEndpoint first(clock);
    FetchScores(Ids(5), first, clock, Unlimited(), store);
    EXPECT_EQ(first.calls.size(), 5u);
  }
  const auto before = ReadFile(store);
  ScriptedEndpoint second(clock);
  const auto results = FetchScores(Ids(8), second, clock, Unlimited(), store);
  EXPECT_EQ(second.calls.size(), 3u);
  for (int i = 0; i < 5; ++i) {
    EXPECT_TRUE(results[i].from_store);
    EXPECT_EQ(second.per_account.count("acct" + std::to_string(i)), 0u);
  }
  const auto after = ReadFile(store);
  EXPECT_EQ(after.substr(0, before.size()), before);
  EXPECT_EQ(LoadScores(store).first.size(), 8u);
}

TEST(FetchScores, CredentialRejectedAborts) {
  SimulatedClock clock;
  ScriptedEndpoint endpoint(clock);
  endpoint.Script("acct2", {EndpointResponse::Kind::kCredentialRejected});
  try {
    FetchScores(Ids(5), endpoint, clock, Unlimited());
    FAIL() << "expected CredentialRejected";
  } catch (const CredentialRejected &e) {
    EXPECT_EQ(e.code(), ExitCode::kUsage);
  }
  EXPECT_EQ(endpoint.calls.size(), 3u);
}

TEST(FetchScores, OfflineFixtureMatchesLoadScores) {
  TempDir dir;
  Rng rng(99);
  std::vector<AccountScores> fixture;
  for (int i = 0; i < 60; ++i) {
    AccountScores a;
    a.account_id = "f" + std::to_string(i);
    a.fetched_at = UtcSeconds{std::chrono::seconds{1594000000 + i}};
    const auto roll = rng.Below(10);
    if (roll == 0) {
      a.status = AccountStatus::kSuspended;
    } else if (roll == 1) {
      a.status = AccountStatus::kIdMismatch;
    } else {
      ScoreVector v{};
      for (auto &x : v) x = rng.Uniform();
      a.scores = v;
    }
    fixture.push_back(a);
  }
  std::filesystem::create_directories(dir / "fx");
  {
    std::ofstream out(dir / "fx" / "scores.jsonl");
    WriteScores(fixture, out);
  }
  std::vector<std::string> ids;
  for (const auto &a : fixture) ids.push_back(a.account_id);

  for (unsigned in_flight : {1u, 3u}) {
    SimulatedClock clock;
    FixtureEndpoint endpoint(dir / "fx");
    auto cfg = Unlimited();
    cfg.in_flight = in_flight;
    const auto store = dir / ("store" + std::to_string(in_flight) + ".jsonl");
    const auto results = FetchScores(ids, endpoint, clock, cfg, store);
    EXPECT_EQ(SuccessfulRecords(results), LoadScores(dir / "fx" / "scores.jsonl").first);
    if (in_flight == 1) EXPECT_EQ(ReadFile(store), ReadFile(dir / "fx" / "scores.jsonl"));
  }

  SimulatedClock clock;
  FixtureEndpoint endpoint(dir / "fx");
  const auto unknown = FetchScores({"nobody"}, endpoint, clock, Unlimited());
  EXPECT_EQ(unknown[0].record->status, AccountStatus::kIdMismatch);
}

// A local score service: /api/accounts/<id>.
class LocalService {
 public:
  LocalService() {
    server_.Get(R"(/api/accounts/(.+))", [this](const httplib::Request &req, httplib::Response &res) {
      std::lock_guard lock(mu_);
      auth.push_back(req.get_header_value("Authorization"));
      const std::string id = req.matches[1];
      paths.push_back(req.path);
      if (id == "suspended") {
        res.status = 410;
      } else if (id == "missing") {
        res.status = 404;
      } else if (id == "denied") {
        res.status = 401;
      } else if (id == "flaky" && flaky_failures_++ < 2) {
        res.status = 503;
      } else if (id == "garbage") {
        res.set_content("{not json", "application/json");
      } else {
        res.set_content(R"({"status":"ok","fetched_at":"2020-07-02T03:04:05Z","scores":)"
                        R"({"english":0.9,"content":0.8,"friends":0.7,"network":0.6,)"
                        R"("sentiment":0.5,"timing":0.4,"user meta-data":0.3}})",
                        "application/json");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalService() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/api/"; }

  std::vector<std::string> auth;
  std::vector<std::string> paths;

 private:
  httplib::Server server_;
  std::thread thread_;
  std::mutex mu_;
  int port_ = 0;
  int flaky_failures_ = 0;
};

TEST(HttpScoreEndpoint, RequiresCredentialVariable) {
  ClientConfig cfg;
  cfg.endpoint = "http://127.0.0.1:1";
  EXPECT_THROW(HttpScoreEndpoint{cfg}, UsageError);
  cfg.credential_env = "PLENS_TEST_UNSET_VARIABLE";
  ::unsetenv("PLENS_TEST_UNSET_VARIABLE");
  EXPECT_THROW(HttpScoreEndpoint{cfg}, UsageError);
}

TEST(HttpScoreEndpoint, MapsServiceResponses) {
  LocalService service;
  ::setenv("PLENS_TEST_KEY", "sekret", 1);
  ClientConfig cfg = Unlimited();
  cfg.endpoint = service.url();
  cfg.credential_env = "PLENS_TEST_KEY";
  HttpScoreEndpoint endpoint(cfg);
  SimulatedClock clock;
  const auto results = FetchScores({"u 1", "suspended", "missing", "flaky"}, endpoint, clock, cfg);
  ASSERT_TRUE(results[0].record);
  EXPECT_EQ(results[0].record->Score(ScoreType::kFriend), 0.7);
  EXPECT_EQ(results[0].record->Score(ScoreType::kUser), 0.3);
  EXPECT_EQ(FormatIso8601(results[0].record->fetched_at), "2020-07-02T03:04:05Z");
  EXPECT_EQ(results[1].record->status, AccountStatus::kSuspended);
  EXPECT_EQ(results[2].record->status, AccountStatus::kIdMismatch);
  EXPECT_EQ(results[3].attempts, 3u);
  EXPECT_EQ(results[3].record->status, AccountStatus::kOk);
  EXPECT_EQ(service.paths[0], "/api/accounts/u 1");  // the server decodes the path
  EXPECT_EQ(service.auth[0], "Bearer sekret");

  auto capped = cfg;
  capped.retry_cap = 1;
  const auto bad = FetchScores({"garbage"}, endpoint, clock, capped);
  EXPECT_TRUE(bad[0].fetch_failed);
  EXPECT_THROW(FetchScores({"denied"}, endpoint, clock, cfg), CredentialRejected);
}

TEST(HttpScoreEndpoint, UnreachableServiceIsTransient) {
  ::setenv("PLENS_TEST_KEY", "sekret", 1);
  ClientConfig cfg = Unlimited();
  cfg.endpoint = "http://127.0.0.1:1";
  cfg.credential_env = "PLENS_TEST_KEY";
  cfg.retry_cap = 0;
  HttpScoreEndpoint endpoint(cfg);
  SimulatedClock clock;
  EXPECT_TRUE(FetchScores({"a"}, endpoint, clock, cfg)[0].fetch_failed);
}

TEST(PercentEncode, ReservedCharacters) {
  EXPECT_EQ(PercentEncode("abc-_.~"), "abc-_.~");
  EXPECT_EQ(PercentEncode("a/b c"), "a%2Fb%20c");
}

}  // namespace
}  // namespace plens
