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

// Rate-limited, resumable acquisition of bot scores. The scoring service is
// reached through the ScoreEndpoint interface; the suite drives it with a
// simulated clock and in-process endpoints, never the network.

#ifndef PLENS_FETCH_HPP_
#define PLENS_FETCH_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "plens/botscores.hpp"
#include "plens/error.hpp"
#include "plens/timeutil.hpp"

namespace plens {

// Seconds on a monotonic axis plus a wall-clock reading for timestamps.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double Now() = 0;
  virtual void SleepUntil(double t) = 0;
  virtual UtcSeconds WallNow() = 0;
};

class SystemClock : public Clock {
 public:
  double Now() override {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  }
  void SleepUntil(double t) override {
    const double wait = t - Now();
    if (wait > 0) std::this_thread::sleep_for(std::chrono::duration<double>(wait));
  }
  UtcSeconds WallNow() override {
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  }
};

// Deterministic clock: sleeping advances time instantly. Thread-safe.
class SimulatedClock : public Clock {
 public:
  explicit SimulatedClock(UtcSeconds epoch = UtcSeconds{std::chrono::seconds{1585699200}})
      : epoch_(epoch) {}

  double Now() override {
    std::lock_guard lock(mu_);
    return now_;
  }
  void SleepUntil(double t) override {
    std::lock_guard lock(mu_);
    now_ = std::max(now_, t);
  }
  UtcSeconds WallNow() override {
    std::lock_guard lock(mu_);
    return epoch_ + std::chrono::seconds{static_cast<std::int64_t>(std::floor(now_))};
  }
  void Advance(double dt) {
    std::lock_guard lock(mu_);
    now_ += dt;
  }

 private:
  std::mutex mu_;
  double now_ = 0.0;
  UtcSeconds epoch_;
};

// At most `per_minute` acquisitions in any sliding 60-second window.
// per_minute == 0 disables limiting. Thread-safe.
class RateLimiter {
 public:
  RateLimiter(Clock &clock, std::uint32_t per_minute) : clock_(clock), limit_(per_minute) {}

  // Blocks (on the clock) until a slot is free; returns the issue time.
  double Acquire() {
    std::lock_guard lock(mu_);
    double now = clock_.Now();
    if (limit_ == 0) return now;
    while (true) {
      while (!issued_.empty() && issued_.front() <= now - kWindow) issued_.pop_front();
      if (issued_.size() < limit_) break;
      clock_.SleepUntil(issued_.front() + kWindow);
      now = clock_.Now();
    }
    issued_.push_back(now);
    return now;
  }

  static constexpr double kWindow = 60.0;

 private:
  Clock &clock_;
  std::uint32_t limit_;
  std::mutex mu_;
  std::deque<double> issued_;
};

struct EndpointResponse {
  enum class Kind { kOk, kSuspended, kIdMismatch, kTransient, kCredentialRejected };
  Kind kind = Kind::kTransient;
  ScoreVector scores{};
  std::optional<UtcSeconds> fetched_at;  // service-supplied, else the wall clock
  std::string detail;
};

// One request per call. Implementations must be safe to call concurrently
// when more than one request is allowed in flight.
class ScoreEndpoint {
 public:
  virtual ~ScoreEndpoint() = default;
  virtual EndpointResponse Fetch(const std::string &account_id) = 0;
};

// Answers from a score fixture (a store file, or a directory holding
// scores.jsonl). Unknown accounts answer id_mismatch.
class FixtureEndpoint : public ScoreEndpoint {
 public:
  explicit FixtureEndpoint(const std::filesystem::path &fixture) {
    auto path = fixture;
    if (std::filesystem::is_directory(path)) path /= "scores.jsonl";
    auto [records, report] = LoadScores(path);
    for (auto &r : records) records_.emplace(r.account_id, std::move(r));
  }

  EndpointResponse Fetch(const std::string &account_id) override {
    EndpointResponse resp;
    auto it = records_.find(account_id);
    if (it == records_.end()) {
      resp.kind = EndpointResponse::Kind::kIdMismatch;
      return resp;
    }
    const auto &r = it->second;
    resp.fetched_at = r.fetched_at;
    switch (r.status) {
      case AccountStatus::kOk:
        resp.kind = EndpointResponse::Kind::kOk;
        resp.scores = *r.scores;
        break;
      case AccountStatus::kSuspended: resp.kind = EndpointResponse::Kind::kSuspended; break;
      case AccountStatus::kIdMismatch: resp.kind = EndpointResponse::Kind::kIdMismatch; break;
    }
    return resp;
  }

 private:
  std::unordered_map<std::string, AccountScores> records_;
};

struct ClientConfig {
  std::string endpoint;            // base URL for the HTTP endpoint
  std::string credential_env;      // name of the variable holding the key
  std::uint32_t rate_limit_per_minute = 60;
  std::uint32_t retry_cap = 5;     // retries after the first attempt
  double backoff_base_seconds = 1.0;
  std::uint32_t in_flight = 1;
};

struct FetchResult {
  std::string account_id;
  std::optional<AccountScores> record;  // empty iff fetch_failed
  bool fetch_failed = false;
  bool from_store = false;
  std::uint32_t attempts = 0;
};

class CredentialRejected : public Error {
 public:
  explicit CredentialRejected(const std::string &what) : Error(ExitCode::kUsage, what) {}
};

// Fetches scores for `account_ids`, returning results in input order.
// Accounts already in the store at `store_path` are served from it; new
// results are appended so an interrupted run resumes where it stopped.
// Transient failures back off exponentially (base * 2^attempt seconds) up to
// the retry cap, after which the account is marked fetch_failed and not
// persisted. A rejected credential aborts the whole run.
inline std::vector<FetchResult> FetchScores(
    const std::vector<std::string> &account_ids, ScoreEndpoint &endpoint, Clock &clock,
    const ClientConfig &config,
    const std::optional<std::filesystem::path> &store_path = std::nullopt) {
  std::unordered_map<std::string, AccountScores> stored;
  if (store_path && std::filesystem::exists(*store_path)) {
    auto [records, report] = LoadScores(*store_path);
    for (auto &r : records) stored.emplace(r.account_id, std::move(r));
  }
  std::ofstream store;
  if (store_path) {
    store.open(*store_path, std::ios::binary | std::ios::app);
    if (!store) throw IoError("cannot append to score store: " + store_path->string());
  }

  std::vector<FetchResult> results(account_ids.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < account_ids.size(); ++i) {
    results[i].account_id = account_ids[i];
    auto it = stored.find(account_ids[i]);
    if (it != stored.end()) {
      results[i].record = it->second;
      results[i].from_store = true;
    } else {
      pending.push_back(i);
    }
  }

  RateLimiter limiter(clock, config.rate_limit_per_minute);
  std::mutex store_mu;
  std::mutex error_mu;
  std::exception_ptr error;
  std::atomic<bool> abort{false};
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    try {
      while (!abort) {
        const std::size_t k = next.fetch_add(1);
        if (k >= pending.size()) return;
        FetchResult &res = results[pending[k]];
        for (std::uint32_t attempt = 0;; ++attempt) {
          limiter.Acquire();
          ++res.attempts;
          EndpointResponse resp = endpoint.Fetch(res.account_id);
          using Kind = EndpointResponse::Kind;
          if (resp.kind == Kind::kCredentialRejected) {
            abort = true;
            throw CredentialRejected("score service rejected the credential" +
                                     (resp.detail.empty() ? "" : ": " + resp.detail));
          }
          if (resp.kind == Kind::kTransient) {
            if (attempt >= config.retry_cap) {
              res.fetch_failed = true;
              break;
            }
            clock.SleepUntil(clock.Now() +
                             config.backoff_base_seconds * std::ldexp(1.0, static_cast<int>(attempt)));
            continue;
          }
          AccountScores rec;
          rec.account_id = res.account_id;
          rec.fetched_at = resp.fetched_at.value_or(clock.WallNow());
          if (resp.kind == Kind::kOk) {
            rec.status = AccountStatus::kOk;
            rec.scores = resp.scores;
            if (!IsValid(rec)) {
              // Out-of-range scores are treated like a failed response.
              res.fetch_failed = true;
              break;
            }
          } else {
            rec.status = resp.kind == Kind::kSuspended ? AccountStatus::kSuspended
                                                       : AccountStatus::kIdMismatch;
          }
          if (store_path) {
            std::lock_guard lock(store_mu);
            store << ToStoreLine(rec) << '\n';
            store.flush();
          }
          res.record = std::move(rec);
          break;
        }
      }
    } catch (...) {
      abort = true;
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
    }
  };

  const std::uint32_t workers =
      std::max<std::uint32_t>(1, std::min<std::uint32_t>(config.in_flight,
                                                         static_cast<std::uint32_t>(pending.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> threads;
    for (std::uint32_t w = 0; w < workers; ++w) threads.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

inline std::vector<AccountScores> SuccessfulRecords(const std::vector<FetchResult> &results) {
  std::vector<AccountScores> out;
  for (const auto &r : results) {
    if (r.record) out.push_back(*r.record);
  }
  return out;
}

}  // namespace plens

#endif  // PLENS_FETCH_HPP_
