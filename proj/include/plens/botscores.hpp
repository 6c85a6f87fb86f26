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

// Per-account bot scores: the line-delimited score store, account filtering
// and the account-level grouping that feeds the distribution tests.

#ifndef PLENS_BOTSCORES_HPP_
#define PLENS_BOTSCORES_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "plens/corpus.hpp"
#include "plens/error.hpp"
#include "plens/metrics.hpp"
#include "plens/score_types.hpp"
#include "plens/stats.hpp"
#include "plens/timeutil.hpp"

namespace plens {

enum class AccountStatus { kOk, kSuspended, kIdMismatch };

inline std::string_view StatusName(AccountStatus s) {
  switch (s) {
    case AccountStatus::kOk: return "ok";
    case AccountStatus::kSuspended: return "suspended";
    case AccountStatus::kIdMismatch: return "id_mismatch";
  }
  return "";
}

inline std::optional<AccountStatus> ParseStatus(std::string_view s) {
  if (s == "ok") return AccountStatus::kOk;
  if (s == "suspended") return AccountStatus::kSuspended;
  if (s == "id_mismatch") return AccountStatus::kIdMismatch;
  return std::nullopt;
}

using ScoreVector = std::array<double, 7>;  // indexed by ScoreType

struct AccountScores {
  std::string account_id;
  AccountStatus status = AccountStatus::kOk;
  std::optional<ScoreVector> scores;  // present iff status == kOk
  UtcSeconds fetched_at{};

  double Score(ScoreType t) const { return scores->at(static_cast<std::size_t>(t)); }

  friend bool operator==(const AccountScores &, const AccountScores &) = default;
};

inline bool IsValid(const AccountScores &a) {
  if (a.account_id.empty()) return false;
  if (a.status != AccountStatus::kOk) return !a.scores.has_value();
  if (!a.scores) return false;
  return std::all_of(a.scores->begin(), a.scores->end(),
                     [](double v) { return v >= 0.0 && v <= 1.0; });
}

// Store / fixture record ------------------------------------------------------

inline nlohmann::json ToJson(const AccountScores &a) {
  nlohmann::json j;
  j["account_id"] = a.account_id;
  j["status"] = StatusName(a.status);
  j["fetched_at"] = FormatIso8601(a.fetched_at);
  if (a.scores) {
    nlohmann::json s = nlohmann::json::object();
    for (auto t : kAllScoreTypes) s[std::string(ScoreKey(t))] = a.Score(t);
    j["scores"] = s;
  }
  return j;
}

inline std::string ToStoreLine(const AccountScores &a) { return ToJson(a).dump(); }

// Parses and validates one record. Subscore aliases are canonicalized.
inline std::optional<AccountScores> ParseScoreRecord(std::string_view line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto str = [&](const char *key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };
  AccountScores a;
  auto id = str("account_id");
  auto status = str("status");
  auto fetched = str("fetched_at");
  if (!id || id->empty() || !status || !fetched) return std::nullopt;
  auto st = ParseStatus(*status);
  auto ts = ParseIso8601(*fetched);
  if (!st || !ts) return std::nullopt;
  a.account_id = *id;
  a.status = *st;
  a.fetched_at = *ts;
  auto sit = j.find("scores");
  const bool has_scores = sit != j.end() && !sit->is_null() &&
                          !(sit->is_object() && sit->empty());
  if (a.status != AccountStatus::kOk) {
    if (has_scores) return std::nullopt;
    return a;
  }
  if (!has_scores || !sit->is_object()) return std::nullopt;
  ScoreVector v{};
  std::array<bool, 7> seen{};
  for (auto &[key, value] : sit->items()) {
    auto t = ParseScoreType(key);
    if (!t || !value.is_number()) return std::nullopt;
    const auto idx = static_cast<std::size_t>(*t);
    if (seen[idx]) return std::nullopt;
    seen[idx] = true;
    v[idx] = value.get<double>();
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return std::nullopt;
  a.scores = v;
  if (!IsValid(a)) return std::nullopt;
  return a;
}

struct LoadReport {
  std::uint64_t read = 0;
  std::uint64_t ok = 0;
  std::uint64_t suspended = 0;
  std::uint64_t id_mismatch = 0;
  std::uint64_t rejected = 0;
  std::uint64_t superseded = 0;  // earlier records replaced by a later one

  bool Conserved() const {
    return read == ok + suspended + id_mismatch + rejected + superseded;
  }
};

// Reads a score store or fixture. A later record for the same account
// replaces the earlier one in place, so output order is first appearance.
inline std::pair<std::vector<AccountScores>, LoadReport> LoadScores(std::istream &in) {
  std::vector<AccountScores> out;
  std::unordered_map<std::string, std::size_t> position;
  LoadReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line)) continue;
    ++report.read;
    auto rec = ParseScoreRecord(line);
    if (!rec) {
      ++report.rejected;
      continue;
    }
    auto [it, inserted] = position.emplace(rec->account_id, out.size());
    if (inserted) {
      out.push_back(std::move(*rec));
    } else {
      out[it->second] = std::move(*rec);
      ++report.superseded;
    }
  }
  for (const auto &a : out) {
    switch (a.status) {
      case AccountStatus::kOk: ++report.ok; break;
      case AccountStatus::kSuspended: ++report.suspended; break;
      case AccountStatus::kIdMismatch: ++report.id_mismatch; break;
    }
  }
  return {std::move(out), report};
}

inline std::pair<std::vector<AccountScores>, LoadReport> LoadScores(
    const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read score store: " + path.string());
  return LoadScores(in);
}

inline void WriteScores(const std::vector<AccountScores> &scores, std::ostream &out) {
  for (const auto &a : scores) out << ToStoreLine(a) << '\n';
}

// Filtering -------------------------------------------------------------------

struct RemovalReport {
  std::uint64_t suspended = 0;
  std::uint64_t id_mismatch = 0;

  std::uint64_t Total() const { return suspended + id_mismatch; }
};

inline std::pair<std::vector<AccountScores>, RemovalReport> FilterAccounts(
    std::span<const AccountScores> scores) {
  std::vector<AccountScores> kept;
  RemovalReport removed;
  for (const auto &a : scores) {
    switch (a.status) {
      case AccountStatus::kOk: kept.push_back(a); break;
      case AccountStatus::kSuspended: ++removed.suspended; break;
      case AccountStatus::kIdMismatch: ++removed.id_mismatch; break;
    }
  }
  return {std::move(kept), removed};
}

// Grouping --------------------------------------------------------------------

struct AccountGroup {
  std::string account_id;
  std::optional<Label> label;  // nullopt: excluded by an exact tie
  std::uint64_t n_tweets = 0;
  std::uint64_t n_label1 = 0;
};

// Strict majority of the account's tweet labels; an exact tie is excluded.
inline AccountGroup AccountGroupLabel(std::string account_id,
                                      std::span<const PredictionRecord> tweets) {
  if (tweets.empty()) throw std::invalid_argument("account has no predicted tweets");
  AccountGroup g;
  g.account_id = std::move(account_id);
  g.n_tweets = tweets.size();
  for (const auto &p : tweets) g.n_label1 += p.label == 1 ? 1 : 0;
  if (2 * g.n_label1 > g.n_tweets) {
    g.label = 1;
  } else if (2 * g.n_label1 < g.n_tweets) {
    g.label = 0;
  }
  return g;
}

// Groups predictions by the author of each predicted document. Predictions
// whose doc_id has no known author are ignored. Output is sorted by account.
inline std::vector<AccountGroup> GroupAccounts(
    std::span<const PredictionRecord> predictions,
    const std::unordered_map<std::string, std::string> &author_of_doc) {
  std::map<std::string, std::vector<PredictionRecord>> by_account;
  for (const auto &p : predictions) {
    auto it = author_of_doc.find(p.doc_id);
    if (it == author_of_doc.end()) continue;
    by_account[it->second].push_back(p);
  }
  std::vector<AccountGroup> out;
  out.reserve(by_account.size());
  for (const auto &[account, tweets] : by_account) {
    out.push_back(AccountGroupLabel(account, tweets));
  }
  return out;
}

// Pairs every ok account with its non-excluded group, in score order.
inline std::vector<std::pair<AccountScores, AccountGroup>> JoinScoresWithGroups(
    std::span<const AccountScores> kept, std::span<const AccountGroup> groups) {
  std::unordered_map<std::string, const AccountGroup *> by_id;
  for (const auto &g : groups) by_id.emplace(g.account_id, &g);
  std::vector<std::pair<AccountScores, AccountGroup>> out;
  for (const auto &a : kept) {
    if (a.status != AccountStatus::kOk) continue;
    auto it = by_id.find(a.account_id);
    if (it == by_id.end() || !it->second->label) continue;
    out.emplace_back(a, *it->second);
  }
  return out;
}

// Seven score types times two groups; every type sees the same accounts.
inline std::map<ScoreType, GroupSamples> GroupScoreSamples(
    std::span<const std::pair<AccountScores, AccountGroup>> accounts) {
  std::array<std::array<std::vector<double>, 2>, 7> values;
  for (const auto &[scores, group] : accounts) {
    if (scores.status != AccountStatus::kOk || !scores.scores) {
      throw std::invalid_argument("account " + scores.account_id + " has no scores");
    }
    if (!group.label) {
      throw std::invalid_argument("account " + scores.account_id + " is excluded");
    }
    for (auto t : kAllScoreTypes) {
      values[static_cast<std::size_t>(t)][static_cast<std::size_t>(*group.label)].push_back(
          scores.Score(t));
    }
  }
  if (values[0][0].empty() || values[0][1].empty()) {
    throw DataError("degenerate grouping: a group has no scored accounts");
  }
  std::map<ScoreType, GroupSamples> out;
  for (auto t : kAllScoreTypes) {
    auto &v = values[static_cast<std::size_t>(t)];
    out.emplace(t, GroupSamples{Sample(std::move(v[0]), "0"), Sample(std::move(v[1]), "1")});
  }
  return out;
}

}  // namespace plens

#endif  // PLENS_BOTSCORES_HPP_
