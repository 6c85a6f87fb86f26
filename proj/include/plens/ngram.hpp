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

// Distinct n-gram analysis: per-group occurrence counts, removal of every
// n-gram that occurs in both groups, and ranking of what survives.

#ifndef PLENS_NGRAM_HPP_
#define PLENS_NGRAM_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "plens/corpus.hpp"
#include "plens/csv.hpp"
#include "plens/error.hpp"
#include "plens/text.hpp"

namespace plens {

// One preprocessed document with its group and author.
struct GroupedTokens {
  TokenSequence tokens;
  Label label = 0;
  std::string user_id;
};

struct NGramTable {
  int n = 1;
  Label group_label = 0;
  std::uint64_t doc_count = 0;
  std::unordered_map<std::string, std::uint64_t> counts;

  std::uint64_t Total() const {
    std::uint64_t s = 0;
    for (const auto &[_, c] : counts) s += c;
    return s;
  }

  friend bool operator==(const NGramTable &, const NGramTable &) = default;
};

using NGramTablePair = std::array<NGramTable, 2>;

inline NGramTablePair EmptyTables(int n) {
  NGramTablePair t;
  t[0].n = t[1].n = n;
  t[0].group_label = 0;
  t[1].group_label = 1;
  return t;
}

inline void CheckOrder(int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
}

inline std::size_t GroupIndex(Label label) {
  if (label != 0 && label != 1) throw std::invalid_argument("group label must be 0 or 1");
  return static_cast<std::size_t>(label);
}

namespace detail {
inline void AddWindows(NGramTable &table, const TokenSequence &tokens) {
  const auto un = static_cast<std::size_t>(table.n);
  ++table.doc_count;
  if (tokens.size() < un) return;
  for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
    ++table.counts[JoinTokens(tokens, i, un)];
  }
}
}  // namespace detail

// Sliding-window occurrence counts per group. Windows never cross documents.
inline NGramTablePair CountNGrams(std::span<const GroupedTokens> docs, int n) {
  CheckOrder(n);
  auto tables = EmptyTables(n);
  for (const auto &d : docs) {
    detail::AddWindows(tables[GroupIndex(d.label)], d.tokens);
  }
  return tables;
}

// Adds `from` into `into`. Both must have the same n.
inline void MergeInto(NGramTablePair &into, const NGramTablePair &from) {
  for (std::size_t g = 0; g < 2; ++g) {
    if (into[g].n != from[g].n) throw std::invalid_argument("n-gram order mismatch");
    into[g].doc_count += from[g].doc_count;
    for (const auto &[k, c] : from[g].counts) into[g].counts[k] += c;
  }
}

// Counts contiguous partitions on up to `workers` threads and merges them.
// The result equals CountNGrams on the whole stream.
inline NGramTablePair CountNGramsParallel(std::span<const GroupedTokens> docs, int n,
                                          unsigned workers) {
  CheckOrder(n);
  for (const auto &d : docs) GroupIndex(d.label);  // throw here, not on a worker
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(docs.size())));
  if (workers <= 1) return CountNGrams(docs, n);
  std::vector<NGramTablePair> partial(workers);
  {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (docs.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(docs.size(), w * chunk);
      const std::size_t end = std::min(docs.size(), begin + chunk);
      threads.emplace_back([&, w, begin, end] {
        partial[w] = CountNGrams(docs.subspan(begin, end - begin), n);
      });
    }
  }
  auto merged = EmptyTables(n);
  for (const auto &p : partial) MergeInto(merged, p);
  return merged;
}

// Each (user, n-gram) pair contributes at most `cap` occurrences. No cap
// reproduces CountNGrams exactly.
inline NGramTablePair PerUserCappedCounts(std::span<const GroupedTokens> docs, int n,
                                          std::optional<std::uint64_t> cap) {
  CheckOrder(n);
  if (cap && *cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (!cap) return CountNGrams(docs, n);
  auto tables = EmptyTables(n);
  // (group, user) -> n-gram -> raw count.
  std::array<std::unordered_map<std::string, std::unordered_map<std::string, std::uint64_t>>, 2>
      per_user;
  const auto un = static_cast<std::size_t>(n);
  for (const auto &d : docs) {
    const auto g = GroupIndex(d.label);
    ++tables[g].doc_count;
    if (d.tokens.size() < un) continue;
    auto &user_counts = per_user[g][d.user_id];
    for (std::size_t i = 0; i + un <= d.tokens.size(); ++i) {
      ++user_counts[JoinTokens(d.tokens, i, un)];
    }
  }
  for (std::size_t g = 0; g < 2; ++g) {
    for (const auto &[user, grams] : per_user[g]) {
      for (const auto &[k, c] : grams) tables[g].counts[k] += std::min(c, *cap);
    }
  }
  return tables;
}

// Removes every token that occurs in both groups before any n-gram is formed.
// This is the unigram-level reading of the distinct test.
inline std::vector<GroupedTokens> DropSharedUnigrams(std::span<const GroupedTokens> docs) {
  std::array<std::unordered_set<std::string>, 2> vocab;
  for (const auto &d : docs) {
    for (const auto &t : d.tokens) vocab[GroupIndex(d.label)].insert(t);
  }
  std::vector<GroupedTokens> out;
  out.reserve(docs.size());
  for (const auto &d : docs) {
    GroupedTokens kept{{}, d.label, d.user_id};
    for (const auto &t : d.tokens) {
      if (!(vocab[0].count(t) && vocab[1].count(t))) kept.tokens.push_back(t);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

using RankedNGrams = std::vector<std::pair<std::string, std::uint64_t>>;

struct DistinctNGramReport {
  int n = 1;
  std::array<RankedNGrams, 2> groups;  // count desc, then n-gram asc
  std::uint64_t dropped_shared = 0;

  friend bool operator==(const DistinctNGramReport &, const DistinctNGramReport &) = default;
};

inline void RankInPlace(RankedNGrams &list) {
  std::sort(list.begin(), list.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

inline DistinctNGramReport DistinctFilter(const NGramTable &table0, const NGramTable &table1) {
  if (table0.n != table1.n) throw std::invalid_argument("distinct filter: mismatched n");
  DistinctNGramReport r;
  r.n = table0.n;
  for (const auto &[k, c] : table0.counts) {
    if (table1.counts.count(k)) {
      ++r.dropped_shared;
    } else {
      r.groups[0].emplace_back(k, c);
    }
  }
  for (const auto &[k, c] : table1.counts) {
    if (!table0.counts.count(k)) r.groups[1].emplace_back(k, c);
  }
  RankInPlace(r.groups[0]);
  RankInPlace(r.groups[1]);
  return r;
}

inline DistinctNGramReport TopK(DistinctNGramReport report, std::size_t k) {
  if (k < 1) throw std::invalid_argument("top_k requires k >= 1");
  for (auto &list : report.groups) {
    if (list.size() > k) list.resize(k);
  }
  return report;
}

// Ratio of the top distinct count in group 1 to that in group 0.
inline double FrequencyRatio(const DistinctNGramReport &report) {
  if (report.groups[0].empty() || report.groups[1].empty()) {
    throw DataError("no distinct n-grams in one of the groups");
  }
  return static_cast<double>(report.groups[1].front().second) /
         static_cast<double>(report.groups[0].front().second);
}

inline void WriteNGramReport(const DistinctNGramReport &report, std::ostream &out) {
  csv::WriteRecord(out, {"group", "rank", "ngram", "count"});
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t i = 0; i < report.groups[g].size(); ++i) {
      csv::WriteRecord(out, {std::to_string(g), std::to_string(i + 1),
                             report.groups[g][i].first,
                             std::to_string(report.groups[g][i].second)});
    }
  }
}

}  // namespace plens

#endif  // PLENS_NGRAM_HPP_
