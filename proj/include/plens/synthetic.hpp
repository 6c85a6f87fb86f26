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

// Deterministic synthetic data: a desk-scale demo fixture covering every
// pipeline input, and token corpora for property tests and benchmarks.

#ifndef PLENS_SYNTHETIC_HPP_
#define PLENS_SYNTHETIC_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "plens/botscores.hpp"
#include "plens/csv.hpp"
#include "plens/ngram.hpp"
#include "plens/random.hpp"
#include "plens/timeutil.hpp"

namespace plens::synthetic {

namespace fs = std::filesystem;

inline constexpr std::array<std::string_view, 24> kNeutralWords = {
    "stay",     "safe",      "hope",       "nurses",     "hospital",  "#westandwithitaly",
    "@smartdissent", "@wearealpa", "together", "vaccine", "research", "testing",
    "flatten",  "curve",     "grateful",   "doctors",    "worried",   "alarming",
    "cases",    "lockdown",  "#stayhome",  "recovery",   "kindness",  "😷"};

inline constexpr std::array<std::string_view, 24> kProWords = {
    "act",          "must",       "#moneyforthepeople", "$2000/month", "#papol",
    "#txpolitics",  "@openletterbot", "western",       "hypocrisy",   "capitalist",
    "propaganda",   "socialism",  "solidarity",         "imperialism", "debunking",
    "comrades",     "sign",       "petition",           "demand",      "now!",
    "#todaynncoronavirus", "workers", "struggle",       "✊"};

inline constexpr std::array<std::string_view, 16> kSharedWords = {
    "covid19", "#coronavirus", "people", "today", "world", "news", "pandemic", "virus",
    "government", "health", "china", "week", "update", "city", "time", "day"};

inline constexpr std::array<std::string_view, 8> kFillerStopWords = {
    "the", "and", "of", "to", "is", "in", "The", "we"};

inline std::string_view Pick(Rng &rng, std::span<const std::string_view> pool) {
  return pool[rng.Below(pool.size())];
}

// A sentence leaning toward `label`'s vocabulary with some shared words and
// stop words mixed in.
inline std::string Sentence(Rng &rng, Label label, double lean, std::size_t min_words,
                            std::size_t max_words) {
  const std::size_t len = min_words + rng.Below(max_words - min_words + 1);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) {
    if (i) out.push_back(' ');
    const double u = rng.Uniform();
    std::string_view w;
    if (u < 0.15) {
      w = Pick(rng, kFillerStopWords);
    } else if (u < 0.35) {
      w = Pick(rng, kSharedWords);
    } else {
      const bool own = rng.Uniform() < lean;
      const Label from = own ? label : 1 - label;
      w = from == 1 ? Pick(rng, kProWords) : Pick(rng, kNeutralWords);
    }
    out += w;
  }
  return out;
}

struct FixturePaths {
  fs::path dir;
  fs::path seed_corpus;
  fs::path label_map;
  fs::path target_corpus;
  fs::path score_store;
  fs::path config;
};

struct FixtureOptions {
  std::uint64_t seed = 7;
  std::size_t reddit_titles = 1200;
  std::size_t users = 400;
};

// Writes reddit_titles.jsonl, seed_labels.tsv, tweets.csv, scores.jsonl and
// plens.conf into `dir`.
inline FixturePaths WriteDemoFixture(const fs::path &dir, const FixtureOptions &opt = {}) {
  fs::create_directories(dir);
  FixturePaths p{dir,
                 dir / "reddit_titles.jsonl",
                 dir / "seed_labels.tsv",
                 dir / "tweets.csv",
                 dir / "scores.jsonl",
                 dir / "plens.conf"};
  Rng rng(opt.seed);

  {
    std::ofstream out(p.label_map, std::ios::binary | std::ios::trunc);
    out << "# community<TAB>label\n"
        << "/r/Coronavirus/\t0\n" << "technology\t0\n" << "worldnews\t0\n" << "science\t0\n"
        << "/r/Sino\t1\n" << "communism\t1\n" << "GenZedong\t1\n" << "socialism\t1\n";
  }

  {
    static constexpr std::array<std::string_view, 4> kNeutral = {"Coronavirus", "technology",
                                                                 "worldnews", "science"};
    static constexpr std::array<std::string_view, 4> kPro = {"Sino", "communism", "GenZedong",
                                                             "socialism"};
    static constexpr std::array<std::string_view, 2> kUnmapped = {"pics", "cooking"};
    std::ofstream out(p.seed_corpus, std::ios::binary | std::ios::trunc);
    std::string last;
    for (std::size_t i = 0; i < opt.reddit_titles; ++i) {
      const double u = rng.Uniform();
      nlohmann::json rec;
      if (u < 0.03) {
        rec["subreddit"] = std::string(Pick(rng, kUnmapped));
        rec["title"] = Sentence(rng, 0, 0.5, 3, 8);
      } else {
        const Label label = u < 0.6 ? 0 : 1;
        rec["subreddit"] = std::string(label == 1 ? Pick(rng, kPro) : Pick(rng, kNeutral));
        rec["title"] = Sentence(rng, label, 0.9, 4, 12);
      }
      std::string line = rec.dump();
      if (i % 97 == 5 && !last.empty()) line = last;  // exact duplicate
      out << line << '\n';
      last = line;
      if (i == opt.reddit_titles / 2) out << "{\"subreddit\": \"Sino\"}\n";  // malformed
    }
  }

  // Users with heavy-tailed activity; a user's leaning drives both tweet
  // vocabulary and bot-score distribution.
  std::vector<std::string> users;
  std::vector<Label> leaning;
  for (std::size_t u = 0; u < opt.users; ++u) {
    users.push_back("u" + std::to_string(100000 + u));
    leaning.push_back(rng.Uniform() < 0.4 ? 1 : 0);
  }
  {
    std::ofstream out(p.target_corpus, std::ios::binary | std::ios::trunc);
    csv::WriteRecord(out, {"id", "user_id", "text", "lang", "created_at"});
    std::uint64_t next_id = 1000000;
    const UtcSeconds march{std::chrono::sys_days{std::chrono::year{2020} / 3 / 1}};
    for (std::size_t u = 0; u < users.size(); ++u) {
      const double rank = static_cast<double>(u + 1);
      auto n = static_cast<std::size_t>(std::floor(300.0 / std::pow(rank, 1.2))) + 1 +
               rng.Below(3);
      if (leaning[u] == 1) n = n * 2 + 1;
      for (std::size_t k = 0; k < n; ++k) {
        std::string text = Sentence(rng, leaning[u], 0.85, 3, 14);
        if (rng.Below(25) == 0) text += "\nRT this";
        const bool french = rng.Below(40) == 0;
        if (french) text = "nous restons chez nous";
        const auto ts = march + std::chrono::seconds{static_cast<std::int64_t>(rng.Below(31 * 86400))};
        const std::string id = std::to_string(next_id++);
        csv::WriteRecord(out, {id, users[u], text, french ? "fr" : "en", FormatIso8601(ts)});
        if (rng.Below(150) == 0) {
          csv::WriteRecord(out, {id, users[u], text, "en", FormatIso8601(ts)});  // dup id
        }
      }
    }
    csv::WriteRecord(out, {std::to_string(next_id++), users[0], "", "en", ""});  // empty
  }

  {
    std::ofstream out(p.score_store, std::ios::binary | std::ios::trunc);
    const UtcSeconds fetched{std::chrono::sys_days{std::chrono::year{2020} / 7 / 15}};
    // Per score type exponents: values are u^a, so a < 1 skews high.
    static constexpr std::array<double, 7> kExpPro = {0.45, 0.5, 0.55, 0.6, 0.5, 0.45, 0.55};
    static constexpr std::array<double, 7> kExpNeutral = {1.6, 1.5, 1.4, 1.3, 1.5, 1.6, 1.4};
    for (std::size_t u = 0; u < users.size(); ++u) {
      AccountScores a;
      a.account_id = users[u];
      a.fetched_at = fetched + std::chrono::seconds{static_cast<std::int64_t>(u) * 7};
      const auto roll = rng.Below(100);
      if (roll < 8) {
        a.status = AccountStatus::kSuspended;
      } else if (roll < 9) {
        a.status = AccountStatus::kIdMismatch;
      } else {
        ScoreVector v{};
        for (std::size_t t = 0; t < 7; ++t) {
          const double e = leaning[u] == 1 ? kExpPro[t] : kExpNeutral[t];
          // Quantize like a service reporting two decimals.
          v[t] = std::round(std::pow(rng.Uniform(), e) * 100.0) / 100.0;
        }
        a.scores = v;
      }
      out << ToStoreLine(a) << '\n';
    }
  }

  {
    std::ofstream out(p.config, std::ios::binary | std::ios::trunc);
    out << "# Demo pipeline configuration. Paths are relative to this file.\n"
        << "seed_corpus = reddit_titles.jsonl\n"
        << "label_map = seed_labels.tsv\n"
        << "target_corpus = tweets.csv\n"
        << "score_store = scores.jsonl\n"
        << "output_dir = out\n"
        << "lang_filter = en\n"
        << "seed = 42\n"
        << "eval_fraction = 0.05\n"
        << "ngram_orders = 2,3,4,5\n"
        << "top_k = 40\n"
        << "user_cap = 1\n"
        << "histogram_bins = 20\n"
        << "alpha = 0.05\n";
  }
  return p;
}

// Random grouped token documents over a Zipf-ish vocabulary of `vocab`
// word types. Lengths are uniform in [0, max_len].
inline std::vector<GroupedTokens> RandomGroupedDocs(Rng &rng, std::size_t n_docs,
                                                    std::size_t vocab, std::size_t max_len,
                                                    std::size_t n_users = 50) {
  std::vector<GroupedTokens> docs;
  docs.reserve(n_docs);
  for (std::size_t i = 0; i < n_docs; ++i) {
    GroupedTokens d;
    d.label = static_cast<Label>(rng.Below(2));
    d.user_id = "user" + std::to_string(rng.Below(n_users));
    const std::size_t len = rng.Below(max_len + 1);
    for (std::size_t k = 0; k < len; ++k) {
      // Squaring a uniform skews toward frequent low-index words.
      const double u = rng.Uniform();
      const auto w = static_cast<std::size_t>(u * u * static_cast<double>(vocab));
      d.tokens.push_back("w" + std::to_string(w));
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace plens::synthetic

#endif  // PLENS_SYNTHETIC_HPP_
