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

// Pipeline configuration: a flat "key = value" file. '#' starts a comment
// line. Relative paths resolve against the directory of the config file.

#ifndef PLENS_CONFIG_HPP_
#define PLENS_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plens/classifier.hpp"
#include "plens/csv.hpp"
#include "plens/error.hpp"
#include "plens/fetch.hpp"

namespace plens {

namespace fs = std::filesystem;

enum class DistinctMode { kNGram, kUnigram };
enum class FetchMode { kNone, kOffline, kOnline };

struct PipelineConfig {
  // Inputs and outputs.
  fs::path seed_corpus;
  fs::path target_corpus;
  fs::path label_map;
  fs::path stop_list;  // empty: built-in list
  fs::path score_store;
  fs::path output_dir = "plens-out";
  fs::path external_predictions;  // non-empty: predict imports instead of scoring

  // Ingest.
  char tweet_delimiter = ',';
  std::optional<std::string> lang_filter;

  // Classifier.
  TrainConfig train{{1, 2}, 2, 1.0};
  double eval_fraction = 0.05;
  std::uint64_t seed = 42;
  bool stratified = false;

  // Analysis.
  std::vector<int> ngram_orders{2, 3, 4, 5};
  std::size_t top_k = 40;
  std::size_t histogram_bins = 20;
  double alpha = 0.05;
  std::optional<std::uint64_t> user_cap;
  DistinctMode distinct_mode = DistinctMode::kNGram;
  unsigned workers = 4;

  // Score acquisition.
  FetchMode fetch_mode = FetchMode::kNone;
  fs::path fetch_fixture;
  ClientConfig client;

  // Sets one key from its textual value. Relative paths join `base`.
  void Set(const std::string &key, const std::string &value, const fs::path &base = {});

  // Canonical "key=value" lines in key order; the config digest input.
  std::string Canonical() const;

  fs::path Out(const std::string &name) const { return output_dir / name; }
};

namespace detail {
inline std::string Trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &v) {
  if constexpr (std::is_floating_point_v<T>) {
    auto d = csv::ParseDouble(v);
    if (!d) throw FormatError("config: " + key + " expects a number, got '" + v + "'");
    return static_cast<T>(*d);
  } else {
    auto i = csv::ParseInt<T>(v);
    if (!i) throw FormatError("config: " + key + " expects an integer, got '" + v + "'");
    return *i;
  }
}

inline bool ParseBool(const std::string &key, const std::string &v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw FormatError("config: " + key + " expects true/false, got '" + v + "'");
}
}  // namespace detail

inline void PipelineConfig::Set(const std::string &key, const std::string &raw,
                                const fs::path &base) {
  const std::string v = detail::Trim(raw);
  auto path = [&] {
    if (v.empty()) return fs::path();
    fs::path p(v);
    return p.is_relative() && !base.empty() ? base / p : p;
  };
  using detail::ParseNumber;
  if (key == "seed_corpus") {
    seed_corpus = path();
  } else if (key == "target_corpus") {
    target_corpus = path();
  } else if (key == "label_map") {
    label_map = path();
  } else if (key == "stop_list") {
    stop_list = path();
  } else if (key == "score_store") {
    score_store = path();
  } else if (key == "output_dir") {
    output_dir = path();
  } else if (key == "external_predictions") {
    external_predictions = path();
  } else if (key == "tweet_delimiter") {
    if (v == "tab" || v == "\\t") {
      tweet_delimiter = '\t';
    } else if (v == "comma" || v == ",") {
      tweet_delimiter = ',';
    } else if (v.size() == 1) {
      tweet_delimiter = v[0];
    } else {
      throw FormatError("config: tweet_delimiter must be one character");
    }
  } else if (key == "lang_filter") {
    lang_filter = v.empty() || v == "none" ? std::nullopt : std::optional<std::string>(v);
  } else if (key == "n_min") {
    train.n_range.min = ParseNumber<int>(key, v);
  } else if (key == "n_max") {
    train.n_range.max = ParseNumber<int>(key, v);
  } else if (key == "min_count") {
    train.min_count = ParseNumber<int>(key, v);
  } else if (key == "smoothing") {
    train.smoothing = ParseNumber<double>(key, v);
  } else if (key == "eval_fraction") {
    eval_fraction = ParseNumber<double>(key, v);
  } else if (key == "seed") {
    seed = ParseNumber<std::uint64_t>(key, v);
  } else if (key == "stratified") {
    stratified = detail::ParseBool(key, v);
  } else if (key == "ngram_orders") {
    ngram_orders.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      ngram_orders.push_back(ParseNumber<int>(key, detail::Trim(item)));
    }
  } else if (key == "top_k") {
    top_k = ParseNumber<std::size_t>(key, v);
  } else if (key == "histogram_bins") {
    histogram_bins = ParseNumber<std::size_t>(key, v);
  } else if (key == "alpha") {
    alpha = ParseNumber<double>(key, v);
  } else if (key == "user_cap") {
    user_cap = v.empty() || v == "none" ? std::nullopt
                                        : std::optional(ParseNumber<std::uint64_t>(key, v));
  } else if (key == "distinct_mode") {
    if (v == "ngram") {
      distinct_mode = DistinctMode::kNGram;
    } else if (v == "unigram") {
      distinct_mode = DistinctMode::kUnigram;
    } else {
      throw FormatError("config: distinct_mode must be ngram or unigram");
    }
  } else if (key == "workers") {
    workers = ParseNumber<unsigned>(key, v);
  } else if (key == "fetch_mode") {
    if (v == "none") {
      fetch_mode = FetchMode::kNone;
    } else if (v == "offline") {
      fetch_mode = FetchMode::kOffline;
    } else if (v == "online") {
      fetch_mode = FetchMode::kOnline;
    } else {
      throw FormatError("config: fetch_mode must be none, offline or online");
    }
  } else if (key == "fetch_fixture") {
    fetch_fixture = path();
  } else if (key == "fetch_endpoint") {
    client.endpoint = v;
  } else if (key == "credential_env") {
    client.credential_env = v;
  } else if (key == "rate_limit_per_minute") {
    client.rate_limit_per_minute = ParseNumber<std::uint32_t>(key, v);
  } else if (key == "retry_cap") {
    client.retry_cap = ParseNumber<std::uint32_t>(key, v);
  } else if (key == "backoff_base_seconds") {
    client.backoff_base_seconds = ParseNumber<double>(key, v);
  } else if (key == "in_flight") {
    client.in_flight = ParseNumber<std::uint32_t>(key, v);
  } else {
    throw FormatError("config: unknown key '" + key + "'");
  }
}

inline std::string PipelineConfig::Canonical() const {
  std::map<std::string, std::string> kv;
  auto orders = [&] {
    std::string s;
    for (std::size_t i = 0; i < ngram_orders.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(ngram_orders[i]);
    }
    return s;
  };
  kv["seed_corpus"] = seed_corpus.generic_string();
  kv["target_corpus"] = target_corpus.generic_string();
  kv["label_map"] = label_map.generic_string();
  kv["stop_list"] = stop_list.generic_string();
  kv["score_store"] = score_store.generic_string();
  kv["external_predictions"] = external_predictions.generic_string();
  kv["tweet_delimiter"] = tweet_delimiter == '\t' ? "tab" : std::string(1, tweet_delimiter);
  kv["lang_filter"] = lang_filter.value_or("none");
  kv["n_min"] = std::to_string(train.n_range.min);
  kv["n_max"] = std::to_string(train.n_range.max);
  kv["min_count"] = std::to_string(train.min_count);
  kv["smoothing"] = csv::FormatDouble(train.smoothing);
  kv["eval_fraction"] = csv::FormatDouble(eval_fraction);
  kv["seed"] = std::to_string(seed);
  kv["stratified"] = stratified ? "true" : "false";
  kv["ngram_orders"] = orders();
  kv["top_k"] = std::to_string(top_k);
  kv["histogram_bins"] = std::to_string(histogram_bins);
  kv["alpha"] = csv::FormatDouble(alpha);
  kv["user_cap"] = user_cap ? std::to_string(*user_cap) : "none";
  kv["distinct_mode"] = distinct_mode == DistinctMode::kNGram ? "ngram" : "unigram";
  kv["fetch_mode"] = fetch_mode == FetchMode::kNone      ? "none"
                     : fetch_mode == FetchMode::kOffline ? "offline"
                                                         : "online";
  kv["fetch_fixture"] = fetch_fixture.generic_string();
  kv["fetch_endpoint"] = client.endpoint;
  kv["credential_env"] = client.credential_env;
  kv["rate_limit_per_minute"] = std::to_string(client.rate_limit_per_minute);
  kv["retry_cap"] = std::to_string(client.retry_cap);
  kv["backoff_base_seconds"] = csv::FormatDouble(client.backoff_base_seconds);
  kv["in_flight"] = std::to_string(client.in_flight);
  // output_dir and workers do not affect results and are left out.
  std::string out;
  for (const auto &[k, val] : kv) out += k + "=" + val + "\n";
  return out;
}

// Parses "key = value" lines from `in`. Relative paths join `base`.
inline void ApplyConfigText(PipelineConfig &cfg, std::istream &in, const fs::path &base,
                            const std::string &name) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::Trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError(name + ":" + std::to_string(line_no) + ": expected key = value");
    }
    cfg.Set(detail::Trim(t.substr(0, eq)), t.substr(eq + 1), base);
  }
}

inline PipelineConfig LoadConfig(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config: " + path.string());
  PipelineConfig cfg;
  ApplyConfigText(cfg, in, path.parent_path(), path.string());
  return cfg;
}

// Checks cross-field constraints that single keys cannot.
inline void ValidateConfig(const PipelineConfig &cfg) {
  if (cfg.train.n_range.min < 1 || cfg.train.n_range.max < cfg.train.n_range.min) {
    throw UsageError("config: need 1 <= n_min <= n_max");
  }
  if (cfg.train.min_count < 1) throw UsageError("config: min_count must be >= 1");
  if (!(cfg.train.smoothing > 0)) throw UsageError("config: smoothing must be > 0");
  if (!(cfg.eval_fraction > 0 && cfg.eval_fraction < 1)) {
    throw UsageError("config: eval_fraction must lie in (0, 1)");
  }
  if (cfg.ngram_orders.empty()) throw UsageError("config: ngram_orders is empty");
  for (int n : cfg.ngram_orders) {
    if (n < 1) throw UsageError("config: ngram orders must be >= 1");
  }
  if (cfg.top_k < 1) throw UsageError("config: top_k must be >= 1");
  if (cfg.histogram_bins < 1) throw UsageError("config: histogram_bins must be >= 1");
  if (!(cfg.alpha > 0 && cfg.alpha < 1)) throw UsageError("config: alpha must lie in (0, 1)");
  if (cfg.user_cap && *cfg.user_cap < 1) throw UsageError("config: user_cap must be >= 1");
  if (cfg.output_dir.empty()) throw UsageError("config: output_dir is empty");
}

}  // namespace plens

#endif  // PLENS_CONFIG_HPP_
