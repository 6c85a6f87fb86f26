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

// Baseline sentence classifier: a multinomial class-conditional model with
// additive smoothing over token n-grams. It stands in for a fine-tuned
// transformer; external model output can be imported instead (metrics.hpp).

#ifndef PLENS_CLASSIFIER_HPP_
#define PLENS_CLASSIFIER_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "plens/corpus.hpp"
#include "plens/csv.hpp"
#include "plens/digest.hpp"
#include "plens/error.hpp"
#include "plens/random.hpp"
#include "plens/text.hpp"

namespace plens {

struct NGramRange {
  int min = 1;
  int max = 2;

  friend bool operator==(const NGramRange &, const NGramRange &) = default;
};

// All n-grams of `tokens` for n in `range`, space-joined, in window order.
inline std::vector<std::string> ExtractFeatures(const TokenSequence &tokens,
                                                NGramRange range) {
  std::vector<std::string> out;
  for (int n = range.min; n <= range.max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (tokens.size() < un) continue;
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      out.push_back(JoinTokens(tokens, i, un));
    }
  }
  return out;
}

// Dense feature indices 0..V-1 in lexicographic feature order.
class VocabIndex {
 public:
  VocabIndex() = default;
  explicit VocabIndex(std::vector<std::string> sorted_features)
      : features_(std::move(sorted_features)) {
    index_.reserve(features_.size());
    for (std::size_t i = 0; i < features_.size(); ++i) {
      index_.emplace(features_[i], i);
    }
  }

  std::optional<std::size_t> Find(const std::string &feature) const {
    auto it = index_.find(feature);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return features_.size(); }
  const std::vector<std::string> &features() const { return features_; }

 private:
  std::vector<std::string> features_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TrainConfig {
  NGramRange n_range{1, 2};
  int min_count = 2;
  double smoothing = 1.0;
};

struct TrainExample {
  TokenSequence tokens;
  Label label = 0;
};

struct ModelParams {
  TrainConfig config;
  VocabIndex vocab;
  std::array<std::vector<double>, 2> log_weights;  // per class, length V
  std::array<double, 2> log_priors{};
  std::string train_config_digest;
};

inline std::string TrainDigest(const std::vector<TrainExample> &train,
                               const TrainConfig &cfg) {
  Sha256 h;
  h.Update("n_min=" + std::to_string(cfg.n_range.min) +
           ";n_max=" + std::to_string(cfg.n_range.max) +
           ";min_count=" + std::to_string(cfg.min_count) +
           ";smoothing=" + csv::FormatDouble(cfg.smoothing) + "\n");
  for (const auto &ex : train) {
    h.Update(std::to_string(ex.label)).Update("\t").Update(JoinTokens(ex.tokens)).Update("\n");
  }
  return h.HexDigest();
}

inline ModelParams TrainBaseline(const std::vector<TrainExample> &train,
                                 const TrainConfig &cfg) {
  if (cfg.n_range.min < 1 || cfg.n_range.max < cfg.n_range.min) {
    throw std::invalid_argument("invalid n-gram range");
  }
  if (cfg.min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  if (!(cfg.smoothing > 0) || !std::isfinite(cfg.smoothing)) {
    throw std::invalid_argument("smoothing must be > 0");
  }
  std::array<std::uint64_t, 2> docs_per_class{};
  for (const auto &ex : train) {
    if (ex.label != 0 && ex.label != 1) throw std::invalid_argument("label must be 0 or 1");
    ++docs_per_class[static_cast<std::size_t>(ex.label)];
  }
  if (docs_per_class[0] == 0 || docs_per_class[1] == 0) {
    throw DataError("degenerate training set: both classes are required");
  }

  // Per-feature counts for class 0 and class 1.
  std::map<std::string, std::array<std::uint64_t, 2>> counts;
  for (const auto &ex : train) {
    for (auto &f : ExtractFeatures(ex.tokens, cfg.n_range)) {
      ++counts[std::move(f)][static_cast<std::size_t>(ex.label)];
    }
  }
  std::vector<std::string> kept;
  std::vector<std::array<std::uint64_t, 2>> kept_counts;
  std::array<double, 2> totals{};
  for (const auto &[feature, c] : counts) {
    if (c[0] + c[1] < static_cast<std::uint64_t>(cfg.min_count)) continue;
    kept.push_back(feature);
    kept_counts.push_back(c);
    totals[0] += static_cast<double>(c[0]);
    totals[1] += static_cast<double>(c[1]);
  }
  if (kept.empty()) {
    throw DataError("empty vocabulary: no feature reaches min_count");
  }

  ModelParams model;
  model.config = cfg;
  model.vocab = VocabIndex(std::move(kept));
  const double v = static_cast<double>(model.vocab.size());
  const double n_docs = static_cast<double>(docs_per_class[0] + docs_per_class[1]);
  for (std::size_t c = 0; c < 2; ++c) {
    model.log_priors[c] = std::log(static_cast<double>(docs_per_class[c]) / n_docs);
    const double denom = std::log(totals[c] + cfg.smoothing * v);
    auto &w = model.log_weights[c];
    w.resize(model.vocab.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = std::log(static_cast<double>(kept_counts[i][c]) + cfg.smoothing) - denom;
    }
  }
  model.train_config_digest = TrainDigest(train, cfg);
  return model;
}

inline std::vector<TrainExample> ToExamples(const std::vector<LabeledDocument> &docs,
                                            const StopList &stop) {
  std::vector<TrainExample> out;
  out.reserve(docs.size());
  for (const auto &d : docs) out.push_back({Preprocess(d.doc.text, stop), d.label});
  return out;
}

namespace detail {
inline std::array<double, 2> ClassLogScores(const ModelParams &model,
                                            const TokenSequence &tokens) {
  std::array<double, 2> s = model.log_priors;
  for (const auto &f : ExtractFeatures(tokens, model.config.n_range)) {
    if (auto idx = model.vocab.Find(f)) {
      s[0] += model.log_weights[0][*idx];
      s[1] += model.log_weights[1][*idx];
    }
  }
  return s;
}
}  // namespace detail

// Posterior probability of class 1. Out-of-vocabulary n-grams are ignored.
inline double PredictProba(const ModelParams &model, const TokenSequence &tokens) {
  const auto s = detail::ClassLogScores(model, tokens);
  return 1.0 / (1.0 + std::exp(s[0] - s[1]));
}

inline double PredictProbaClass0(const ModelParams &model,
                                 const TokenSequence &tokens) {
  const auto s = detail::ClassLogScores(model, tokens);
  return 1.0 / (1.0 + std::exp(s[1] - s[0]));
}

inline Label DecideLabel(double prob) { return prob >= 0.5 ? 1 : 0; }

// Seeded shuffle, then the first round(eval_fraction * n) documents form the
// eval side. The stratified variant splits each class separately.
inline std::pair<std::vector<LabeledDocument>, std::vector<LabeledDocument>>
SplitTrainEval(const std::vector<LabeledDocument> &corpus, double eval_fraction,
               std::uint64_t seed, bool stratified = false) {
  if (corpus.empty()) throw DataError("cannot split an empty corpus");
  if (!(eval_fraction > 0.0 && eval_fraction < 1.0)) {
    throw std::invalid_argument("eval_fraction must lie in (0, 1)");
  }
  Rng rng(seed);
  std::vector<std::size_t> eval_idx;
  std::vector<std::size_t> train_idx;
  auto split_group = [&](std::vector<std::size_t> idx) {
    rng.Shuffle(idx);
    const auto k = static_cast<std::size_t>(
        std::llround(eval_fraction * static_cast<double>(idx.size())));
    eval_idx.insert(eval_idx.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    train_idx.insert(train_idx.end(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
  };
  if (stratified) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      by_class[static_cast<std::size_t>(corpus[i].label)].push_back(i);
    }
    split_group(std::move(by_class[0]));
    split_group(std::move(by_class[1]));
  } else {
    std::vector<std::size_t> idx(corpus.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    split_group(std::move(idx));
  }
  if (eval_idx.empty() || train_idx.empty()) {
    throw DataError("eval_fraction leaves one side of the split empty");
  }
  std::pair<std::vector<LabeledDocument>, std::vector<LabeledDocument>> out;
  for (auto i : train_idx) out.first.push_back(corpus[i]);
  for (auto i : eval_idx) out.second.push_back(corpus[i]);
  return out;
}

// Model persistence ----------------------------------------------------------

inline constexpr std::string_view kModelMagic = "plens-model";
inline constexpr int kModelVersion = 1;

inline void SaveModel(const ModelParams &m, std::ostream &out) {
  out << kModelMagic << "\tv" << kModelVersion
      << "\tn_min=" << m.config.n_range.min
      << "\tn_max=" << m.config.n_range.max
      << "\tmin_count=" << m.config.min_count
      << "\tsmoothing=" << csv::FormatDouble(m.config.smoothing)
      << "\tlog_prior0=" << csv::FormatDouble(m.log_priors[0])
      << "\tlog_prior1=" << csv::FormatDouble(m.log_priors[1])
      << "\tvocab=" << m.vocab.size()
      << "\tdigest=" << m.train_config_digest << '\n';
  const auto &features = m.vocab.features();
  for (std::size_t i = 0; i < features.size(); ++i) {
    out << features[i] << '\t' << csv::FormatDouble(m.log_weights[0][i]) << '\t'
        << csv::FormatDouble(m.log_weights[1][i]) << '\n';
  }
}

inline void SaveModel(const ModelParams &m, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model: " + path.string());
  SaveModel(m, out);
}

inline ModelParams LoadModel(std::istream &in, const std::string &name = "model") {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(name + ": empty model file");
  std::vector<std::string> parts;
  {
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, '\t')) parts.push_back(part);
  }
  if (parts.size() < 2 || parts[0] != kModelMagic) {
    throw FormatError(name + ": not a model file");
  }
  if (parts[1] != "v" + std::to_string(kModelVersion)) {
    throw FormatError(name + ": unsupported model version " + parts[1]);
  }
  std::map<std::string, std::string> kv;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw FormatError(name + ": bad header field");
    kv[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
  }
  auto need = [&](const std::string &key) -> const std::string & {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError(name + ": header lacks " + key);
    return it->second;
  };
  auto need_int = [&](const std::string &key) {
    auto v = csv::ParseInt<int>(need(key));
    if (!v) throw FormatError(name + ": bad " + key);
    return *v;
  };
  auto need_double = [&](const std::string &key) {
    auto v = csv::ParseDouble(need(key));
    if (!v) throw FormatError(name + ": bad " + key);
    return *v;
  };
  ModelParams m;
  m.config.n_range = {need_int("n_min"), need_int("n_max")};
  m.config.min_count = need_int("min_count");
  m.config.smoothing = need_double("smoothing");
  m.log_priors = {need_double("log_prior0"), need_double("log_prior1")};
  m.train_config_digest = need("digest");
  const auto declared = csv::ParseInt<std::size_t>(need("vocab"));
  if (!declared) throw FormatError(name + ": bad vocab");

  std::vector<std::string> features;
  features.reserve(*declared);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw FormatError(name + ": bad feature line");
    auto w0 = csv::ParseDouble(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
    auto w1 = csv::ParseDouble(std::string_view(line).substr(t2 + 1));
    if (!w0 || !w1 || !std::isfinite(*w0) || !std::isfinite(*w1)) {
      throw FormatError(name + ": bad feature weight");
    }
    if (!features.empty() && !(features.back() < line.substr(0, t1))) {
      throw FormatError(name + ": features not in lexicographic order");
    }
    features.push_back(line.substr(0, t1));
    m.log_weights[0].push_back(*w0);
    m.log_weights[1].push_back(*w1);
  }
  if (features.size() != *declared) {
    throw FormatError(name + ": vocabulary size mismatch");
  }
  m.vocab = VocabIndex(std::move(features));
  return m;
}

inline ModelParams LoadModel(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model: " + path.string());
  return LoadModel(in, path.string());
}

}  // namespace plens

#endif  // PLENS_CLASSIFIER_HPP_
