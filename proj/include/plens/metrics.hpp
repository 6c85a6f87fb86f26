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

#ifndef PLENS_METRICS_HPP_
#define PLENS_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "plens/classifier.hpp"
#include "plens/corpus.hpp"
#include "plens/csv.hpp"
#include "plens/error.hpp"

namespace plens {

struct PredictionRecord {
  std::string doc_id;
  Label label = 0;
  double prob = 0.0;  // probability of class 1

  friend bool operator==(const PredictionRecord &, const PredictionRecord &) = default;
};

inline PredictionRecord MakePrediction(std::string doc_id, double prob) {
  return {std::move(doc_id), DecideLabel(prob), prob};
}

struct EvalReport {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  double accuracy = 0.0;
  double mcc = 0.0;
  double eval_loss = 0.0;
  std::uint64_t n_eval = 0;
};

// Matthews correlation coefficient. A zero factor in the denominator
// yields 0.0.
inline double Mcc(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp,
                  std::uint64_t fn) {
  if (tp + tn + fp + fn == 0) {
    throw std::invalid_argument("mcc of an empty confusion matrix");
  }
  const double a = static_cast<double>(tp + fp);
  const double b = static_cast<double>(tp + fn);
  const double c = static_cast<double>(tn + fp);
  const double d = static_cast<double>(tn + fn);
  if (a == 0 || b == 0 || c == 0 || d == 0) return 0.0;
  const double num = static_cast<double>(tp) * static_cast<double>(tn) -
                     static_cast<double>(fp) * static_cast<double>(fn);
  // Square roots taken pairwise keep large counts away from overflow.
  return num / (std::sqrt(a * b) * std::sqrt(c * d));
}

inline constexpr double kLossEpsilon = 1e-12;

// Class 1 is the positive class.
inline EvalReport Evaluate(const std::vector<PredictionRecord> &predictions,
                           const std::unordered_map<std::string, Label> &gold) {
  if (predictions.empty()) throw DataError("no predictions to evaluate");
  EvalReport r;
  double loss = 0.0;
  for (const auto &p : predictions) {
    auto it = gold.find(p.doc_id);
    if (it == gold.end()) {
      throw DataError("prediction for unknown doc_id '" + p.doc_id + "'");
    }
    const Label y = it->second;
    if (p.label == 1) {
      (y == 1 ? r.tp : r.fp)++;
    } else {
      (y == 0 ? r.tn : r.fn)++;
    }
    const double q = std::clamp(p.prob, kLossEpsilon, 1.0 - kLossEpsilon);
    loss -= y == 1 ? std::log(q) : std::log(1.0 - q);
  }
  r.n_eval = predictions.size();
  r.accuracy = static_cast<double>(r.tp + r.tn) / static_cast<double>(r.n_eval);
  r.mcc = Mcc(r.tp, r.tn, r.fp, r.fn);
  r.eval_loss = loss / static_cast<double>(r.n_eval);
  return r;
}

inline void WriteEvalReport(const EvalReport &r, std::ostream &out) {
  csv::WriteRecord(out, {"Accuracy", "MCC", "TP", "TN", "FP", "FN", "Eval loss", "n_eval"});
  csv::WriteRecord(out, {csv::FormatDouble(r.accuracy), csv::FormatDouble(r.mcc),
                         std::to_string(r.tp), std::to_string(r.tn),
                         std::to_string(r.fp), std::to_string(r.fn),
                         csv::FormatDouble(r.eval_loss), std::to_string(r.n_eval)});
}

// Predictions file ------------------------------------------------------------

inline void WritePredictions(const std::vector<PredictionRecord> &preds,
                             std::ostream &out) {
  csv::WriteRecord(out, {"doc_id", "label", "prob"});
  for (const auto &p : preds) {
    csv::WriteRecord(out, {p.doc_id, std::to_string(p.label), csv::FormatDouble(p.prob)});
  }
}

struct ImportResult {
  std::vector<PredictionRecord> records;
  std::uint64_t read = 0;
  std::uint64_t rejected = 0;
  std::vector<std::string> warnings;
};

inline constexpr double kMaxRejectedFraction = 0.10;

// Reads a doc_id,label,prob file produced by an external model. Rows with
// label outside {0,1}, prob outside [0,1] or a label that disagrees with the
// 0.5 threshold are rejected; more than 10% rejected is a hard error.
inline ImportResult ImportExternalPredictions(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read predictions: " + path.string());
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.Next(rec)) throw FormatError(path.string() + ": missing header row");
  const csv::Header header(rec);
  const auto file = path.string();
  const auto id_col = header.Require("doc_id", file);
  const auto label_col = header.Require("label", file);
  const auto prob_col = header.Require("prob", file);

  ImportResult result;
  while (reader.Next(rec)) {
    if (rec.size() == 1 && rec[0].empty()) continue;
    ++result.read;
    if (reader.unterminated() || rec.size() != header.size() || rec[id_col].empty()) {
      ++result.rejected;
      continue;
    }
    auto label = csv::ParseInt<int>(rec[label_col]);
    auto prob = csv::ParseDouble(rec[prob_col]);
    if (!label || !prob || (*label != 0 && *label != 1) || !(*prob >= 0.0 && *prob <= 1.0) ||
        DecideLabel(*prob) != *label) {
      ++result.rejected;
      continue;
    }
    result.records.push_back({rec[id_col], *label, *prob});
  }
  if (result.read == 0) {
    result.warnings.push_back(file + ": no prediction rows");
  } else if (static_cast<double>(result.rejected) >
             kMaxRejectedFraction * static_cast<double>(result.read)) {
    throw FormatError("backend output corrupt: " + std::to_string(result.rejected) +
                      " of " + std::to_string(result.read) + " rows rejected in " + file);
  } else if (result.rejected > 0) {
    result.warnings.push_back(file + ": rejected " + std::to_string(result.rejected) +
                              " inconsistent rows");
  }
  return result;
}

}  // namespace plens

#endif  // PLENS_METRICS_HPP_
