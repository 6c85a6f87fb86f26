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

// Empirical distribution machinery: ECDF, the two-sample Kolmogorov-Smirnov
// test, fixed-width histograms and nearest-rank long-tail summaries.

#ifndef PLENS_STATS_HPP_
#define PLENS_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "plens/score_types.hpp"

namespace plens {

// Finite real values, optionally tagged with a group name. Values are kept
// sorted; the order of insertion carries no meaning for any statistic here.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<double> values, std::string label = {})
      : values_(std::move(values)), label_(std::move(label)) {
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("sample values must be finite");
    }
    std::sort(values_.begin(), values_.end());
  }
  Sample(std::initializer_list<double> values) : Sample(std::vector<double>(values)) {}

  const std::vector<double> &sorted() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::string &label() const { return label_; }

 private:
  std::vector<double> values_;
  std::string label_;
};

// Fraction of values <= x.
inline double Ecdf(const Sample &s, double x) {
  if (s.empty()) throw std::invalid_argument("ecdf of an empty sample");
  const auto &v = s.sorted();
  const auto count = std::upper_bound(v.begin(), v.end(), x) - v.begin();
  return static_cast<double>(count) / static_cast<double>(v.size());
}

struct KsResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  bool RejectAt(double alpha) const { return p_value < alpha; }
};

// Asymptotic two-sample p-value with the effective-size correction
// lambda = (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * d.
inline double KsPValue(double d, std::size_t n1, std::size_t n2) {
  if (!(d >= 0.0 && d <= 1.0)) throw std::invalid_argument("KS statistic outside [0, 1]");
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("KS sample sizes must be >= 1");
  if (d == 0.0) return 1.0;
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                    static_cast<double>(n1 + n2);
  const double root = std::sqrt(ne);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  const double a2 = -2.0 * lambda * lambda;
  double sum = 0.0;
  double sign = 1.0;
  bool converged = false;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(a2 * k * k);
    sum += sign * term;
    if (term < 1e-12) {
      converged = true;
      break;
    }
    sign = -sign;
  }
  // Small lambda leaves the alternating tail unsummed; p is 1 to working
  // precision there. Rounding noise just below 1 is snapped for the same
  // reason, otherwise p wobbles upward by an ulp or two.
  if (!converged) return 1.0;
  const double p = 2.0 * sum;
  if (p >= 1.0 - 1e-12) return 1.0;
  return std::clamp(p, 0.0, 1.0);
}

// D is the largest ECDF gap. Walking the pooled distinct values in order and
// comparing after each one covers both the points and their left limits.
inline KsResult KsTwoSample(const Sample &s1, const Sample &s2) {
  if (s1.empty() || s2.empty()) throw std::invalid_argument("KS test on an empty sample");
  const auto &a = s1.sorted();
  const auto &b = s2.sorted();
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  KsResult r;
  r.d_statistic = d;
  r.n1 = a.size();
  r.n2 = b.size();
  r.p_value = KsPValue(d, r.n1, r.n2);
  return r;
}

struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  std::size_t bin_count() const { return counts.size(); }
  std::uint64_t Total() const {
    std::uint64_t t = underflow + overflow;
    for (auto c : counts) t += c;
    return t;
  }
  double BinLow(std::size_t i) const {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
  }
};

// Equal-width bins, left-closed and right-open except the last, which also
// holds values equal to hi.
inline Histogram MakeHistogram(const Sample &sample, double lo, double hi, std::size_t bins) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("histogram requires finite lo < hi");
  }
  if (bins < 1) throw std::invalid_argument("histogram requires at least one bin");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  const double width = hi - lo;
  for (double v : sample.sorted()) {
    if (v < lo) {
      ++h.underflow;
    } else if (v > hi) {
      ++h.overflow;
    } else if (v == hi) {
      ++h.counts.back();
    } else {
      auto idx = static_cast<std::size_t>((v - lo) / width * static_cast<double>(bins));
      ++h.counts[std::min(idx, bins - 1)];
    }
  }
  return h;
}

struct LongTailSummary {
  std::size_t n = 0;
  double max = 0.0;
  double mean = 0.0;
  std::map<int, double> percentiles;  // keys 50, 90, 99
};

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value.
inline double NearestRank(const std::vector<double> &sorted, int p) {
  const std::size_t n = sorted.size();
  const std::size_t rank =
      (static_cast<std::size_t>(p) * n + 99) / 100;
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

inline LongTailSummary LongTail(const Sample &counts) {
  if (counts.empty()) throw std::invalid_argument("long-tail summary of an empty sample");
  const auto &v = counts.sorted();
  LongTailSummary s;
  s.n = v.size();
  s.max = v.back();
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  for (int p : {50, 90, 99}) s.percentiles[p] = NearestRank(v, p);
  return s;
}

// Group-0 and group-1 samples for one score type.
using GroupSamples = std::pair<Sample, Sample>;

struct KsTableRow {
  ScoreType score_type;
  std::optional<KsResult> result;  // empty when the row could not be computed
  bool reject = false;
  std::string note;                // warning or error text for empty rows
};

// One row per score type in the fixed English..User order. A missing type
// or an empty sample produces a row without a result; other rows proceed.
inline std::vector<KsTableRow> KsTable(const std::map<ScoreType, GroupSamples> &score_sets,
                                       double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  std::vector<KsTableRow> rows;
  for (auto t : kAllScoreTypes) {
    KsTableRow row{t, std::nullopt, false, {}};
    auto it = score_sets.find(t);
    if (it == score_sets.end()) {
      row.note = "missing score type";
    } else if (it->second.first.empty() || it->second.second.empty()) {
      row.note = "empty sample";
    } else {
      row.result = KsTwoSample(it->second.first, it->second.second);
      row.reject = row.result->RejectAt(alpha);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace plens

#endif  // PLENS_STATS_HPP_
