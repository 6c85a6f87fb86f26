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

// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "plens/plens.hpp"
#include "plens/synthetic.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;
using namespace plens;
using plens::testing::Quote;
using plens::testing::ReadFile;
using plens::testing::RunCommand;
using plens::testing::TempDir;
using plens::testing::WriteFile;

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void operator()(bool ok, const std::string &what) {
    if (!ok) failures.push_back(what);
  }
};

using Steady = std::chrono::steady_clock;

double Seconds(Steady::time_point since) {
  return std::chrono::duration<double>(Steady::now() - since).count();
}

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// AC1 -------------------------------------------------------------------------

void Ac1(Check &check) {
  const auto t0 = Steady::now();
  const double mcc = Mcc(255, 433, 38, 43);
  const double acc = (255.0 + 433.0) / (255.0 + 433.0 + 38.0 + 43.0);
  const double elapsed = Seconds(t0);
  check(std::fabs(mcc - 0.77749) <= 1e-4, "mcc = " + Fmt(mcc));
  check(std::fabs(acc - 0.89466) <= 5e-5, "accuracy = " + Fmt(acc));
  check(elapsed < 1e-3, "runtime " + Fmt(elapsed) + " s");
}

// AC2 -------------------------------------------------------------------------

void Ac2(Check &check) {
  const auto t0 = Steady::now();
  TempDir dir;
  std::vector<PredictionRecord> preds;
  std::unordered_map<std::string, Label> gold;
  auto add = [&](int n, Label pred, Label truth) {
    for (int i = 0; i < n; ++i) {
      const std::string id = "doc" + std::to_string(preds.size());
      preds.push_back({id, pred, pred ? 0.8 : 0.2});
      gold[id] = truth;
    }
  };
  add(255, 1, 1);
  add(433, 0, 0);
  add(38, 1, 0);
  add(43, 0, 1);
  {
    std::ofstream out(dir / "external.csv", std::ios::binary);
    WritePredictions(preds, out);
  }
  const auto imported = ImportExternalPredictions(dir / "external.csv");
  const auto r = Evaluate(imported.records, gold);
  check(r.tp == 255 && r.tn == 433 && r.fp == 38 && r.fn == 43,
        "confusion " + std::to_string(r.tp) + "/" + std::to_string(r.tn) + "/" +
            std::to_string(r.fp) + "/" + std::to_string(r.fn));

  // Disjoint vocabularies: trained on 1,000 documents, scored on those and
  // on 1,000 unseen ones drawn the same way.
  Rng rng(2);
  auto corpus = [&](std::size_t n) {
    std::vector<TrainExample> out;
    for (std::size_t i = 0; i < n; ++i) {
      TrainExample ex;
      ex.label = static_cast<Label>(rng.Below(2));
      const auto len = 3 + rng.Below(10);
      for (std::uint64_t k = 0; k < len; ++k) {
        ex.tokens.push_back((ex.label ? "pro" : "neu") + std::to_string(rng.Below(60)));
      }
      out.push_back(std::move(ex));
    }
    return out;
  };
  const auto train = corpus(1000);
  const auto model = TrainBaseline(train, TrainConfig{});
  auto accuracy = [&](const std::vector<TrainExample> &set) {
    std::size_t correct = 0;
    for (const auto &ex : set) correct += DecideLabel(PredictProba(model, ex.tokens)) == ex.label;
    return static_cast<double>(correct) / static_cast<double>(set.size());
  };
  const double seen = accuracy(train);
  check(seen == 1.0, "train accuracy " + Fmt(seen));
  const double unseen = accuracy(corpus(1000));
  check(unseen == 1.0, "unseen accuracy " + Fmt(unseen));
  const double elapsed = Seconds(t0);
  check(elapsed < 5.0, "runtime " + Fmt(elapsed) + " s");
}

// AC3 -------------------------------------------------------------------------

// Evaluates both ECDFs at every pooled value and just below it.
double BruteForceD(const std::vector<double> &a, const std::vector<double> &b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  double d = 0.0;
  auto frac = [](const std::vector<double> &s, double x, bool strict) {
    std::size_t c = 0;
    for (double v : s) c += strict ? v < x : v <= x;
    return static_cast<double>(c) / static_cast<double>(s.size());
  };
  for (double x : pooled) {
    d = std::max(d, std::fabs(frac(a, x, false) - frac(b, x, false)));
    d = std::max(d, std::fabs(frac(a, x, true) - frac(b, x, true)));
  }
  return d;
}

void Ac3(Check &check) {
  const auto t0 = Steady::now();
  Rng rng(3);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(1 + rng.Below(50)), b(1 + rng.Below(50));
    // Quarter steps on [0, 3) guarantee ties within and across samples.
    for (auto &v : a) v = static_cast<double>(rng.Below(12)) / 4.0;
    for (auto &v : b) v = static_cast<double>(rng.Below(12)) / 4.0;
    if (KsTwoSample(Sample(a), Sample(b)).d_statistic != BruteForceD(a, b)) ++mismatches;
  }
  check(mismatches == 0, std::to_string(mismatches) + " of 1000 pairs differ");
  const double elapsed = Seconds(t0);
  check(elapsed < 10.0, "runtime " + Fmt(elapsed) + " s");
}

// AC4 -------------------------------------------------------------------------

void Ac4(Check &check) {
  for (const auto &[n1, n2] : std::vector<std::pair<std::size_t, std::size_t>>{
           {10, 10}, {100, 200}, {15556, 15556}}) {
    const std::string tag = "(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
    check(KsPValue(0.0, n1, n2) == 1.0, "p(0) != 1 at " + tag);
    double prev = KsPValue(0.0, n1, n2);
    for (int i = 1; i < 100; ++i) {
      const double d = static_cast<double>(i) / 99.0;
      const double p = KsPValue(d, n1, n2);
      if (p > prev) {
        check(false, "p rises at d=" + Fmt(d) + " " + tag);
        break;
      }
      prev = p;
    }
  }
  // Series value evaluated independently with 30-digit arithmetic.
  const double frozen = 0.534415719216507124;
  const double p = KsPValue(0.5, 4, 4);
  check(std::fabs(p - frozen) <= 1e-6, "p(0.5,4,4) = " + Fmt(p));
}

// AC5 -------------------------------------------------------------------------

void Ac5(Check &check) {
  const auto t0 = Steady::now();
  Rng rng(5);
  std::map<ScoreType, GroupSamples> planted, identical;
  for (auto t : kAllScoreTypes) {
    // Group 1 is pushed toward high scores: u^0.5 against u^2.
    std::vector<double> g0(5000), g1(5000);
    for (auto &v : g0) v = std::pow(rng.Uniform(), 2.0);
    for (auto &v : g1) v = std::pow(rng.Uniform(), 0.5);
    planted.emplace(t, GroupSamples{Sample(g0), Sample(g1)});
    identical.emplace(t, GroupSamples{Sample(g0), Sample(g0)});
  }
  const auto rows = KsTable(planted, 0.05);
  check(rows.size() == 7, std::to_string(rows.size()) + " planted rows");
  for (const auto &r : rows) {
    check(r.result && r.reject, std::string(ScoreKey(r.score_type)) + " not rejected");
  }
  for (const auto &r : KsTable(identical, 0.05)) {
    check(r.result && !r.reject, std::string(ScoreKey(r.score_type)) + " rejected identical");
  }
  const double elapsed = Seconds(t0);
  check(elapsed < 5.0, "runtime " + Fmt(elapsed) + " s");
}

// AC6 -------------------------------------------------------------------------

DistinctNGramReport OracleDistinct(const NGramTable &t0, const NGramTable &t1) {
  std::set<std::string> k0, k1, shared;
  for (const auto &[k, _] : t0.counts) k0.insert(k);
  for (const auto &[k, _] : t1.counts) k1.insert(k);
  std::set_intersection(k0.begin(), k0.end(), k1.begin(), k1.end(),
                        std::inserter(shared, shared.begin()));
  DistinctNGramReport r;
  r.n = t0.n;
  r.dropped_shared = shared.size();
  const NGramTable *tables[2] = {&t0, &t1};
  const std::set<std::string> *keys[2] = {&k0, &k1};
  for (std::size_t g = 0; g < 2; ++g) {
    std::vector<std::string> only;
    std::set_difference(keys[g]->begin(), keys[g]->end(), shared.begin(), shared.end(),
                        std::back_inserter(only));
    for (const auto &k : only) r.groups[g].emplace_back(k, tables[g]->counts.at(k));
    std::stable_sort(r.groups[g].begin(), r.groups[g].end(),
                     [](const auto &a, const auto &b) { return a.second > b.second; });
  }
  return r;
}

void Ac6(Check &check) {
  Rng rng(6);
  int bad = 0, overlapping = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto docs = synthetic::RandomGroupedDocs(rng, 1 + rng.Below(500), 1 + rng.Below(300),
                                                   1 + rng.Below(15));
    const int n = 1 + static_cast<int>(rng.Below(5));
    const auto tables = CountNGrams(docs, n);
    const auto got = DistinctFilter(tables[0], tables[1]);
    if (!(got == OracleDistinct(tables[0], tables[1]))) ++bad;
    std::set<std::string> k0;
    for (const auto &[k, _] : got.groups[0]) k0.insert(k);
    for (const auto &[k, _] : got.groups[1]) {
      if (k0.count(k)) {
        ++overlapping;
        break;
      }
    }
  }
  check(bad == 0, std::to_string(bad) + " of 200 corpora differ from the oracle");
  check(overlapping == 0, std::to_string(overlapping) + " corpora with shared keys");
}

// AC7 -------------------------------------------------------------------------

void Ac7(Check &check) {
  DistinctNGramReport r;
  r.groups[0] = {{"neutral top", 300}};
  r.groups[1] = {{"pro top", 35000}};
  const double ratio = FrequencyRatio(r);
  check(std::fabs(ratio - 116.67) <= 0.01, "ratio = " + Fmt(ratio));
}

// AC8 -------------------------------------------------------------------------

void Ac8(Check &check) {
  Rng rng(8);
  std::vector<AccountScores> accounts(17000);
  for (std::size_t i = 0; i < accounts.size(); ++i) {
    auto &a = accounts[i];
    a.account_id = "acct" + std::to_string(i);
    if (i < 1331) {
      a.status = AccountStatus::kSuspended;
    } else if (i < 1331 + 113) {
      a.status = AccountStatus::kIdMismatch;
    } else {
      ScoreVector v{};
      for (auto &s : v) s = rng.Uniform();
      a.scores = v;
    }
  }
  rng.Shuffle(accounts);
  const auto [kept, removed] = FilterAccounts(accounts);
  check(kept.size() == 15556, "kept " + std::to_string(kept.size()));
  check(removed.Total() == 1444, "removed " + std::to_string(removed.Total()));
  check(removed.suspended == 1331, "suspended " + std::to_string(removed.suspended));
  check(removed.id_mismatch == 113, "id_mismatch " + std::to_string(removed.id_mismatch));
}

// AC9 -------------------------------------------------------------------------

std::map<std::string, std::string> OutputFiles(const fs::path &dir) {
  std::map<std::string, std::string> files;
  const std::regex stamp("\"generated_at\": \"[^\"]*\"");
  for (const auto &e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string body = ReadFile(e.path());
    if (e.path().filename() == "manifest.json") body = std::regex_replace(body, stamp, "");
    files[fs::relative(e.path(), dir).generic_string()] = body;
  }
  return files;
}

void Ac9(Check &check) {
  const auto t0 = Steady::now();
  Rng rng(9);
  const auto docs = synthetic::RandomGroupedDocs(rng, 100000, 5000, 20, 2000);
  for (int n : {1, 2, 3}) {
    const auto sequential = CountNGrams(docs, n);
    std::vector<std::vector<GroupedTokens>> parts(8);
    for (const auto &d : docs) parts[rng.Below(8)].push_back(d);
    auto merged = EmptyTables(n);
    for (const auto &p : parts) MergeInto(merged, CountNGrams(p, n));
    check(merged == sequential, "partition merge differs at n=" + std::to_string(n));
    check(CountNGramsParallel(docs, n, 8) == sequential,
          "8-worker count differs at n=" + std::to_string(n));
  }

  TempDir dir;
  const auto fixture = synthetic::WriteDemoFixture(dir.path());
  const std::vector<std::string> stages = {"label", "train-eval", "predict", "ngram",
                                           "botscores", "ks", "report"};
  for (const auto *run : {"run_a", "run_b"}) {
    for (const auto &s : stages) {
      const auto r = RunCommand(Quote(PLENS_CLI_PATH) + " --config " + Quote(fixture.config) +
                                " --seed 42 --output-dir " + Quote(dir / run) + " " + s);
      check(r.exit_code == 0, std::string(run) + " " + s + " exited " +
                                  std::to_string(r.exit_code));
    }
  }
  const auto a = OutputFiles(dir / "run_a");
  const auto b = OutputFiles(dir / "run_b");
  check(!a.empty() && a == b, "pipeline re-run is not byte-identical");
  const double elapsed = Seconds(t0);
  check(elapsed < 60.0, "runtime " + Fmt(elapsed) + " s");
}

// AC10 ------------------------------------------------------------------------

std::string TweetRow(Rng &rng) {
  static const std::vector<std::string> langs = {"en", "fr", "EN", ""};
  const std::string id = std::to_string(rng.Below(12));
  switch (rng.Below(8)) {
    case 0: return "broken,row\n";
    case 1: return id + ",u,,en,2020-03-01T00:00:00Z\n";
    case 2: return id + ",u,text,en,yesterday\n";
    case 3: return "\n";
    default:
      return id + ",u" + std::to_string(rng.Below(3)) + ",w" + std::to_string(rng.Below(5)) +
             "," + langs[rng.Below(langs.size())] + ",2020-03-01T00:00:00Z\n";
  }
}

std::string TitleRow(Rng &rng) {
  static const std::vector<std::string> subs = {"Sino", "/r/worldnews/", "pics", "SINO"};
  const std::string sub = subs[rng.Below(subs.size())];
  switch (rng.Below(6)) {
    case 0: return "{\"title\": 3}\n";
    case 1: return "[]\n";
    case 2: return "\n";
    case 3: return "{\"subreddit\": \"" + sub + "\", \"title\": \"  \"}\n";
    default:
      return "{\"subreddit\": \"" + sub + "\", \"title\": \"t" + std::to_string(rng.Below(4)) +
             "\"}\n";
  }
}

void Ac10(Check &check) {
  TempDir dir;
  Rng rng(10);
  int broken = 0;
  for (int t = 0; t < 1000; ++t) {
    std::string body = "id,user_id,text,lang,created_at\n";
    for (auto i = rng.Below(30); i > 0; --i) body += TweetRow(rng);
    WriteFile(dir / "t.csv", body);
    TweetIngestOptions opt;
    if (rng.Below(2)) opt.lang_filter = "en";
    const auto [docs, rep] = IngestTweets(dir / "t.csv", opt);
    if (!rep.Conserved() || rep.emitted != docs.size()) ++broken;
  }
  check(broken == 0, std::to_string(broken) + " tweet ingests break conservation");

  broken = 0;
  const SeedLabelMap map{{"sino", 1}, {"worldnews", 0}};
  for (int t = 0; t < 1000; ++t) {
    std::string body;
    for (auto i = rng.Below(30); i > 0; --i) body += TitleRow(rng);
    WriteFile(dir / "r.jsonl", body);
    const auto [docs, rep] = IngestRedditTitles(dir / "r.jsonl", map);
    if (!rep.Conserved() || rep.emitted != docs.size()) ++broken;
  }
  check(broken == 0, std::to_string(broken) + " title ingests break conservation");

  broken = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(rng.Below(200));
    for (auto &x : v) x = rng.Uniform() * 1.6 - 0.3;
    if (!v.empty() && rng.Below(4) == 0) v[0] = 1.0;  // upper edge belongs to the last bin
    const auto h = MakeHistogram(Sample(v), 0.0, 1.0, 1 + rng.Below(40));
    if (h.Total() != v.size()) ++broken;
  }
  check(broken == 0, std::to_string(broken) + " histograms break conservation");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check &)>>> criteria = {
      {"AC1 metric arithmetic", Ac1},
      {"AC2 import and evaluate, baseline on disjoint vocabularies", Ac2},
      {"AC3 KS statistic equals brute force", Ac3},
      {"AC4 KS p-value properties", Ac4},
      {"AC5 planted-difference KS table", Ac5},
      {"AC6 distinct n-gram oracle", Ac6},
      {"AC7 frequency ratio", Ac7},
      {"AC8 account filtering counts", Ac8},
      {"AC9 parallel merge and re-run determinism", Ac9},
      {"AC10 conservation invariants", Ac10},
  };
  int failed = 0;
  for (const auto &[name, fn] : criteria) {
    Check check;
    const auto t0 = Steady::now();
    try {
      fn(check);
    } catch (const std::exception &e) {
      check(false, std::string("threw: ") + e.what());
    }
    const double elapsed = Seconds(t0);
    std::printf("[%s] %s (%.3f s)", check.failures.empty() ? "PASS" : "FAIL", name.c_str(),
                elapsed);
    for (const auto &f : check.failures) std::printf("; %s", f.c_str());
    std::printf("\n");
    failed += check.failures.empty() ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
