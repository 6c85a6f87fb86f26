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

// End-to-end pipeline stages. Each stage reads its inputs and earlier stage
// outputs from the configured paths and writes into the output directory.
// Stage outputs are byte-identical across re-runs with the same inputs; the
// only timestamp lives in manifest.json.

#ifndef PLENS_PIPELINE_HPP_
#define PLENS_PIPELINE_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "plens/botscores.hpp"
#include "plens/classifier.hpp"
#include "plens/config.hpp"
#include "plens/corpus.hpp"
#include "plens/csv.hpp"
#include "plens/digest.hpp"
#include "plens/error.hpp"
#include "plens/fetch.hpp"
#include "plens/http_endpoint.hpp"
#include "plens/metrics.hpp"
#include "plens/ngram.hpp"
#include "plens/stats.hpp"
#include "plens/svg.hpp"
#include "plens/text.hpp"

namespace plens {

inline constexpr std::string_view kArtifactVersion = "1.0.0";

struct Logger {
  bool verbose = false;
  std::ostream *err = &std::cerr;

  void Info(const std::string &msg) const {
    if (verbose) *err << "[plens] " << msg << '\n';
  }
  void Warn(const std::string &msg) const { *err << "[plens] warning: " << msg << '\n'; }
};

// Exclusive claim on an output directory for the lifetime of one command.
class OutputLock {
 public:
  explicit OutputLock(const fs::path &dir) : path_(dir / ".plens.lock") {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output dir " + dir.string() + ": " + ec.message());
    std::FILE *f = std::fopen(path_.c_str(), "wx");
    if (f == nullptr) {
      throw UsageError("output dir " + dir.string() +
                       " is locked by another run (remove " + path_.string() +
                       " if stale)");
    }
    std::fclose(f);
  }
  ~OutputLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  OutputLock(const OutputLock &) = delete;
  OutputLock &operator=(const OutputLock &) = delete;

 private:
  fs::path path_;
};

struct StageResult {
  std::vector<fs::path> written;
  std::vector<std::pair<std::string, std::string>> summary;  // also in <stage>_summary.csv
};

namespace detail {

inline std::ofstream OpenOut(const fs::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  return out;
}

inline void RequireInput(const fs::path &path, const std::string &what) {
  if (path.empty()) throw UsageError("config: " + what + " is not set");
  if (!fs::exists(path)) throw UsageError(what + " not found: " + path.string());
}

inline void RequireStageOutput(const fs::path &path, const std::string &stage) {
  if (!fs::exists(path)) {
    throw UsageError(path.filename().string() + " is missing; run '" + stage + "' first");
  }
}

inline StopList LoadStopList(const PipelineConfig &cfg) {
  if (cfg.stop_list.empty()) return StopList::Default();
  RequireInput(cfg.stop_list, "stop_list");
  return StopList::Load(cfg.stop_list);
}

inline void WriteSummary(const fs::path &path, StageResult &result) {
  auto out = OpenOut(path);
  csv::WriteRecord(out, {"key", "value"});
  for (const auto &[k, v] : result.summary) csv::WriteRecord(out, {k, v});
  result.written.push_back(path);
}

inline std::vector<std::pair<std::string, std::string>> ReadSummary(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  csv::Reader reader(in);
  csv::Record rec;
  std::vector<std::pair<std::string, std::string>> out;
  reader.Next(rec);
  while (reader.Next(rec)) {
    if (rec.size() == 2) out.emplace_back(rec[0], rec[1]);
  }
  return out;
}

inline void AddIngestCounts(StageResult &r, const IngestReport &rep, const std::string &prefix) {
  r.summary.emplace_back(prefix + "read", std::to_string(rep.read));
  r.summary.emplace_back(prefix + "emitted", std::to_string(rep.emitted));
  r.summary.emplace_back(prefix + "skipped_unknown_community",
                         std::to_string(rep.skipped_unknown_community));
  r.summary.emplace_back(prefix + "filtered_lang", std::to_string(rep.filtered_lang));
  r.summary.emplace_back(prefix + "deduped", std::to_string(rep.deduped));
  r.summary.emplace_back(prefix + "rejected_empty", std::to_string(rep.rejected_empty));
  r.summary.emplace_back(prefix + "rejected_malformed", std::to_string(rep.rejected_malformed));
}

inline TweetIngestOptions TweetOptions(const PipelineConfig &cfg) {
  return {cfg.tweet_delimiter, cfg.lang_filter};
}

inline std::pair<std::vector<Document>, IngestReport> LoadTargetCorpus(
    const PipelineConfig &cfg, const Logger &log) {
  RequireInput(cfg.target_corpus, "target_corpus");
  auto loaded = IngestTweets(cfg.target_corpus, TweetOptions(cfg));
  const auto &rep = loaded.second;
  if (rep.rejected_empty + rep.rejected_malformed > 0) {
    log.Warn("target corpus: rejected " + std::to_string(rep.rejected_empty) +
             " empty and " + std::to_string(rep.rejected_malformed) + " malformed rows");
  }
  return loaded;
}

inline std::vector<PredictionRecord> ReadPredictions(const fs::path &path) {
  return ImportExternalPredictions(path).records;
}

}  // namespace detail

// Labeled corpus file --------------------------------------------------------

inline void WriteLabeledCorpus(const std::vector<LabeledDocument> &docs, std::ostream &out) {
  csv::WriteRecord(out, {"id", "community", "label", "provenance", "text"});
  for (const auto &d : docs) {
    csv::WriteRecord(out, {d.doc.id, d.doc.author_or_community, std::to_string(d.label),
                           std::string(ProvenanceName(d.provenance)), d.doc.text});
  }
}

inline std::vector<LabeledDocument> ReadLabeledCorpus(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read labeled corpus: " + path.string());
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.Next(rec)) throw FormatError(path.string() + ": missing header row");
  const csv::Header header(rec);
  const auto file = path.string();
  const auto id = header.Require("id", file);
  const auto community = header.Require("community", file);
  const auto label = header.Require("label", file);
  const auto prov = header.Require("provenance", file);
  const auto text = header.Require("text", file);
  std::vector<LabeledDocument> docs;
  while (reader.Next(rec)) {
    if (rec.size() == 1 && rec[0].empty()) continue;
    if (reader.unterminated() || rec.size() != header.size()) {
      throw FormatError(file + ": malformed row " + std::to_string(reader.records()));
    }
    auto l = csv::ParseInt<int>(rec[label]);
    auto p = ParseProvenance(rec[prov]);
    if (!l || (*l != 0 && *l != 1) || !p) {
      throw FormatError(file + ": bad label or provenance in row " +
                        std::to_string(reader.records()));
    }
    LabeledDocument d;
    d.doc.id = rec[id];
    d.doc.platform = Platform::kReddit;
    d.doc.author_or_community = rec[community];
    d.doc.text = rec[text];
    d.label = *l;
    d.provenance = *p;
    docs.push_back(std::move(d));
  }
  return docs;
}

// label ------------------------------------------------------------------------

inline StageResult CmdLabel(const PipelineConfig &cfg, const Logger &log = {}) {
  detail::RequireInput(cfg.seed_corpus, "seed_corpus");
  detail::RequireInput(cfg.label_map, "label_map");
  OutputLock lock(cfg.output_dir);
  const auto seed_map = SeedLabelMap::Load(cfg.label_map);
  auto [docs, report] = IngestRedditTitles(cfg.seed_corpus, seed_map);
  log.Info("label: read " + std::to_string(report.read) + ", emitted " +
           std::to_string(report.emitted));
  if (docs.empty()) throw DataError("label: no document matched the seed label map");

  StageResult result;
  const auto corpus_path = cfg.Out("labeled_corpus.csv");
  {
    auto out = detail::OpenOut(corpus_path);
    WriteLabeledCorpus(docs, out);
  }
  result.written.push_back(corpus_path);
  std::array<std::uint64_t, 2> per_label{};
  for (const auto &d : docs) ++per_label[static_cast<std::size_t>(d.label)];
  detail::AddIngestCounts(result, report, "");
  result.summary.emplace_back("label_0", std::to_string(per_label[0]));
  result.summary.emplace_back("label_1", std::to_string(per_label[1]));
  detail::WriteSummary(cfg.Out("label_summary.csv"), result);
  return result;
}

// train-eval -----------------------------------------------------------------

inline StageResult CmdTrainEval(const PipelineConfig &cfg, const Logger &log = {}) {
  const auto corpus_path = cfg.Out("labeled_corpus.csv");
  detail::RequireStageOutput(corpus_path, "label");
  const auto stop = detail::LoadStopList(cfg);
  OutputLock lock(cfg.output_dir);
  const auto corpus = ReadLabeledCorpus(corpus_path);
  if (corpus.empty()) throw DataError("train-eval: labeled corpus is empty");
  auto [train, eval] = SplitTrainEval(corpus, cfg.eval_fraction, cfg.seed, cfg.stratified);
  log.Info("train-eval: " + std::to_string(train.size()) + " train / " +
           std::to_string(eval.size()) + " eval documents");
  const auto model = TrainBaseline(ToExamples(train, stop), cfg.train);

  std::vector<PredictionRecord> preds;
  std::unordered_map<std::string, Label> gold;
  for (const auto &d : eval) {
    preds.push_back(MakePrediction(d.doc.id, PredictProba(model, Preprocess(d.doc.text, stop))));
    gold.emplace(d.doc.id, d.label);
  }
  const auto report = Evaluate(preds, gold);

  StageResult result;
  SaveModel(model, cfg.Out("model.tsv"));
  result.written.push_back(cfg.Out("model.tsv"));
  {
    auto out = detail::OpenOut(cfg.Out("eval_report.csv"));
    WriteEvalReport(report, out);
  }
  result.written.push_back(cfg.Out("eval_report.csv"));
  {
    auto out = detail::OpenOut(cfg.Out("eval_predictions.csv"));
    WritePredictions(preds, out);
  }
  result.written.push_back(cfg.Out("eval_predictions.csv"));
  result.summary = {{"n_train", std::to_string(train.size())},
                    {"n_eval", std::to_string(eval.size())},
                    {"vocab_size", std::to_string(model.vocab.size())},
                    {"accuracy", csv::FormatDouble(report.accuracy)},
                    {"mcc", csv::FormatDouble(report.mcc)},
                    {"eval_loss", csv::FormatDouble(report.eval_loss)}};
  detail::WriteSummary(cfg.Out("train_eval_summary.csv"), result);
  return result;
}

// predict ----------------------------------------------------------------------

// Scores the target corpus with the trained model, or, when
// `import_path` (or cfg.external_predictions) is set, copies the valid rows
// of an external model's prediction file.
inline StageResult CmdPredict(const PipelineConfig &cfg, const Logger &log = {},
                              std::optional<fs::path> import_path = std::nullopt) {
  if (!import_path && !cfg.external_predictions.empty()) import_path = cfg.external_predictions;
  std::vector<PredictionRecord> preds;
  StageResult result;
  if (import_path) {
    detail::RequireInput(*import_path, "external predictions");
    OutputLock lock(cfg.output_dir);
    auto imported = ImportExternalPredictions(*import_path);
    for (const auto &w : imported.warnings) log.Warn(w);
    preds = std::move(imported.records);
    result.summary.emplace_back("mode", "import");
    result.summary.emplace_back("imported_read", std::to_string(imported.read));
    result.summary.emplace_back("imported_rejected", std::to_string(imported.rejected));
  } else {
    const auto model_path = cfg.Out("model.tsv");
    if (!fs::exists(model_path)) {
      throw UsageError("predict: no model at " + model_path.string() +
                       " (run train-eval or pass --import)");
    }
    const auto stop = detail::LoadStopList(cfg);
    const auto model = LoadModel(model_path);
    auto [docs, report] = detail::LoadTargetCorpus(cfg, log);
    OutputLock lock(cfg.output_dir);
    for (const auto &d : docs) {
      preds.push_back(MakePrediction(d.id, PredictProba(model, Preprocess(d.text, stop))));
    }
    result.summary.emplace_back("mode", "model");
    detail::AddIngestCounts(result, report, "target_");
  }
  std::array<std::uint64_t, 2> per_label{};
  for (const auto &p : preds) ++per_label[static_cast<std::size_t>(p.label)];
  {
    auto out = detail::OpenOut(cfg.Out("predictions.csv"));
    WritePredictions(preds, out);
  }
  result.written.push_back(cfg.Out("predictions.csv"));
  result.summary.emplace_back("predictions", std::to_string(preds.size()));
  result.summary.emplace_back("label_0", std::to_string(per_label[0]));
  result.summary.emplace_back("label_1", std::to_string(per_label[1]));
  detail::WriteSummary(cfg.Out("prediction_summary.csv"), result);
  return result;
}

// ngram ------------------------------------------------------------------------

// Joins the target corpus with its predictions into grouped token lists.
inline std::vector<GroupedTokens> GroupedTargetTokens(const PipelineConfig &cfg,
                                                      const Logger &log,
                                                      std::uint64_t *uncovered = nullptr) {
  const auto pred_path = cfg.Out("predictions.csv");
  detail::RequireStageOutput(pred_path, "predict");
  const auto stop = detail::LoadStopList(cfg);
  auto [docs, report] = detail::LoadTargetCorpus(cfg, log);
  std::unordered_map<std::string, Label> label_of;
  for (const auto &p : detail::ReadPredictions(pred_path)) label_of.emplace(p.doc_id, p.label);
  std::vector<GroupedTokens> grouped;
  std::uint64_t missing = 0;
  for (const auto &d : docs) {
    auto it = label_of.find(d.id);
    if (it == label_of.end()) {
      ++missing;
      continue;
    }
    grouped.push_back({Preprocess(d.text, stop), it->second, d.author_or_community});
  }
  if (missing > 0) log.Warn(std::to_string(missing) + " target documents have no prediction");
  if (uncovered) *uncovered = missing;
  return grouped;
}

inline StageResult CmdNGram(const PipelineConfig &cfg, const Logger &log = {}) {
  std::uint64_t uncovered = 0;
  auto grouped = GroupedTargetTokens(cfg, log, &uncovered);
  if (grouped.empty()) throw DataError("ngram: no target document has a prediction");
  OutputLock lock(cfg.output_dir);
  if (cfg.distinct_mode == DistinctMode::kUnigram) grouped = DropSharedUnigrams(grouped);

  StageResult result;
  std::ostringstream summary;
  csv::WriteRecord(summary, {"n", "variant", "dropped_shared", "distinct_0", "distinct_1",
                             "top_count_0", "top_count_1", "frequency_ratio", "note"});
  auto emit = [&](const NGramTablePair &tables, int n, const std::string &variant) {
    const auto full = DistinctFilter(tables[0], tables[1]);
    const auto top = TopK(full, cfg.top_k);
    const std::string suffix = variant == "capped" ? "_capped" : "";
    const auto path = cfg.Out("ngram_" + std::to_string(n) + suffix + ".csv");
    {
      auto out = detail::OpenOut(path);
      WriteNGramReport(top, out);
    }
    result.written.push_back(path);
    std::string ratio, note;
    try {
      ratio = csv::FormatDouble(FrequencyRatio(full));
    } catch (const DataError &e) {
      note = e.what();
      log.Warn("ngram n=" + std::to_string(n) + ": " + note);
    }
    auto top_count = [&](std::size_t g) {
      return full.groups[g].empty() ? std::string() : std::to_string(full.groups[g][0].second);
    };
    csv::WriteRecord(summary, {std::to_string(n), variant, std::to_string(full.dropped_shared),
                               std::to_string(full.groups[0].size()),
                               std::to_string(full.groups[1].size()), top_count(0), top_count(1),
                               ratio, note});
  };
  for (int n : cfg.ngram_orders) {
    emit(CountNGramsParallel(grouped, n, cfg.workers), n, "all");
    if (cfg.user_cap) emit(PerUserCappedCounts(grouped, n, cfg.user_cap), n, "capped");
  }
  {
    auto out = detail::OpenOut(cfg.Out("ngram_summary.csv"));
    out << summary.str();
  }
  result.written.push_back(cfg.Out("ngram_summary.csv"));
  result.summary = {{"documents", std::to_string(grouped.size())},
                    {"uncovered_documents", std::to_string(uncovered)}};
  return result;
}

// botscores ------------------------------------------------------------------

inline std::string SampleFileName(ScoreType t, Label group) {
  return std::string(ScoreKey(t)) + "_group" + std::to_string(group) + ".csv";
}

inline StageResult CmdBotScores(const PipelineConfig &cfg, const Logger &log = {},
                                ScoreEndpoint *endpoint_override = nullptr,
                                Clock *clock_override = nullptr) {
  const auto pred_path = cfg.Out("predictions.csv");
  detail::RequireStageOutput(pred_path, "predict");
  if (cfg.score_store.empty()) throw UsageError("config: score_store is not set");
  auto [docs, ingest] = detail::LoadTargetCorpus(cfg, log);
  std::unordered_map<std::string, std::string> author_of;
  for (const auto &d : docs) author_of.emplace(d.id, d.author_or_community);
  const auto preds = detail::ReadPredictions(pred_path);
  const auto groups = GroupAccounts(preds, author_of);
  OutputLock lock(cfg.output_dir);

  if (cfg.fetch_mode != FetchMode::kNone || endpoint_override) {
    std::vector<std::string> ids;
    for (const auto &g : groups) ids.push_back(g.account_id);
    std::unique_ptr<ScoreEndpoint> owned;
    ScoreEndpoint *endpoint = endpoint_override;
    ClientConfig client = cfg.client;
    if (!endpoint) {
      if (cfg.fetch_mode == FetchMode::kOffline) {
        detail::RequireInput(cfg.fetch_fixture, "fetch_fixture");
        owned = std::make_unique<FixtureEndpoint>(cfg.fetch_fixture);
        client.rate_limit_per_minute = 0;  // no network involved
      } else {
        owned = std::make_unique<HttpScoreEndpoint>(cfg.client);
      }
      endpoint = owned.get();
    }
    SystemClock system_clock;
    Clock &clock = clock_override ? *clock_override : system_clock;
    const auto fetched = FetchScores(ids, *endpoint, clock, client, cfg.score_store);
    std::uint64_t failed = 0;
    for (const auto &r : fetched) failed += r.fetch_failed ? 1 : 0;
    if (failed) log.Warn(std::to_string(failed) + " accounts could not be fetched");
  }

  detail::RequireInput(cfg.score_store, "score_store");
  auto [scores, load] = LoadScores(cfg.score_store);
  if (load.rejected) log.Warn("score store: rejected " + std::to_string(load.rejected) + " rows");
  auto [kept, removed] = FilterAccounts(scores);
  const auto joined = JoinScoresWithGroups(kept, groups);

  StageResult result;
  {
    auto out = detail::OpenOut(cfg.Out("removal_report.csv"));
    csv::WriteRecord(out, {"reason", "count"});
    csv::WriteRecord(out, {"suspended", std::to_string(removed.suspended)});
    csv::WriteRecord(out, {"id_mismatch", std::to_string(removed.id_mismatch)});
    csv::WriteRecord(out, {"total_removed", std::to_string(removed.Total())});
    csv::WriteRecord(out, {"kept", std::to_string(kept.size())});
  }
  result.written.push_back(cfg.Out("removal_report.csv"));
  {
    auto out = detail::OpenOut(cfg.Out("account_groups.csv"));
    csv::WriteRecord(out, {"account_id", "n_tweets", "n_label1", "group"});
    for (const auto &g : groups) {
      csv::WriteRecord(out, {g.account_id, std::to_string(g.n_tweets), std::to_string(g.n_label1),
                             g.label ? std::to_string(*g.label) : "excluded"});
    }
  }
  result.written.push_back(cfg.Out("account_groups.csv"));

  // Throws DataError when either group is empty.
  const auto samples = GroupScoreSamples(joined);
  const auto dir = cfg.Out("samples");
  fs::create_directories(dir);
  for (auto t : kAllScoreTypes) {
    for (Label g : {0, 1}) {
      const auto path = dir / SampleFileName(t, g);
      auto out = detail::OpenOut(path);
      csv::WriteRecord(out, {"account_id", "value"});
      for (const auto &[a, grp] : joined) {
        if (*grp.label == g) csv::WriteRecord(out, {a.account_id, csv::FormatDouble(a.Score(t))});
      }
      result.written.push_back(path);
    }
  }
  std::uint64_t excluded = 0;
  for (const auto &g : groups) excluded += g.label ? 0 : 1;
  result.summary = {{"store_read", std::to_string(load.read)},
                    {"store_rejected", std::to_string(load.rejected)},
                    {"store_superseded", std::to_string(load.superseded)},
                    {"accounts", std::to_string(scores.size())},
                    {"kept", std::to_string(kept.size())},
                    {"removed_suspended", std::to_string(removed.suspended)},
                    {"removed_id_mismatch", std::to_string(removed.id_mismatch)},
                    {"grouped_accounts", std::to_string(groups.size())},
                    {"tie_excluded", std::to_string(excluded)},
                    {"group_0", std::to_string(samples.at(ScoreType::kEnglish).first.size())},
                    {"group_1", std::to_string(samples.at(ScoreType::kEnglish).second.size())}};
  detail::WriteSummary(cfg.Out("botscores_summary.csv"), result);
  return result;
}

// ks ---------------------------------------------------------------------------

inline std::optional<Sample> ReadSampleFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  csv::Reader reader(in);
  csv::Record rec;
  if (!reader.Next(rec)) throw FormatError(path.string() + ": missing header row");
  const csv::Header header(rec);
  const auto col = header.Require("value", path.string());
  std::vector<double> values;
  while (reader.Next(rec)) {
    if (rec.size() == 1 && rec[0].empty()) continue;
    auto v = rec.size() == header.size() ? csv::ParseDouble(rec[col]) : std::nullopt;
    if (!v || !std::isfinite(*v)) {
      throw FormatError(path.string() + ": bad value in row " + std::to_string(reader.records()));
    }
    values.push_back(*v);
  }
  return Sample(std::move(values));
}

inline StageResult CmdKs(const PipelineConfig &cfg, const Logger &log = {}) {
  const auto dir = cfg.Out("samples");
  std::map<ScoreType, GroupSamples> sets;
  for (auto t : kAllScoreTypes) {
    auto s0 = ReadSampleFile(dir / SampleFileName(t, 0));
    auto s1 = ReadSampleFile(dir / SampleFileName(t, 1));
    if (!s0 || !s1) {
      log.Warn("ks: samples for score type '" + std::string(ScoreKey(t)) + "' are missing");
      continue;
    }
    sets.emplace(t, GroupSamples{std::move(*s0), std::move(*s1)});
  }
  if (sets.empty()) throw DataError("ks: no group samples found; run 'botscores' first");
  OutputLock lock(cfg.output_dir);
  const auto rows = KsTable(sets, cfg.alpha);

  StageResult result;
  {
    auto out = detail::OpenOut(cfg.Out("ks_table.csv"));
    csv::WriteRecord(out, {"score_type", "n0", "n1", "d_statistic", "p_value", "reject_h0", "note"});
    for (const auto &r : rows) {
      if (!r.result) {
        log.Warn("ks: " + std::string(ScoreDisplayName(r.score_type)) + ": " + r.note);
        csv::WriteRecord(out, {std::string(ScoreDisplayName(r.score_type)), "", "", "", "", "",
                               r.note});
        continue;
      }
      csv::WriteRecord(out, {std::string(ScoreDisplayName(r.score_type)),
                             std::to_string(r.result->n1), std::to_string(r.result->n2),
                             csv::FormatDouble(r.result->d_statistic),
                             csv::FormatDouble(r.result->p_value), r.reject ? "True" : "False",
                             ""});
    }
  }
  result.written.push_back(cfg.Out("ks_table.csv"));

  for (const auto &[t, pair] : sets) {
    const auto h0 = MakeHistogram(pair.first, 0.0, 1.0, cfg.histogram_bins);
    const auto h1 = MakeHistogram(pair.second, 0.0, 1.0, cfg.histogram_bins);
    const std::string key(ScoreKey(t));
    {
      auto out = detail::OpenOut(cfg.Out("hist_" + key + ".csv"));
      csv::WriteRecord(out, {"bin", "lo", "hi", "count_group0", "count_group1"});
      for (std::size_t i = 0; i < h0.bin_count(); ++i) {
        const double hi = i + 1 == h0.bin_count() ? h0.hi : h0.BinLow(i + 1);
        csv::WriteRecord(out, {std::to_string(i), csv::FormatDouble(h0.BinLow(i)),
                               csv::FormatDouble(hi), std::to_string(h0.counts[i]),
                               std::to_string(h1.counts[i])});
      }
      csv::WriteRecord(out, {"underflow", "", "", std::to_string(h0.underflow),
                             std::to_string(h1.underflow)});
      csv::WriteRecord(out, {"overflow", "", "", std::to_string(h0.overflow),
                             std::to_string(h1.overflow)});
    }
    result.written.push_back(cfg.Out("hist_" + key + ".csv"));
    {
      auto out = detail::OpenOut(cfg.Out("hist_" + key + ".svg"));
      WriteHistogramSvg(out, std::string(ScoreDisplayName(t)) + " bot score by group",
                        std::string(ScoreDisplayName(t)) + " bot score",
                        {{"neutral (0), n=" + std::to_string(pair.first.size()), "#1f77b4", h0},
                         {"pro-China (1), n=" + std::to_string(pair.second.size()), "#d62728",
                          h1}});
    }
    result.written.push_back(cfg.Out("hist_" + key + ".svg"));
  }
  std::uint64_t rejected = 0;
  for (const auto &r : rows) rejected += r.reject ? 1 : 0;
  result.summary = {{"rows", std::to_string(rows.size())},
                    {"rows_with_result", std::to_string(sets.size())},
                    {"rejected_h0", std::to_string(rejected)}};
  return result;
}

// report -------------------------------------------------------------------------

inline const std::vector<std::string> &StageOutputs() {
  static const std::vector<std::string> kFiles = {
      "labeled_corpus.csv", "label_summary.csv",  "model.tsv",
      "eval_report.csv",    "predictions.csv",    "prediction_summary.csv",
      "ngram_summary.csv",  "botscores_summary.csv", "removal_report.csv",
      "ks_table.csv"};
  return kFiles;
}

inline StageResult CmdReport(const PipelineConfig &cfg, const Logger &log = {}) {
  std::vector<std::string> missing;
  for (const auto &f : StageOutputs()) {
    if (!fs::exists(cfg.Out(f))) missing.push_back(f);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto &m : missing) list += "\n  " + m;
    throw DataError("report: missing stage outputs:" + list);
  }
  auto [docs, ingest] = detail::LoadTargetCorpus(cfg, log);
  OutputLock lock(cfg.output_dir);

  std::map<std::string, double> tweets_per_user;
  for (const auto &d : docs) tweets_per_user[d.author_or_community] += 1.0;
  std::vector<double> activity;
  for (const auto &[u, c] : tweets_per_user) activity.push_back(c);

  std::ostringstream md;
  md << "# propaganda-lens run report\n\n";
  auto table_from_csv = [&](const std::string &file) {
    std::ifstream in(cfg.Out(file), std::ios::binary);
    csv::Reader reader(in);
    csv::Record rec;
    bool header = true;
    while (reader.Next(rec)) {
      if (rec.size() == 1 && rec[0].empty()) continue;
      md << "|";
      for (auto &f : rec) {
        for (auto &c : f) {
          if (c == '|' || c == '\n') c = ' ';
        }
        md << ' ' << f << " |";
      }
      md << '\n';
      if (header) {
        md << "|";
        for (std::size_t i = 0; i < rec.size(); ++i) md << " --- |";
        md << '\n';
        header = false;
      }
    }
    md << "\nSource: `" << file << "`\n\n";
  };
  md << "## Seed corpus labeling\n\n";
  table_from_csv("label_summary.csv");
  md << "## Classifier evaluation\n\n";
  table_from_csv("eval_report.csv");
  md << "Model: `model.tsv`\n\n";
  md << "## Target predictions\n\n";
  table_from_csv("prediction_summary.csv");
  md << "Predictions: `predictions.csv`\n\n";
  md << "## User activity\n\n";
  if (!activity.empty()) {
    const auto tail = LongTail(Sample(activity));
    md << "| users | max | mean | p50 | p90 | p99 |\n| --- | --- | --- | --- | --- | --- |\n";
    md << "| " << tail.n << " | " << csv::FormatDouble(tail.max) << " | "
       << csv::FormatDouble(tail.mean) << " | " << csv::FormatDouble(tail.percentiles.at(50))
       << " | " << csv::FormatDouble(tail.percentiles.at(90)) << " | "
       << csv::FormatDouble(tail.percentiles.at(99)) << " |\n\n";
  } else {
    md << "No target documents.\n\n";
  }
  md << "## Distinct n-grams\n\n";
  table_from_csv("ngram_summary.csv");
  for (int n : cfg.ngram_orders) {
    md << "- `ngram_" << n << ".csv`\n";
    if (cfg.user_cap) md << "- `ngram_" << n << "_capped.csv`\n";
  }
  md << "\n## Bot scores\n\n";
  table_from_csv("removal_report.csv");
  table_from_csv("botscores_summary.csv");
  md << "## Two-sample Kolmogorov-Smirnov tests (alpha = " << csv::FormatDouble(cfg.alpha)
     << ")\n\n";
  table_from_csv("ks_table.csv");
  for (auto t : kAllScoreTypes) {
    const std::string key(ScoreKey(t));
    if (fs::exists(cfg.Out("hist_" + key + ".svg"))) {
      md << "- `hist_" << key << ".svg` (`hist_" << key << ".csv`)\n";
    }
  }
  md << "\nRun manifest: `manifest.json`\n";

  StageResult result;
  {
    auto out = detail::OpenOut(cfg.Out("report.md"));
    out << md.str();
  }
  result.written.push_back(cfg.Out("report.md"));

  nlohmann::ordered_json manifest;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["config_digest"] = Sha256Hex(cfg.Canonical());
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  auto add_input = [&](const std::string &name, const fs::path &p) {
    if (!p.empty() && fs::exists(p) && fs::is_regular_file(p)) {
      inputs[name] = {{"path", p.generic_string()}, {"sha256", Sha256File(p)}};
    }
  };
  add_input("seed_corpus", cfg.seed_corpus);
  add_input("target_corpus", cfg.target_corpus);
  add_input("label_map", cfg.label_map);
  add_input("stop_list", cfg.stop_list);
  add_input("score_store", cfg.score_store);
  add_input("external_predictions", cfg.external_predictions);
  manifest["inputs"] = inputs;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  for (const auto &f : StageOutputs()) outputs[f] = Sha256File(cfg.Out(f));
  outputs["report.md"] = Sha256File(cfg.Out("report.md"));
  manifest["outputs"] = outputs;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (const auto &[stage, file] :
       std::vector<std::pair<std::string, std::string>>{{"label", "label_summary.csv"},
                                                        {"train_eval", "train_eval_summary.csv"},
                                                        {"predict", "prediction_summary.csv"},
                                                        {"botscores", "botscores_summary.csv"}}) {
    if (!fs::exists(cfg.Out(file))) continue;
    nlohmann::ordered_json stage_counts = nlohmann::ordered_json::object();
    for (const auto &[k, v] : detail::ReadSummary(cfg.Out(file))) stage_counts[k] = v;
    counts[stage] = stage_counts;
  }
  counts["report"] = {{"target_documents", docs.size()}, {"users", activity.size()}};
  manifest["stage_counts"] = counts;
  manifest["generated_at"] = FormatIso8601(SystemClock().WallNow());
  {
    auto out = detail::OpenOut(cfg.Out("manifest.json"));
    out << manifest.dump(2) << '\n';
  }
  result.written.push_back(cfg.Out("manifest.json"));
  result.summary = {{"users", std::to_string(activity.size())}};
  return result;
}

}  // namespace plens

#endif  // PLENS_PIPELINE_HPP_
