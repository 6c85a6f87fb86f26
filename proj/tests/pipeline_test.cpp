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

// End-to-end runs of the plens binary on a generated fixture.

#include <algorithm>
#include <filesystem>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "plens/digest.hpp"
#include "plens/synthetic.hpp"
#include "test_util.hpp"

namespace plens {
namespace {

using testing::Quote;
using testing::ReadFile;
using testing::RunCommand;
using testing::TempDir;
using testing::WriteFile;
namespace fs = std::filesystem;

const std::vector<std::string> kStages = {"label", "train-eval", "predict", "ngram",
                                          "botscores", "ks", "report"};

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    synthetic::FixtureOptions opt;
    opt.reddit_titles = 600;
    opt.users = 200;
    paths_ = synthetic::WriteDemoFixture(dir_.path(), opt);
  }

  testing::CommandResult Plens(const std::string &args, bool with_stderr = false) const {
    return RunCommand(std::string(Quote(PLENS_CLI_PATH)) + " --config " + Quote(paths_.config) +
                          " " + args,
                      with_stderr);
  }

  void RunAll() const {
    for (const auto &s : kStages) ASSERT_EQ(Plens(s).exit_code, 0) << s;
  }

  fs::path Out(const std::string &name) const { return dir_.path() / "out" / name; }

  // Relative path -> content for every file under out/, with the manifest
  // timestamp blanked.
  std::map<std::string, std::string> Snapshot() const {
    std::map<std::string, std::string> files;
    for (const auto &e : fs::recursive_directory_iterator(dir_.path() / "out")) {
      if (!e.is_regular_file()) continue;
      std::string body = ReadFile(e.path());
      if (e.path().filename() == "manifest.json") {
        body = std::regex_replace(body, std::regex("\"generated_at\": \"[^\"]*\""),
                                  "\"generated_at\": \"\"");
      }
      files[fs::relative(e.path(), dir_.path() / "out").generic_string()] = body;
    }
    return files;
  }

  std::map<std::string, std::string> InputDigests() const {
    std::map<std::string, std::string> d;
    for (const auto &p : {paths_.seed_corpus, paths_.label_map, paths_.target_corpus,
                          paths_.score_store, paths_.config}) {
      d[p.filename().string()] = Sha256File(p);
    }
    return d;
  }

  TempDir dir_;
  synthetic::FixturePaths paths_;
};

TEST_F(PipelineTest, UsageExitCodes) {
  const std::string cli = Quote(PLENS_CLI_PATH);
  EXPECT_EQ(RunCommand(cli).exit_code, 1);
  EXPECT_EQ(RunCommand(cli + " frobnicate").exit_code, 1);
  EXPECT_EQ(RunCommand(cli + " --config " + Quote(dir_ / "nope.conf") + " label").exit_code, 1);
  EXPECT_EQ(Plens("--set no_such_key=1 label").exit_code, 2);
  EXPECT_EQ(Plens("--set alpha=2 label").exit_code, 1);
  EXPECT_EQ(Plens("--set seed_corpus=missing.jsonl label").exit_code, 1);
  const auto stop = RunCommand(cli + " --print-stopwords");
  EXPECT_EQ(stop.exit_code, 0);
  EXPECT_NE(stop.out.find("the\n"), std::string::npos);
}

TEST_F(PipelineTest, StagesRequireTheirInputs) {
  EXPECT_EQ(Plens("train-eval").exit_code, 1);
  EXPECT_EQ(Plens("predict").exit_code, 1);  // no model yet
  EXPECT_EQ(Plens("ngram").exit_code, 1);
  EXPECT_EQ(Plens("botscores").exit_code, 1);
  EXPECT_EQ(Plens("ks").exit_code, 3);

  ASSERT_EQ(Plens("label").exit_code, 0);
  const auto report = Plens("report", true);
  EXPECT_EQ(report.exit_code, 3);
  EXPECT_NE(report.out.find("ks_table.csv"), std::string::npos);
  EXPECT_NE(report.out.find("model.tsv"), std::string::npos);
  EXPECT_EQ(report.out.find("labeled_corpus.csv"), std::string::npos);
}

TEST_F(PipelineTest, FullRunIsIdempotentAndLeavesInputsAlone) {
  const auto before = InputDigests();
  RunAll();
  const auto first = Snapshot();
  RunAll();
  EXPECT_EQ(Snapshot(), first);
  EXPECT_EQ(InputDigests(), before);
  EXPECT_FALSE(fs::exists(Out(".plens.lock")));

  // Every stage also repeats on its own.
  ASSERT_EQ(Plens("ngram").exit_code, 0);
  ASSERT_EQ(Plens("ks").exit_code, 0);
  EXPECT_EQ(Snapshot(), first);
}

TEST_F(PipelineTest, OutputsAndReport) {
  RunAll();
  std::vector<std::string> ngram_files;
  for (const auto &e : fs::directory_iterator(dir_.path() / "out")) {
    const auto name = e.path().filename().string();
    if (std::regex_match(name, std::regex("ngram_[0-9]+\\.csv"))) ngram_files.push_back(name);
  }
  std::sort(ngram_files.begin(), ngram_files.end());
  EXPECT_EQ(ngram_files,
            (std::vector<std::string>{"ngram_2.csv", "ngram_3.csv", "ngram_4.csv", "ngram_5.csv"}));
  for (int n = 2; n <= 5; ++n) {
    EXPECT_TRUE(fs::exists(Out("ngram_" + std::to_string(n) + "_capped.csv")));
  }

  const auto ks = ReadFile(Out("ks_table.csv"));
  EXPECT_EQ(std::count(ks.begin(), ks.end(), '\n'), 8);
  EXPECT_EQ(ks.rfind("score_type,n0,n1,d_statistic,p_value,reject_h0,note\n", 0), 0u);

  const auto report = ReadFile(Out("report.md"));
  for (const auto &f : {"eval_report.csv", "ngram_2.csv", "ngram_5_capped.csv", "ks_table.csv",
                        "hist_english.svg", "manifest.json", "removal_report.csv"}) {
    EXPECT_NE(report.find(f), std::string::npos) << f;
  }

  const auto manifest = nlohmann::json::parse(ReadFile(Out("manifest.json")));
  EXPECT_EQ(manifest["artifact_version"], "1.0.0");
  EXPECT_EQ(manifest["config_digest"].get<std::string>().size(), 64u);
  EXPECT_EQ(manifest["inputs"]["target_corpus"]["sha256"], Sha256File(paths_.target_corpus));
  EXPECT_EQ(manifest["outputs"]["ks_table.csv"], Sha256File(Out("ks_table.csv")));
  EXPECT_TRUE(manifest.contains("generated_at"));
  EXPECT_TRUE(manifest["stage_counts"].contains("botscores"));
}

TEST_F(PipelineTest, OverridesTakePrecedence) {
  ASSERT_EQ(Plens("label").exit_code, 0);
  ASSERT_EQ(Plens("--output-dir " + Quote(dir_ / "alt") + " label").exit_code, 0);
  EXPECT_EQ(ReadFile(dir_ / "alt/labeled_corpus.csv"), ReadFile(Out("labeled_corpus.csv")));

  ASSERT_EQ(Plens("train-eval").exit_code, 0);
  const auto eval42 = ReadFile(Out("eval_predictions.csv"));
  ASSERT_EQ(Plens("--seed 43 train-eval").exit_code, 0);
  EXPECT_NE(ReadFile(Out("eval_predictions.csv")), eval42);
  ASSERT_EQ(Plens("--set seed=42 train-eval").exit_code, 0);
  EXPECT_EQ(ReadFile(Out("eval_predictions.csv")), eval42);
}

TEST_F(PipelineTest, LabelWithNoMappedCommunity) {
  WriteFile(dir_ / "empty_map.tsv", "nowhere\t0\nelsewhere\t1\n");
  EXPECT_EQ(Plens("--set label_map=" + Quote(dir_ / "empty_map.tsv") + " label").exit_code, 3);
  EXPECT_FALSE(fs::exists(Out(".plens.lock")));
}

TEST_F(PipelineTest, LockFileBlocksConcurrentRun) {
  fs::create_directories(dir_ / "out");
  WriteFile(Out(".plens.lock"), "");
  EXPECT_EQ(Plens("label").exit_code, 1);
  EXPECT_TRUE(fs::exists(Out(".plens.lock")));
  fs::remove(Out(".plens.lock"));
  EXPECT_EQ(Plens("label").exit_code, 0);
}

TEST_F(PipelineTest, KsWithMissingScoreTypeWarnsAndContinues) {
  for (const auto &s : {"label", "train-eval", "predict", "botscores"}) {
    ASSERT_EQ(Plens(s).exit_code, 0) << s;
  }
  fs::remove(Out("samples/friend_group1.csv"));
  const auto r = Plens("ks");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("rows_with_result\t6"), std::string::npos);
  EXPECT_NE(ReadFile(Out("ks_table.csv")).find("Friend,,,,,,missing score type"),
            std::string::npos);
}

TEST_F(PipelineTest, ImportedPredictionsReplaceTheModel) {
  RunAll();
  fs::copy_file(Out("predictions.csv"), dir_ / "external.csv");
  const auto r = Plens("--output-dir " + Quote(dir_ / "imp") + " predict --import " +
                       Quote(dir_ / "external.csv"));
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("mode\timport"), std::string::npos);
  EXPECT_EQ(ReadFile(dir_ / "imp/predictions.csv"), ReadFile(Out("predictions.csv")));
  EXPECT_EQ(Plens("predict --import " + Quote(dir_ / "absent.csv")).exit_code, 1);
}

TEST(PipelineDegenerate, AllAccountsTiedExitsThree) {
  TempDir dir;
  std::string tweets = "id,user_id,text,lang,created_at\n";
  std::string preds = "doc_id,label,prob\n";
  std::string store;
  for (int u = 0; u < 4; ++u) {
    const std::string user = "acct" + std::to_string(u);
    for (int k = 0; k < 2; ++k) {
      const std::string id = std::to_string(100 + 2 * u + k);
      tweets += id + "," + user + ",hello there world,en,2020-03-24T01:00:00Z\n";
      preds += id + "," + std::to_string(k) + (k ? ",0.9\n" : ",0.1\n");
    }
    store += "{\"account_id\":\"" + user +
             "\",\"status\":\"ok\",\"fetched_at\":\"2020-07-15T00:00:00Z\",\"scores\":{"
             "\"english\":0.1,\"user\":0.2,\"friend\":0.3,\"temporal\":0.4,\"network\":0.5,"
             "\"content\":0.6,\"sentiment\":0.7}}\n";
  }
  WriteFile(dir / "tweets.csv", tweets);
  WriteFile(dir / "preds.csv", preds);
  WriteFile(dir / "scores.jsonl", store);
  WriteFile(dir / "run.conf", "target_corpus = tweets.csv\nscore_store = scores.jsonl\n"
                              "output_dir = out\n");
  const std::string cli = Quote(PLENS_CLI_PATH) + " --config " + Quote(dir / "run.conf");
  ASSERT_EQ(RunCommand(cli + " predict --import " + Quote(dir / "preds.csv")).exit_code, 0);
  EXPECT_EQ(RunCommand(cli + " botscores").exit_code, 3);
}

}  // namespace
}  // namespace plens
