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

// plens: command-line driver for the propaganda-lens pipeline.
//
//   plens --config run.conf label
//   plens --config run.conf train-eval
//   plens --config run.conf predict [--import predictions.csv]
//   plens --config run.conf ngram | botscores | ks | report

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plens/plens.hpp"

namespace {

int Run(int argc, char **argv) {
  CLI::App app{"propaganda-lens: weakly supervised propaganda detection and group statistics"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string output_dir;
  bool verbose = false;
  bool print_stopwords = false;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--output-dir", output_dir, "output directory (overrides the config)");
  app.add_option("--set", overrides, "override any config key, as key=value")->take_all();
  app.add_flag("-v,--verbose", verbose, "log progress to stderr");
  app.add_flag("--print-stopwords", print_stopwords, "print the built-in stop-word list and exit");

  auto *label = app.add_subcommand("label", "label the seed corpus by community");
  auto *train_eval = app.add_subcommand("train-eval", "train the baseline and evaluate it");
  auto *predict = app.add_subcommand("predict", "label the target corpus");
  std::string import_path;
  predict->add_option("--import", import_path, "import an external model's predictions file");
  auto *ngram = app.add_subcommand("ngram", "distinct n-gram reports per group");
  auto *botscores = app.add_subcommand("botscores", "filter and group account bot scores");
  auto *ks = app.add_subcommand("ks", "two-sample KS tests and score histograms");
  auto *report = app.add_subcommand("report", "consolidated report and run manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return static_cast<int>(plens::ExitCode::kUsage);
  }

  if (print_stopwords) {
    for (auto w : plens::kDefaultStopWords) std::cout << w << '\n';
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return static_cast<int>(plens::ExitCode::kUsage);
  }

  plens::PipelineConfig cfg;
  if (!config_path.empty()) {
    if (!std::filesystem::exists(config_path)) {
      throw plens::UsageError("config file not found: " + config_path);
    }
    cfg = plens::LoadConfig(config_path);
  }
  for (const auto &kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw plens::UsageError("--set expects key=value: " + kv);
    cfg.Set(kv.substr(0, eq), kv.substr(eq + 1), std::filesystem::current_path());
  }
  if (seed) cfg.seed = *seed;
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  plens::ValidateConfig(cfg);

  const plens::Logger log{verbose, &std::cerr};
  plens::StageResult result;
  if (label->parsed()) {
    result = plens::CmdLabel(cfg, log);
  } else if (train_eval->parsed()) {
    result = plens::CmdTrainEval(cfg, log);
  } else if (predict->parsed()) {
    std::optional<std::filesystem::path> imp;
    if (!import_path.empty()) imp = import_path;
    result = plens::CmdPredict(cfg, log, imp);
  } else if (ngram->parsed()) {
    result = plens::CmdNGram(cfg, log);
  } else if (botscores->parsed()) {
    result = plens::CmdBotScores(cfg, log);
  } else if (ks->parsed()) {
    result = plens::CmdKs(cfg, log);
  } else if (report->parsed()) {
    result = plens::CmdReport(cfg, log);
  }
  for (const auto &[k, v] : result.summary) std::cout << k << '\t' << v << '\n';
  for (const auto &p : result.written) log.Info("wrote " + p.string());
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return Run(argc, argv);
  } catch (const plens::Error &e) {
    std::cerr << "plens: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::invalid_argument &e) {
    std::cerr << "plens: " << e.what() << '\n';
    return static_cast<int>(plens::ExitCode::kUsage);
  } catch (const std::exception &e) {
    std::cerr << "plens: " << e.what() << '\n';
    return static_cast<int>(plens::ExitCode::kDataFormat);
  }
}
