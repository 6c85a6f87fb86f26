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

// Writes the deterministic desk-scale demo fixture.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "plens/synthetic.hpp"

int main(int argc, char **argv) {
  CLI::App app{"write the propaganda-lens demo fixture"};
  std::string out = "data/demo";
  plens::synthetic::FixtureOptions opt;
  app.add_option("--out", out, "fixture directory")->capture_default_str();
  app.add_option("--seed", opt.seed, "generator seed")->capture_default_str();
  app.add_option("--titles", opt.reddit_titles, "number of seed titles")->capture_default_str();
  app.add_option("--users", opt.users, "number of tweeting accounts")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  const auto paths = plens::synthetic::WriteDemoFixture(out, opt);
  std::cout << "fixture written to " << paths.dir.string() << "\n"
            << "run: plens --config " << paths.config.string() << " label\n";
  return 0;
}
