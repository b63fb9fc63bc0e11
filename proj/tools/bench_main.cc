// Copyright 2026 The Harvest Runtime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment driver: run suites, rebuild tables, score policies against
// recorded demonstrations and replay stored episodes.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "harvest/bench/loss_eval.h"
#include "harvest/bench/suite.h"
#include "harvest/common/error.h"
#include "harvest/store/analysis.h"
#include "harvest/store/record.h"

namespace {

using nlohmann::json;
namespace hb = harvest::bench;
namespace hs = harvest::store;

json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw harvest::ValidationError("cannot open " + path);
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw harvest::ValidationError(path + ": " + e.what());
  }
}

int Run(int argc, char** argv) {
  CLI::App app{"Benchmark driver for the harvesting runtime"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  bool overwrite = false;
  auto* run = app.add_subcommand("run", "Run every configuration of a benchmark config");
  run->add_option("config", config_path, "Benchmark config (JSON)")->required();
  run->add_option("--output", output_override, "Override output_dir");
  run->add_flag("--overwrite", overwrite, "Replace a non-empty output directory");

  std::string results_dir;
  std::string format = "md";
  auto* table = app.add_subcommand("table", "Rebuild the result table from stored episodes");
  table->add_option("results_dir", results_dir)->required();
  table->add_option("--format", format)->check(CLI::IsMember({"csv", "md"}));

  std::string dataset;
  std::string policy_config;
  auto* loss = app.add_subcommand("loss", "Mean imitation loss of a policy on a dataset");
  loss->add_option("dataset", dataset)->required();
  loss->add_option("policy_config", policy_config)->required();

  std::string episode_dir;
  std::string replay_config;
  std::optional<std::uint64_t> seed;
  auto* replay = app.add_subcommand("replay", "Re-execute a stored episode and compare states");
  replay->add_option("episode_dir", episode_dir)->required();
  replay->add_option("--config", replay_config, "Run config to replay against (default: stored)");
  replay->add_option("--seed", seed, "Override the simulator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) {
    hb::BenchmarkConfig config = hb::LoadBenchmarkConfig(config_path);
    if (!output_override.empty()) config.output_dir = output_override;
    const hb::ResultTable t = hb::RunSuite(config, overwrite);
    std::cout << hb::EmitTable(t, hb::TableFormat::kMarkdown);
    std::cout << "episodes written to " << config.output_dir.string() << "\n";
    return 0;
  }
  if (*table) {
    const hb::ResultTable t = hb::TableFromResults(results_dir);
    std::cout << hb::EmitTable(t, format == "csv" ? hb::TableFormat::kCsv
                                                  : hb::TableFormat::kMarkdown);
    return 0;
  }
  if (*loss) {
    const hb::LossReport r = hb::EvaluateLoss(dataset, ReadJson(policy_config));
    std::cout << json{{"mean_loss", r.mean_loss}, {"steps", r.steps}, {"episodes", r.episodes}}
                     .dump(2)
              << "\n";
    return 0;
  }
  const hs::EpisodeRecord rec = hs::LoadEpisode(episode_dir);
  const json config = replay_config.empty() ? rec.manifest.config : ReadJson(replay_config);
  hs::ReplayOptions options;
  options.seed_override = seed;
  const hs::ReplayResult r = hs::Replay(rec, config, options);
  json out = {{"episode", rec.manifest.id},
              {"replayed", r.replayed},
              {"truncated", r.truncated},
              {"identical", !r.first_divergence},
              {"first_divergence", r.first_divergence ? json(*r.first_divergence) : json(nullptr)}};
  std::cout << out.dump(2) << "\n";
  return r.first_divergence ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const harvest::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return 2;
  }
}
