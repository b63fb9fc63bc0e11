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

#ifndef HARVEST_BENCH_SUITE_H_
#define HARVEST_BENCH_SUITE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harvest/metrics/metrics.h"
#include "harvest/store/record.h"

namespace harvest::bench {

struct Configuration {
  std::string label;
  nlohmann::json run_config;  // base sections with the overrides merged in
};

struct BenchmarkConfig {
  std::string name = "bench";
  std::size_t trials = 50;
  std::vector<std::uint64_t> seeds;  // one per trial
  std::filesystem::path output_dir = "results";
  metrics::StageWeights weights = metrics::StageWeights::Uniform();
  std::vector<Configuration> configurations;
};

// Throws ValidationError with the path of the offending field.
BenchmarkConfig ParseBenchmarkConfig(const nlohmann::json& j);
BenchmarkConfig LoadBenchmarkConfig(const std::filesystem::path& path);

struct ResultRow {
  std::string label;
  metrics::MetricsReport metrics;
  double effective_rate = 0.0;  // mean over trials, Hz
  double jitter_p95 = 0.0;      // pooled over all ticks, seconds
  std::size_t must_go = 0;      // summed over trials
  std::size_t trials = 0;
  std::size_t faulted = 0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

enum class TableFormat { kCsv, kMarkdown };

// Builds one row from the episodes of a configuration.
ResultRow SummarizeEpisodes(const std::string& label,
                            const std::vector<store::EpisodeRecord>& episodes,
                            const metrics::StageWeights& weights);

// Runs every configuration over the same seeds, writes episodes under
// output_dir/<label>/, results.csv, results.md and suite.json. Refuses a
// non-empty output directory unless `overwrite`.
ResultTable RunSuite(const BenchmarkConfig& config, bool overwrite = false);

// Rebuilds the table from a directory written by RunSuite.
ResultTable TableFromResults(const std::filesystem::path& results_dir);

// Throws ValidationError on an empty table.
std::string EmitTable(const ResultTable& table, TableFormat format);

// Directory-safe label.
std::string LabelSlug(const std::string& label);

}  // namespace harvest::bench

#endif  // HARVEST_BENCH_SUITE_H_
