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

#include "harvest/bench/suite.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "harvest/bench/trial.h"
#include "harvest/common/error.h"
#include "harvest/runtime/timing.h"
#include "harvest/store/json_codec.h"

namespace harvest::bench {

namespace fs = std::filesystem;
using store::Json;

namespace {

constexpr const char* kSuiteFile = "suite.json";

std::string Fixed1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::vector<std::string> RowCells(const ResultRow& r) {
  const auto& m = r.metrics;
  return {r.label,
          Fixed1(m.ss),
          Fixed1(100.0 * m.sr),
          m.cycle_time ? Fixed1(*m.cycle_time) : "n/a",
          m.dr ? Fixed1(100.0 * *m.dr) : "n/a",
          Fixed1(r.effective_rate),
          Fixed1(1000.0 * r.jitter_p95),
          std::to_string(r.must_go)};
}

const std::vector<std::string>& Header() {
  static const std::vector<std::string> h = {"label",  "SS",      "SR(%)",          "cycle_time(s)",
                                             "DR(%)", "rate(Hz)", "jitter_p95(ms)", "must_go"};
  return h;
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw RuntimeFault("failed writing " + path.string());
}

}  // namespace

std::string LabelSlug(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

BenchmarkConfig ParseBenchmarkConfig(const Json& j) {
  store::CheckKeys(j,
                   {"name", "trials", "seeds", "base_seed", "output_dir", "stage_weights",
                    "configurations", "scene", "sim", "views", "policy", "control", "prompt"},
                   "benchmark config");
  BenchmarkConfig c;
  try {
    c.name = j.value("name", c.name);
    c.trials = j.value("trials", c.trials);
    if (c.trials == 0) throw ValidationError("trials must be >= 1");
    if (j.contains("seeds")) {
      c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
      if (c.seeds.size() < c.trials) throw ValidationError("seeds: fewer seeds than trials");
      c.seeds.resize(c.trials);
    } else {
      const std::uint64_t base = j.value("base_seed", std::uint64_t{1});
      for (std::size_t i = 0; i < c.trials; ++i) c.seeds.push_back(base + i);
    }
    c.output_dir = j.value("output_dir", c.output_dir.string());
    if (j.contains("stage_weights")) {
      c.weights.w = j["stage_weights"].get<std::vector<double>>();
      if (c.weights.w.size() != sim::kNumStages) {
        throw ValidationError("stage_weights: expected one weight per stage");
      }
    }
    c.weights.Validate();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("benchmark config: ") + e.what());
  }

  Json base = Json::object();
  for (const char* key : {"scene", "sim", "views", "policy", "control", "prompt"}) {
    if (j.contains(key)) base[key] = j[key];
  }
  if (!j.contains("configurations")) {
    c.configurations.push_back({c.name, base});
  } else {
    const Json& list = j["configurations"];
    if (!list.is_array() || list.empty()) {
      throw ValidationError("configurations must be a non-empty array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "configurations[" + std::to_string(i) + "]";
      store::CheckKeys(list[i], {"label", "overrides"}, where);
      if (!list[i].contains("label") || !list[i]["label"].is_string()) {
        throw ValidationError(where + ".label must be a string");
      }
      Configuration conf;
      conf.label = list[i]["label"].get<std::string>();
      conf.run_config = base;
      if (list[i].contains("overrides")) conf.run_config.merge_patch(list[i]["overrides"]);
      for (const auto& other : c.configurations) {
        if (LabelSlug(other.label) == LabelSlug(conf.label)) {
          throw ValidationError(where + ".label duplicates '" + other.label + "'");
        }
      }
      c.configurations.push_back(std::move(conf));
    }
  }
  for (std::size_t i = 0; i < c.configurations.size(); ++i) {
    try {
      ParseRunSpec(c.configurations[i].run_config);
    } catch (const ValidationError& e) {
      throw ValidationError("configurations[" + std::to_string(i) + "] (" +
                            c.configurations[i].label + "): " + e.what());
    }
  }
  return c;
}

// Hand-written configs may carry // and /* */ comments.
BenchmarkConfig LoadBenchmarkConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return ParseBenchmarkConfig(j);
}

ResultRow SummarizeEpisodes(const std::string& label,
                            const std::vector<store::EpisodeRecord>& episodes,
                            const metrics::StageWeights& weights) {
  ResultRow row;
  row.label = label;
  row.trials = episodes.size();
  std::vector<metrics::EpisodeOutcome> outcomes;
  std::vector<double> jitter;
  double rate_sum = 0.0;
  for (const auto& e : episodes) {
    outcomes.push_back(metrics::OutcomeFromManifest(e.manifest));
    if (e.manifest.fault) ++row.faulted;
    rate_sum += e.manifest.timing.effective_rate;
    row.must_go += e.manifest.timing.must_go_count;
    for (const auto& t : e.ticks) jitter.push_back(t.dispatched - t.scheduled);
  }
  row.metrics = metrics::Evaluate(outcomes, weights);
  row.effective_rate = episodes.empty() ? 0.0 : rate_sum / static_cast<double>(episodes.size());
  if (!jitter.empty()) row.jitter_p95 = runtime::Percentile(jitter, 0.95);
  return row;
}

ResultTable RunSuite(const BenchmarkConfig& config, bool overwrite) {
  const fs::path& out = config.output_dir;
  if (fs::exists(out) && !fs::is_empty(out)) {
    if (!overwrite) {
      throw ValidationError("output directory " + out.string() + " is not empty");
    }
    fs::remove_all(out);
  }
  fs::create_directories(out);
  ResultTable table;
  Json suite = {{"name", config.name},
                {"weights", config.weights.w},
                {"labels", Json::array()},
                {"seeds", config.seeds}};
  for (const Configuration& conf : config.configurations) {
    const fs::path dir = out / LabelSlug(conf.label);
    std::vector<store::EpisodeRecord> episodes;
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
      char id[32];
      std::snprintf(id, sizeof id, "trial-%04zu", i);
      store::EpisodeRecord rec = RunTrial(conf.run_config, config.seeds[i], id);
      // Summaries always come from what was persisted.
      episodes.push_back(store::LoadEpisode(store::WriteEpisode(dir, rec)));
    }
    table.rows.push_back(SummarizeEpisodes(conf.label, episodes, config.weights));
    suite["labels"].push_back(conf.label);
  }
  WriteFile(out / kSuiteFile, suite.dump(2) + "\n");
  WriteFile(out / "results.csv", EmitTable(table, TableFormat::kCsv));
  WriteFile(out / "results.md", EmitTable(table, TableFormat::kMarkdown));
  return table;
}

ResultTable TableFromResults(const fs::path& results_dir) {
  std::ifstream in(results_dir / kSuiteFile);
  if (!in) throw ValidationError("no " + std::string(kSuiteFile) + " in " + results_dir.string());
  Json suite;
  metrics::StageWeights weights;
  std::vector<std::string> labels;
  try {
    suite = Json::parse(in);
    weights.w = suite.at("weights").get<std::vector<double>>();
    labels = suite.at("labels").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string(kSuiteFile) + ": " + e.what());
  }
  ResultTable table;
  for (const std::string& label : labels) {
    std::vector<store::EpisodeRecord> episodes;
    for (const fs::path& dir : store::ListEpisodes(results_dir / LabelSlug(label))) {
      episodes.push_back(store::LoadEpisode(dir));
    }
    if (episodes.empty()) throw ValidationError("no episodes stored for '" + label + "'");
    table.rows.push_back(SummarizeEpisodes(label, episodes, weights));
  }
  return table;
}

std::string EmitTable(const ResultTable& table, TableFormat format) {
  if (table.rows.empty()) throw ValidationError("cannot emit an empty table");
  std::vector<std::vector<std::string>> cells = {Header()};
  for (const ResultRow& r : table.rows) cells.push_back(RowCells(r));
  std::ostringstream out;
  if (format == TableFormat::kCsv) {
    for (const auto& row : cells) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        const std::string& c = row[i];
        const bool quote = c.find_first_of(",\"\n") != std::string::npos;
        if (i) out << ',';
        if (quote) {
          out << '"';
          for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
          out << '"';
        } else {
          out << c;
        }
      }
      out << '\n';
    }
    return out.str();
  }
  std::vector<std::size_t> width(Header().size(), 0);
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto emit = [&](const std::vector<std::string>& row) {
    out << '|';
    for (std::size_t i = 0; i < row.size(); ++i) {
      // Label left-aligned, numbers right-aligned.
      const std::string pad(width[i] - row[i].size(), ' ');
      out << ' ' << (i == 0 ? row[i] + pad : pad + row[i]) << " |";
    }
    out << '\n';
  };
  emit(cells[0]);
  out << '|';
  for (std::size_t i = 0; i < width.size(); ++i) {
    out << (i == 0 ? ":" : "-") << std::string(width[i], '-') << (i == 0 ? "-" : ":") << '|';
  }
  out << '\n';
  for (std::size_t r = 1; r < cells.size(); ++r) emit(cells[r]);
  return out.str();
}

}  // namespace harvest::bench
