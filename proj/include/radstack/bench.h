// Copyright 2026 The RadStack Authors
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

#ifndef RADSTACK_BENCH_H_
#define RADSTACK_BENCH_H_

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "radstack/planner.h"
#include "radstack/simulator.h"

namespace radstack {

// A named toggle set such as "full", "no-relaxation" or
// "no-relaxation+no-goal".
struct ToggleSet {
  std::string name;
  PlannerToggles toggles;
};

// Throws ConfigError on an unknown component.
ToggleSet ParseToggleSet(std::string_view text);

struct BenchCase {
  std::string name;
  Scenario scenario;
};

struct BenchRow {
  std::string scenario;
  std::string planner;
  std::string toggles;
  std::string outcome;
  double route_completion = 0.0;
  std::map<std::string, int> tag_histogram;
  double mean_aggregate = 0.0;
  int ticks = 0;

  bool operator==(const BenchRow&) const = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();

  bool operator==(const BenchReport&) const = default;
  bool AnyErrored() const;
};

// Pure function of an episode log.
BenchRow RowFromLog(const EpisodeLog& log, const std::string& toggle_name);

// Sorts rows by (scenario, planner, toggles).
void SortRows(std::vector<BenchRow>& rows);

struct SuiteConfig {
  PlannerConfig planner;  // kind and toggles are overridden per row
  SimConfig sim;
  const Vocabulary* vocab = nullptr;
  const PlanHeadModel* model = nullptr;
  int jobs = 1;
};

struct SuiteResult {
  BenchReport report;
  std::vector<EpisodeLog> logs;  // parallel to report.rows
};

// Runs cases x planners x toggle sets. Rows are independent and may run on
// `jobs` threads; the output does not depend on the thread count.
SuiteResult RunSuite(const std::vector<BenchCase>& cases,
                     const std::vector<PlannerKind>& planners,
                     const std::vector<ToggleSet>& toggle_sets, const SuiteConfig& config);

struct LatencyStats {
  std::string planner;
  std::string stage;
  int calls = 0;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
};

// Nearest-rank percentiles of `seconds`.
LatencyStats SummarizeLatency(std::vector<double> seconds);

// Times `call` on a monotonic clock after `warmup` untimed calls.
LatencyStats MeasureLatency(const std::function<void()>& call, int n_calls, int warmup);

// One planner call per measurement on the scenario's initial state.
LatencyStats MeasurePlannerLatency(const Scenario& scenario, const PlannerConfig& config,
                                   const Vocabulary* vocab, const PlanHeadModel* model,
                                   int n_calls, int warmup);

// Feature extraction plus classify (and refine for kClassifyAndRefine).
LatencyStats MeasurePlanHeadLatency(const Scenario& scenario, const PlanHeadModel& model,
                                    AnytimeBudget budget, int n_calls, int warmup);

enum class ReportFormat { kText, kStructured, kSvg };

nlohmann::ordered_json ReportToJson(const BenchReport& report);
BenchReport ReportFromJson(const nlohmann::ordered_json& j);
std::string ReportToText(const BenchReport& report);
// One bar per planner kind: mean route completion.
std::string ReportToSvg(const BenchReport& report);

void EmitReport(const BenchReport& report, ReportFormat format,
                const std::filesystem::path& path);
BenchReport LoadReport(const std::filesystem::path& path);

nlohmann::ordered_json LatencyToJson(const std::vector<LatencyStats>& stats);

}  // namespace radstack

#endif  // RADSTACK_BENCH_H_
