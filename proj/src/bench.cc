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

#include "radstack/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "radstack/errors.h"

namespace radstack {

namespace {
constexpr char kModule[] = "bench";
constexpr char kReportFormat[] = "radstack-report v1";
}  // namespace

ToggleSet ParseToggleSet(std::string_view text) {
  ToggleSet set;
  set.name = std::string(text);
  size_t start = 0;
  while (start <= text.size()) {
    const size_t end = std::min(text.find('+', start), text.size());
    const std::string_view part = text.substr(start, end - start);
    if (part == "full") {
    } else if (part == "no-replan") {
      set.toggles.replan = false;
    } else if (part == "no-vocab") {
      set.toggles.vocab = false;
    } else if (part == "no-adjacents") {
      set.toggles.adjacents = false;
    } else if (part == "no-opposing") {
      set.toggles.opposing = false;
    } else if (part == "no-goal") {
      set.toggles.goal = false;
    } else if (part == "no-relaxation") {
      set.toggles.relaxation = false;
    } else {
      throw ConfigError(kModule, "unknown toggle '" + std::string(part) + "'");
    }
    start = end + 1;
  }
  return set;
}

bool BenchReport::AnyErrored() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const BenchRow& r) { return r.outcome == "error"; });
}

BenchRow RowFromLog(const EpisodeLog& log, const std::string& toggle_name) {
  BenchRow row;
  row.scenario = log.scenario_name;
  row.planner = std::string(ToString(log.planner));
  row.toggles = toggle_name;
  row.outcome = log.outcome;
  row.route_completion = log.route_completion;
  row.ticks = static_cast<int>(log.ticks.size());
  double sum = 0.0;
  for (const TickRecord& t : log.ticks) {
    ++row.tag_histogram[std::string(ToString(t.tag))];
    sum += t.breakdown.aggregate;
  }
  row.mean_aggregate = log.ticks.empty() ? 0.0 : sum / static_cast<double>(log.ticks.size());
  return row;
}

void SortRows(std::vector<BenchRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.scenario, a.planner, a.toggles) < std::tie(b.scenario, b.planner, b.toggles);
  });
}

SuiteResult RunSuite(const std::vector<BenchCase>& cases,
                     const std::vector<PlannerKind>& planners,
                     const std::vector<ToggleSet>& toggle_sets, const SuiteConfig& config) {
  struct Job {
    const BenchCase* c;
    PlannerKind planner;
    const ToggleSet* toggles;
  };
  std::vector<Job> jobs;
  for (const BenchCase& c : cases) {
    for (PlannerKind p : planners) {
      for (const ToggleSet& t : toggle_sets) jobs.push_back({&c, p, &t});
    }
  }
  std::vector<EpisodeLog> logs(jobs.size());
  std::vector<BenchRow> rows(jobs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      try {
        PlannerConfig pc = config.planner;
        pc.kind = jobs[i].planner;
        pc.toggles = jobs[i].toggles->toggles;
        EpisodeLog log;
        try {
          log = RunEpisode(jobs[i].c->scenario, pc, config.sim, config.vocab, config.model);
        } catch (const Error& e) {
          log.scenario = jobs[i].c->scenario;
          log.planner = pc.kind;
          log.toggles = Effective(pc).toggles;
          log.seed = config.sim.seed;
          log.events.push_back({0, 0.0, "error", e.what()});
          log.outcome = "error";
          log.final_ego = jobs[i].c->scenario.ego;
          log.route_completion = RouteCompletion(log.scenario, log.final_ego, false);
        }
        log.scenario_name = jobs[i].c->name;
        rows[i] = RowFromLog(log, jobs[i].toggles->name);
        logs[i] = std::move(log);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(config.jobs, static_cast<int>(jobs.size())));
  {
    std::vector<std::jthread> threads;
    for (int t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::tie(rows[a].scenario, rows[a].planner, rows[a].toggles) <
           std::tie(rows[b].scenario, rows[b].planner, rows[b].toggles);
  });
  SuiteResult result;
  for (size_t i : order) {
    result.report.rows.push_back(rows[i]);
    result.logs.push_back(std::move(logs[i]));
  }
  nlohmann::ordered_json echo;
  echo["scenarios"] = cases.size();
  nlohmann::ordered_json planner_names = nlohmann::ordered_json::array();
  for (PlannerKind p : planners) planner_names.push_back(ToString(p));
  echo["planners"] = planner_names;
  nlohmann::ordered_json toggle_names = nlohmann::ordered_json::array();
  for (const ToggleSet& t : toggle_sets) toggle_names.push_back(t.name);
  echo["toggles"] = toggle_names;
  echo["sim_dt"] = config.sim.dt;
  echo["horizon"] = config.sim.horizon;
  echo["agent_policy"] = ToString(config.sim.agent_policy);
  echo["seed"] = config.sim.seed;
  result.report.config = echo;
  return result;
}

// ---------------------------------------------------------------------------
// Latency

LatencyStats SummarizeLatency(std::vector<double> seconds) {
  LatencyStats s;
  s.calls = static_cast<int>(seconds.size());
  if (seconds.empty()) return s;
  std::sort(seconds.begin(), seconds.end());
  const double n = static_cast<double>(seconds.size());
  auto rank = [&](double p) {
    const size_t idx = static_cast<size_t>(std::max(0.0, std::ceil(p * n) - 1.0));
    return seconds[std::min(idx, seconds.size() - 1)] * 1e3;
  };
  s.mean_ms = std::accumulate(seconds.begin(), seconds.end(), 0.0) / n * 1e3;
  s.p50_ms = rank(0.50);
  s.p95_ms = rank(0.95);
  return s;
}

LatencyStats MeasureLatency(const std::function<void()>& call, int n_calls, int warmup) {
  using Clock = std::chrono::steady_clock;
  for (int i = 0; i < warmup; ++i) call();
  std::vector<double> samples;
  samples.reserve(std::max(0, n_calls));
  for (int i = 0; i < n_calls; ++i) {
    const auto t0 = Clock::now();
    call();
    const std::chrono::duration<double> dt = Clock::now() - t0;
    samples.push_back(dt.count());
  }
  return SummarizeLatency(std::move(samples));
}

LatencyStats MeasurePlannerLatency(const Scenario& scenario, const PlannerConfig& config,
                                   const Vocabulary* vocab, const PlanHeadModel* model,
                                   int n_calls, int warmup) {
  Planner planner(scenario, config, vocab, model);
  LatencyStats s = MeasureLatency(
      [&] {
        const PlanOutput out = planner.Plan(scenario.ego, scenario.agents);
        static_cast<void>(out);
      },
      n_calls, warmup);
  s.planner = std::string(ToString(config.kind));
  s.stage = "plan";
  return s;
}

LatencyStats MeasurePlanHeadLatency(const Scenario& scenario, const PlanHeadModel& model,
                                    AnytimeBudget budget, int n_calls, int warmup) {
  const std::vector<ProposalPath> paths = GraphSearch(scenario.ego, scenario, {});
  if (paths.empty()) throw OffMapError(kModule, "latency fixture has no proposal path");
  LatencyStats s = MeasureLatency(
      [&] {
        const SceneFeatures f =
            ExtractFeatures(scenario.ego, scenario.agents, paths.front(), scenario.goal);
        const AnytimeResult r = PlanAnytime(model, f, budget, scenario.ego);
        static_cast<void>(r);
      },
      n_calls, warmup);
  s.planner = "planhead";
  s.stage = budget == AnytimeBudget::kClassifyOnly ? "classify_only" : "classify_and_refine";
  return s;
}

nlohmann::ordered_json LatencyToJson(const std::vector<LatencyStats>& stats) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const LatencyStats& s : stats) {
    out.push_back({{"planner", s.planner},
                   {"stage", s.stage},
                   {"calls", s.calls},
                   {"mean_ms", s.mean_ms},
                   {"p50_ms", s.p50_ms},
                   {"p95_ms", s.p95_ms}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

nlohmann::ordered_json ReportToJson(const BenchReport& report) {
  nlohmann::ordered_json j;
  j["format"] = kReportFormat;
  j["config"] = report.config;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const BenchRow& r : report.rows) {
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto& [tag, count] : r.tag_histogram) hist[tag] = count;
    rows.push_back({{"scenario", r.scenario},
                    {"planner", r.planner},
                    {"toggles", r.toggles},
                    {"outcome", r.outcome},
                    {"route_completion", r.route_completion},
                    {"tag_histogram", hist},
                    {"mean_aggregate", r.mean_aggregate},
                    {"ticks", r.ticks}});
  }
  j["rows"] = rows;
  return j;
}

BenchReport ReportFromJson(const nlohmann::ordered_json& j) {
  try {
    if (j.at("format").get<std::string>() != kReportFormat) {
      throw ParseError(kModule, "unsupported report format");
    }
    BenchReport report;
    report.config = j.at("config");
    for (const auto& r : j.at("rows")) {
      BenchRow row;
      row.scenario = r.at("scenario").get<std::string>();
      row.planner = r.at("planner").get<std::string>();
      row.toggles = r.at("toggles").get<std::string>();
      row.outcome = r.at("outcome").get<std::string>();
      row.route_completion = r.at("route_completion").get<double>();
      for (const auto& [tag, count] : r.at("tag_histogram").items()) {
        row.tag_histogram[tag] = count.get<int>();
      }
      row.mean_aggregate = r.at("mean_aggregate").get<double>();
      row.ticks = r.at("ticks").get<int>();
      report.rows.push_back(std::move(row));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(kModule, std::string("malformed report: ") + e.what());
  }
}

std::string ReportToText(const BenchReport& report) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-28s %-16s %-28s %-13s %10s %10s %6s\n", "scenario",
                "planner", "toggles", "outcome", "completion", "mean_score", "ticks");
  out << buf;
  for (const BenchRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%-28s %-16s %-28s %-13s %10.3f %10.4f %6d\n",
                  r.scenario.c_str(), r.planner.c_str(), r.toggles.c_str(), r.outcome.c_str(),
                  r.route_completion, r.mean_aggregate, r.ticks);
    out << buf;
  }
  std::map<std::string, std::pair<int, int>> goals;  // planner+toggles -> (reached, total)
  for (const BenchRow& r : report.rows) {
    auto& g = goals[r.planner + " [" + r.toggles + "]"];
    g.first += r.outcome == "goal_reached";
    ++g.second;
  }
  out << '\n';
  for (const auto& [key, g] : goals) {
    std::snprintf(buf, sizeof(buf), "%-46s goal_reached %d/%d\n", key.c_str(), g.first,
                  g.second);
    out << buf;
  }
  return out.str();
}

std::string ReportToSvg(const BenchReport& report) {
  std::map<std::string, std::pair<double, int>> by_planner;
  for (const BenchRow& r : report.rows) {
    auto& p = by_planner[r.planner];
    p.first += r.route_completion;
    ++p.second;
  }
  const int bar_w = 80;
  const int gap = 40;
  const int height = 200;
  const int width = std::max(200, static_cast<int>(by_planner.size()) * (bar_w + gap) + gap);
  std::ostringstream out;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n",
                width, height + 80);
  out << buf;
  out << "<text x=\"10\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
         "mean route completion</text>\n";
  int x = gap;
  for (const auto& [planner, p] : by_planner) {
    const double mean = p.second > 0 ? p.first / p.second : 0.0;
    const double h = mean * height;
    std::snprintf(buf, sizeof(buf),
                  "<rect class=\"bar\" data-planner=\"%s\" x=\"%d\" y=\"%.2f\" width=\"%d\" "
                  "height=\"%.2f\" fill=\"#4a78b5\"/>\n"
                  "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\">%s"
                  "</text>\n"
                  "<text x=\"%d\" y=\"%.2f\" font-family=\"sans-serif\" font-size=\"12\">%.3f"
                  "</text>\n",
                  planner.c_str(), x, 40.0 + height - h, bar_w, h, x, height + 60,
                  planner.c_str(), x, 36.0 + height - h, mean);
    out << buf;
    x += bar_w + gap;
  }
  out << "</svg>\n";
  return out.str();
}

void EmitReport(const BenchReport& report, ReportFormat format,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write " + path.string());
  switch (format) {
    case ReportFormat::kText:
      out << ReportToText(report);
      break;
    case ReportFormat::kStructured:
      out << ReportToJson(report).dump(2) << '\n';
      break;
    case ReportFormat::kSvg:
      out << ReportToSvg(report);
      break;
  }
  if (!out) throw IoError(kModule, "write failed for " + path.string());
}

BenchReport LoadReport(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open " + path.string());
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(kModule, path.string() + ": " + e.what());
  }
  return ReportFromJson(j);
}

}  // namespace radstack
