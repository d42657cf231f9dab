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

#include "radstack/cli.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "radstack/bench.h"
#include "radstack/config.h"
#include "radstack/errors.h"
#include "radstack/render.h"
#include "radstack/vocabulary.h"

namespace radstack {

namespace {

constexpr char kModule[] = "cli";

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(kModule, "cannot write " + path.string());
  f << text;
  if (!f) throw IoError(kModule, "write failed for " + path.string());
}

void EnsureDir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(kModule, "cannot create " + dir.string() + ": " + ec.message());
}

void EnsureParent(const std::filesystem::path& file) {
  if (file.has_parent_path()) EnsureDir(file.parent_path());
}

RunConfig ReadConfig(const std::string& path) {
  RunConfig config = path.empty() ? RunConfig{} : LoadConfig(path);
  config.sim.seed = SeedFromEnv(config.sim.seed);
  return config;
}

bool NeedsModel(PlannerKind kind) {
  return kind == PlannerKind::kPlanHead || kind == PlannerKind::kHybrid;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  int count = 1;
  std::int64_t seed = 0;
  std::string out;
};

int GenScenarios(const GenArgs& a, std::ostream& out) {
  const ScenarioKind kind = ScenarioKindFromString(a.kind);
  const std::int64_t seed = static_cast<std::int64_t>(SeedFromEnv(a.seed));
  EnsureDir(a.out);
  for (int i = 0; i < a.count; ++i) {
    const Scenario s = GenerateSyntheticScenario(kind, seed + i);
    ValidateScenario(s);
    const std::filesystem::path path =
        std::filesystem::path(a.out) / (a.kind + "_" + std::to_string(seed + i) + ".json");
    SaveScenario(s, path);
    out << path.string() << '\n';
  }
  return kExitOk;
}

struct RunArgs {
  std::string scenario;
  std::string planner;
  std::string config;
  std::string log;
};

int Run(const RunArgs& a, std::ostream& out) {
  RunConfig config = ReadConfig(a.config);
  config.planner.kind = PlannerKindFromString(a.planner);
  if (NeedsModel(config.planner.kind) && !config.model_path) {
    throw ConfigError("config", "planner '" + a.planner +
                                    "' requires the config key 'model_path'");
  }
  const Scenario scenario = LoadScenario(a.scenario);
  std::optional<PlanHeadModel> model;
  if (NeedsModel(config.planner.kind)) model = PlanHeadModel::Load(*config.model_path);
  std::optional<Vocabulary> vocab;
  if (config.vocab_path) vocab = LoadVocabulary(*config.vocab_path);
  EpisodeLog log = RunEpisode(scenario, config.planner, config.sim, vocab ? &*vocab : nullptr,
                              model ? &*model : nullptr);
  log.scenario_name = std::filesystem::path(a.scenario).stem().string();
  if (!a.log.empty()) {
    EnsureParent(a.log);
    SaveEpisodeLog(log, a.log);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "outcome %s  route_completion %.3f  ticks %zu\n",
                log.outcome.c_str(), log.route_completion, log.ticks.size());
  out << buf;
  for (const EpisodeEvent& e : log.events) {
    out << "event " << e.kind << " tick " << e.tick << (e.detail.empty() ? "" : " ")
        << e.detail << '\n';
  }
  return kExitOk;
}

struct ClusterArgs {
  std::string episodes;
  int k = 64;
  std::uint64_t seed = 0;
  std::string out;
  int horizon_steps = 40;
  int stride = 5;
  int max_iters = 100;
  double dt = 0.1;
};

int ClusterVocab(const ClusterArgs& a, std::ostream& out) {
  std::vector<Waypoints> samples;
  for (const auto& path : ListFiles(a.episodes, ".jsonl")) {
    const EpisodeLog log = LoadEpisodeLog(path);
    for (Waypoints& w : SamplesFromHistory(EgoHistory(log), a.horizon_steps, a.stride)) {
      samples.push_back(std::move(w));
    }
  }
  const ClusterResult r = KMeansCluster(samples, a.k, a.max_iters, SeedFromEnv(a.seed), a.dt);
  EnsureParent(a.out);
  SaveVocabulary(r.vocabulary, a.out);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "samples %zu  K %d  iterations %d  sse %.6g\n",
                samples.size(), a.k, r.iterations,
                r.sse_history.empty() ? 0.0 : r.sse_history.back());
  out << buf;
  return kExitOk;
}

struct TrainArgs {
  std::string samples;
  std::string vocab;
  int epochs = 200;
  double lr = 1e-2;
  std::uint64_t seed = 0;
  std::string out;
  int hidden = 128;
  int stride = 5;
  double temperature = 1.0;
};

int TrainHead(const TrainArgs& a, std::ostream& out) {
  const Vocabulary vocab = LoadVocabulary(a.vocab);
  std::vector<TrainingSample> samples;
  for (const auto& path : ListFiles(a.samples, ".jsonl")) {
    for (TrainingSample& s :
         TrainingSamplesFromLog(LoadEpisodeLog(path), vocab.horizon_steps, a.stride)) {
      samples.push_back(std::move(s));
    }
  }
  if (samples.empty()) throw ConfigError(kModule, "no training samples in " + a.samples);
  const std::uint64_t seed = SeedFromEnv(a.seed);
  PlanHeadModel model(kFeatureDim, a.hidden, vocab, seed);
  model.set_temperature(a.temperature);
  TrainOptions opts;
  opts.epochs = a.epochs;
  opts.lr = a.lr;
  opts.seed = seed;
  const TrainResult r = Train(model, samples, opts);
  EnsureParent(a.out);
  model.Save(a.out);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "samples %zu  epochs %zu  loss %.6g -> %.6g\n",
                samples.size(), r.loss_curve.size(),
                r.loss_curve.empty() ? 0.0 : r.loss_curve.front(),
                r.loss_curve.empty() ? 0.0 : r.loss_curve.back());
  out << buf;
  return kExitOk;
}

struct BenchArgs {
  std::string scenarios;
  std::string planners = "rad";
  std::string toggles = "full";
  int latency_calls = 0;
  std::string report;
  std::string config;
  std::string logs;
  std::string text;
  std::string svg;
  std::string latency_report;
  int jobs = 1;
};

int Bench(const BenchArgs& a, std::ostream& out) {
  const RunConfig config = ReadConfig(a.config);
  std::vector<PlannerKind> planners;
  for (const std::string& p : SplitList(a.planners)) planners.push_back(PlannerKindFromString(p));
  std::vector<ToggleSet> toggles;
  for (const std::string& t : SplitList(a.toggles)) toggles.push_back(ParseToggleSet(t));
  if (planners.empty() || toggles.empty()) {
    throw ConfigError(kModule, "--planners and --toggles must not be empty");
  }
  std::optional<PlanHeadModel> model;
  if (std::any_of(planners.begin(), planners.end(), NeedsModel)) {
    if (!config.model_path) {
      throw ConfigError("config", "planners planhead/hybrid require the config key 'model_path'");
    }
    model = PlanHeadModel::Load(*config.model_path);
  }
  std::optional<Vocabulary> vocab;
  if (config.vocab_path) vocab = LoadVocabulary(*config.vocab_path);

  std::vector<BenchCase> cases;
  for (const auto& path : ListFiles(a.scenarios, ".json")) {
    cases.push_back({path.stem().string(), LoadScenario(path)});
  }
  SuiteConfig sc;
  sc.planner = config.planner;
  sc.sim = config.sim;
  sc.vocab = vocab ? &*vocab : nullptr;
  sc.model = model ? &*model : nullptr;
  sc.jobs = a.jobs;
  const SuiteResult result = RunSuite(cases, planners, toggles, sc);

  for (const std::string& file : {a.report, a.text, a.svg, a.latency_report}) {
    if (!file.empty()) EnsureParent(file);
  }
  EmitReport(result.report, ReportFormat::kStructured, a.report);
  if (!a.text.empty()) EmitReport(result.report, ReportFormat::kText, a.text);
  if (!a.svg.empty()) EmitReport(result.report, ReportFormat::kSvg, a.svg);
  if (!a.logs.empty()) {
    EnsureDir(a.logs);
    for (size_t i = 0; i < result.logs.size(); ++i) {
      const BenchRow& row = result.report.rows[i];
      SaveEpisodeLog(result.logs[i], std::filesystem::path(a.logs) /
                                         (row.scenario + "__" + row.planner + "__" +
                                          row.toggles + ".jsonl"));
    }
  }
  out << ReportToText(result.report);

  if (a.latency_calls > 0 && !cases.empty()) {
    std::vector<LatencyStats> stats;
    for (PlannerKind p : planners) {
      if (p == PlannerKind::kPlanHead) {
        stats.push_back(MeasurePlanHeadLatency(cases.front().scenario, *model,
                                               AnytimeBudget::kClassifyOnly, a.latency_calls,
                                               50));
        stats.push_back(MeasurePlanHeadLatency(cases.front().scenario, *model,
                                               AnytimeBudget::kClassifyAndRefine,
                                               a.latency_calls, 50));
        continue;
      }
      PlannerConfig pc = config.planner;
      pc.kind = p;
      stats.push_back(MeasurePlannerLatency(cases.front().scenario, pc, sc.vocab, sc.model,
                                            a.latency_calls, 50));
    }
    const std::string path =
        a.latency_report.empty() ? a.report + ".latency.json" : a.latency_report;
    WriteText(path, LatencyToJson(stats).dump(2) + "\n");
    char buf[200];
    out << '\n';
    for (const LatencyStats& s : stats) {
      std::snprintf(buf, sizeof(buf), "latency %-16s %-20s n=%d mean %.3f ms  p50 %.3f  p95 %.3f\n",
                    s.planner.c_str(), s.stage.c_str(), s.calls, s.mean_ms, s.p50_ms, s.p95_ms);
      out << buf;
    }
  }
  return result.report.AnyErrored() ? kExitRuntimeError : kExitOk;
}

struct RenderArgs {
  std::string log;
  std::string out;
};

int Render(const RenderArgs& a, std::ostream& out) {
  const EpisodeLog log = LoadEpisodeLog(a.log);
  EnsureParent(a.out);
  WriteText(a.out, RenderEpisodeSvg(log));
  out << a.out << '\n';
  return kExitOk;
}

}  // namespace

std::vector<std::filesystem::path> ListFiles(const std::filesystem::path& dir,
                                             const std::string& extension) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError(kModule, dir.string() + " is not a directory");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<EgoState> EgoHistory(const EpisodeLog& log) {
  std::vector<EgoState> h;
  h.reserve(log.ticks.size() + 1);
  for (const TickRecord& t : log.ticks) h.push_back(t.ego);
  if (!log.ticks.empty()) h.push_back(log.final_ego);
  return h;
}

std::vector<TrainingSample> TrainingSamplesFromLog(const EpisodeLog& log, int horizon_steps,
                                                   int stride) {
  const std::vector<EgoState> history = EgoHistory(log);
  const std::vector<Waypoints> windows = SamplesFromHistory(history, horizon_steps, stride);
  std::vector<TrainingSample> out;
  for (size_t i = 0; i < windows.size(); ++i) {
    const TickRecord& tick = log.ticks[i * std::max(1, stride)];
    std::vector<ProposalPath> paths;
    try {
      paths = GraphSearch(tick.ego, log.scenario, {});
    } catch (const OffMapError&) {
      continue;
    }
    if (paths.empty()) continue;
    out.push_back({ExtractFeatures(tick.ego, tick.agents, paths.front(), log.scenario.goal),
                   windows[i]});
  }
  return out;
}

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-loop motion planning stack: rule-based RAD planner, learned plan head "
               "and hybrid selection in a deterministic 2D simulator.",
               "radstack"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand");

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-scenarios", "Write seeded synthetic scenarios");
  gen_cmd->add_option("--kind", gen.kind, "blocked_lane | lane_change_required | "
                                          "intersection_turn | deadlock_pair")
      ->required();
  gen_cmd->add_option("--count", gen.count, "Number of scenarios")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "First seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one closed-loop episode");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--planner", run.planner, "rad | planhead | hybrid | baseline-static")
      ->required();
  run_cmd->add_option("--config", run.config, "Config file");
  run_cmd->add_option("--log", run.log, "Episode log output (JSON lines)");

  ClusterArgs cluster;
  CLI::App* cluster_cmd =
      app.add_subcommand("cluster-vocab", "Cluster episode logs into a trajectory vocabulary");
  cluster_cmd->add_option("--episodes", cluster.episodes, "Directory of episode logs")
      ->required();
  cluster_cmd->add_option("--k", cluster.k, "Vocabulary size")->capture_default_str();
  cluster_cmd->add_option("--seed", cluster.seed, "Seeding RNG seed")->capture_default_str();
  cluster_cmd->add_option("--out", cluster.out, "Vocabulary output file")->required();
  cluster_cmd->add_option("--horizon-steps", cluster.horizon_steps, "Waypoints per prototype")
      ->capture_default_str();
  cluster_cmd->add_option("--stride", cluster.stride, "Ticks between windows")
      ->capture_default_str();
  cluster_cmd->add_option("--max-iters", cluster.max_iters, "Lloyd iterations")
      ->capture_default_str();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train-head", "Train the learned plan head");
  train_cmd->add_option("--samples", train.samples, "Directory of episode logs")->required();
  train_cmd->add_option("--vocab", train.vocab, "Vocabulary file")->required();
  train_cmd->add_option("--epochs", train.epochs, "Full-batch epochs")->capture_default_str();
  train_cmd->add_option("--lr", train.lr, "Learning rate")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Initialisation seed")->capture_default_str();
  train_cmd->add_option("--out", train.out, "Checkpoint output file")->required();
  train_cmd->add_option("--hidden", train.hidden, "Hidden width")->capture_default_str();
  train_cmd->add_option("--stride", train.stride, "Ticks between samples")
      ->capture_default_str();
  train_cmd->add_option("--temperature", train.temperature, "Soft-target temperature")
      ->capture_default_str();

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a scenario suite and report");
  bench_cmd->add_option("--scenarios", bench.scenarios, "Directory of scenario files")
      ->required();
  bench_cmd->add_option("--planners", bench.planners, "Comma-separated planner kinds")
      ->capture_default_str();
  bench_cmd->add_option("--toggles", bench.toggles,
                        "Comma-separated toggle sets, e.g. full,no-relaxation+no-goal")
      ->capture_default_str();
  bench_cmd->add_option("--latency-calls", bench.latency_calls,
                        "Timed planner calls per planner (0 disables)")
      ->capture_default_str();
  bench_cmd->add_option("--report", bench.report, "Structured report output")->required();
  bench_cmd->add_option("--config", bench.config, "Config file");
  bench_cmd->add_option("--logs", bench.logs, "Directory for episode logs");
  bench_cmd->add_option("--text", bench.text, "Text table output");
  bench_cmd->add_option("--svg", bench.svg, "SVG summary output");
  bench_cmd->add_option("--latency-report", bench.latency_report, "Latency statistics output");
  bench_cmd->add_option("--jobs", bench.jobs, "Episodes run in parallel")
      ->capture_default_str();

  RenderArgs render;
  CLI::App* render_cmd = app.add_subcommand("render", "Render an episode log as SVG");
  render_cmd->add_option("--log", render.log, "Episode log")->required();
  render_cmd->add_option("--out", render.out, "SVG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error [cli]: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return GenScenarios(gen, out);
    if (run_cmd->parsed()) return Run(run, out);
    if (cluster_cmd->parsed()) return ClusterVocab(cluster, out);
    if (train_cmd->parsed()) return TrainHead(train, out);
    if (bench_cmd->parsed()) return Bench(bench, out);
    if (render_cmd->parsed()) return Render(render, out);
  } catch (const Error& e) {
    err << "error [" << e.module() << "]: " << e.what() << '\n';
    return kExitRuntimeError;
  } catch (const std::exception& e) {
    err << "error [internal]: " << e.what() << '\n';
    return kExitRuntimeError;
  }
  return kExitUsage;
}

}  // namespace radstack
