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

#include "radstack/planner.h"

#include <cmath>
#include <string>

#include "radstack/errors.h"

namespace radstack {

namespace {
constexpr char kModule[] = "planner";
// Ticks of ego history kept for relaxation detection.
constexpr size_t kMaxHistory = 200;
// Distance behind the ego over which a passed blocker keeps relaxation on.
constexpr double kLatchTrail = 5.0;
}  // namespace

std::string_view ToString(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::kRad:
      return "rad";
    case PlannerKind::kPlanHead:
      return "planhead";
    case PlannerKind::kHybrid:
      return "hybrid";
    case PlannerKind::kBaselineStatic:
      return "baseline_static";
  }
  return "rad";
}

PlannerKind PlannerKindFromString(std::string_view s) {
  if (s == "rad") return PlannerKind::kRad;
  if (s == "planhead") return PlannerKind::kPlanHead;
  if (s == "hybrid") return PlannerKind::kHybrid;
  if (s == "baseline_static" || s == "baseline-static") return PlannerKind::kBaselineStatic;
  throw ConfigError(kModule, "unknown planner kind '" + std::string(s) + "'");
}

PlannerConfig Effective(PlannerConfig config) {
  if (config.kind == PlannerKind::kBaselineStatic) {
    config.toggles = {false, false, false, false, false, false};
    config.scoring.kind = ScorerKind::kPdm;
  }
  config.topology.enable_adjacents = config.toggles.adjacents;
  config.topology.enable_opposing = config.toggles.adjacents && config.toggles.opposing;
  if (!config.toggles.goal) config.scoring.weights.goal = 0.0;
  return config;
}

Planner::Planner(const Scenario& scenario, PlannerConfig config, const Vocabulary* vocab,
                 const PlanHeadModel* model)
    : scenario_(scenario), config_(Effective(std::move(config))), vocab_(vocab),
      model_(model) {
  if ((config_.kind == PlannerKind::kPlanHead || config_.kind == PlannerKind::kHybrid) &&
      model_ == nullptr) {
    throw ConfigError(kModule, "planner '" + std::string(ToString(config_.kind)) +
                                   "' requires model_path");
  }
  if (model_ != nullptr && config_.kind != PlannerKind::kRad &&
      model_->horizon_steps() != config_.proposals.HorizonSteps()) {
    throw HorizonMismatchError(kModule, "model horizon " +
                                            std::to_string(model_->horizon_steps()) +
                                            " differs from proposal horizon " +
                                            std::to_string(config_.proposals.HorizonSteps()));
  }
  const double goal_distance = Distance(scenario.ego.pose.position(), scenario.goal.position());
  config_.scoring.goal_norm = goal_distance > 1e-6 ? goal_distance : 1.0;
}

std::vector<ProposalPath> Planner::Paths(const EgoState& ego) {
  if (static_paths_) return *static_paths_;
  std::vector<ProposalPath> paths = GraphSearch(ego, scenario_, config_.topology);
  paths = AugmentWithAdjacents(std::move(paths), scenario_, ego, config_.topology);
  if (!config_.toggles.replan) static_paths_ = paths;
  return paths;
}

RelaxationState Planner::Relaxation(const EgoState& ego,
                                    const std::vector<AgentState>& agents,
                                    const ProposalPath& route_path) {
  if (!config_.toggles.relaxation || config_.scoring.kind != ScorerKind::kRad) {
    return {};
  }
  const std::vector<EgoState> hist(history_.begin(), history_.end());
  RelaxationState state =
      DetectRelaxation(hist, config_.proposals.dt, agents, route_path, config_.scoring.relaxation);
  if (state.active) {
    relax_latched_ = true;
    return state;
  }
  if (!relax_latched_) return state;
  // Keep relaxing until the blocker is behind the ego.
  const RelaxationConfig& rc = config_.scoring.relaxation;
  const double ego_s = route_path.centerline.Project(ego.pose).arclength;
  bool blocker_near = false;
  for (const AgentState& a : agents) {
    if (a.kind != AgentKind::kStatic && !(a.kind == AgentKind::kVehicle && a.speed < 0.1)) {
      continue;
    }
    const PathProjection pa = route_path.centerline.Project(a.pose);
    if (std::abs(pa.lateral_offset) >= rc.corridor_half_width) continue;
    const double reach = ego.half_length + a.half_length;
    const double ds = pa.arclength - ego_s;
    if (ds > -(reach + kLatchTrail) && ds <= rc.d_block + reach) blocker_near = true;
  }
  relax_latched_ = blocker_near;
  state.active = blocker_near;
  return state;
}

std::optional<Trajectory> Planner::Learned(const EgoState& ego,
                                           const std::vector<AgentState>& agents,
                                           const ProposalPath& route_path) const {
  if (model_ == nullptr || config_.kind == PlannerKind::kRad ||
      config_.kind == PlannerKind::kBaselineStatic) {
    return std::nullopt;
  }
  const SceneFeatures features = ExtractFeatures(ego, agents, route_path, scenario_.goal);
  AnytimeResult r = PlanAnytime(*model_, features, config_.budget, ego);
  r.trajectory.dt = config_.proposals.dt;
  return r.trajectory;
}

PlanOutput Planner::Plan(const EgoState& ego, const std::vector<AgentState>& agents) {
  history_.push_back(ego);
  if (history_.size() > kMaxHistory) history_.pop_front();

  PlanOutput out;
  out.paths = Paths(ego);
  if (out.paths.empty()) throw OffMapError(kModule, "no proposal path for the ego");
  const ProposalPath& route_path = out.paths.front();
  out.relaxation = Relaxation(ego, agents, route_path);

  ProposalSet proposals;
  if (config_.kind != PlannerKind::kPlanHead) {
    proposals = GenerateProposals(ego, out.paths, agents, config_.proposals, config_.idm);
    if (config_.toggles.vocab && vocab_ != nullptr &&
        vocab_->horizon_steps == config_.proposals.HorizonSteps()) {
      AppendVocabularyProposals(*vocab_, ego, proposals);
    }
  }
  const std::optional<Trajectory> learned = Learned(ego, agents, route_path);

  const WorldForecast forecast =
      ForecastAgents(agents, config_.proposals.HorizonSteps(), config_.proposals.dt);
  ScoringContext ctx;
  ctx.scenario = &scenario_;
  ctx.forecast = &forecast;
  ctx.route_path = &route_path;
  ctx.dims = ego;
  ctx.relaxation = out.relaxation;
  ctx.config = config_.scoring;

  const std::vector<double> offsets =
      config_.kind == PlannerKind::kPlanHead ? std::vector<double>{} : config_.learned_offsets;
  HybridResult result = HybridSelect(std::move(proposals), learned, offsets, ctx);
  out.proposals = std::move(result.proposals);
  out.breakdowns = std::move(result.selection.breakdowns);
  out.winner = result.selection.winner;
  const Proposal& win = out.proposals[out.winner];
  out.trajectory = win.trajectory;
  out.breakdown = out.breakdowns[out.winner];
  if (win.path_index >= 0) out.path_source = out.paths[win.path_index].source;
  return out;
}

}  // namespace radstack
