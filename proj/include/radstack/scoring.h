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

#ifndef RADSTACK_SCORING_H_
#define RADSTACK_SCORING_H_

#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "radstack/proposals.h"
#include "radstack/scene.h"
#include "radstack/topology.h"

namespace radstack {

struct ScoreWeights {
  double ttc = 5.0;
  double dr = 1.0;
  double sp = 4.0;
  double ep = 5.0;
  double cf = 2.0;
  double goal = 0.3;

  double ObjectiveSum() const { return ttc + dr + sp + ep + cf; }
};

// Public nuPlan comfort bounds.
struct ComfortBounds {
  double max_lon_accel = 2.40;
  double max_lon_decel = 4.05;
  double max_lat_accel = 4.89;
  double max_jerk = 8.37;
  double max_yaw_rate = 0.95;
  double max_yaw_accel = 1.93;
};

// kPdm drops the goal term and relaxation; kRad uses both.
enum class ScorerKind { kPdm, kRad };

struct RelaxationConfig {
  double stop_speed = 0.5;   // m/s
  double t_block = 3.0;      // s
  double d_block = 15.0;     // m
  double corridor_half_width = 2.0;
};

struct ScoringConfig {
  ScoreWeights weights;
  ComfortBounds comfort;
  RelaxationConfig relaxation;
  ScorerKind kind = ScorerKind::kRad;
  double min_progress = 2.0;   // m
  double ttc_window = 0.95;    // s
  double speed_tolerance = 0.5;  // m/s above the limit
  double direction_tolerance = 2.0;  // m
  double relax_floor = 0.5;
  double goal_norm = 1.0;  // m, set per episode to the initial goal distance
};

struct RelaxationState {
  bool active = false;
  double stopped_duration = 0.0;
  std::optional<double> blocker_distance;
};

struct ScoreBreakdown {
  double c_col = 1.0;
  double c_ra = 1.0;
  double c_mp = 1.0;
  double c_ttc = 1.0;
  double c_dr = 1.0;
  double c_sp = 1.0;
  double c_ep = 1.0;
  double c_cf = 1.0;
  double goal_cost = 0.0;
  double aggregate = 0.0;
  bool relaxed = false;

  bool operator==(const ScoreBreakdown&) const = default;
};

nlohmann::ordered_json BreakdownToJson(const ScoreBreakdown& b);

// Constant-velocity forecast of agent footprints; boxes[step][agent].
struct WorldForecast {
  double dt = 0.1;
  int steps = 0;
  std::vector<std::vector<OrientedBox>> boxes;
};

WorldForecast ForecastAgents(const std::vector<AgentState>& agents, int horizon_steps,
                             double dt);

// 0 when any step's ego footprint overlaps any forecast footprint.
double CheckCollision(const Trajectory& traj, const WorldForecast& forecast,
                      const EgoState& dims);

// 0 when any footprint corner leaves every drivable polygon.
double CheckDrivableArea(const Trajectory& traj, const Scenario& scenario,
                         const EgoState& dims);

// Arclength gain from the first to the last sample along `path`.
double ProgressAlongPath(const Trajectory& traj, const ProposalPath& path);

// 0 when `progress` < `min_progress` while some admissible proposal reaches it.
double CheckMinProgress(double progress, double min_progress,
                        double best_admissible_progress);

struct ObjectiveTerms {
  double c_ttc = 1.0;
  double c_dr = 1.0;
  double c_sp = 1.0;
  double c_ep = 1.0;
  double c_cf = 1.0;
};

// c_ep is computed from `progress` / `max_progress`; pass max_progress <= 0 to
// get the exemption value 1.
ObjectiveTerms WeightedObjectives(const Trajectory& traj, const WorldForecast& forecast,
                                  const Scenario& scenario, const EgoState& dims,
                                  double progress, double max_progress,
                                  const ScoringConfig& config);

// Individual objective terms, exposed for tests.
double TimeToCollisionTerm(const Trajectory& traj, const WorldForecast& forecast,
                           const EgoState& dims, double window);
double SpeedComplianceTerm(const Trajectory& traj, const Scenario& scenario,
                           double tolerance);
double AgainstDirectionDistance(const Trajectory& traj, const Scenario& scenario);
double DirectionComplianceTerm(const Trajectory& traj, const Scenario& scenario,
                               double tolerance);
double ComfortTerm(const Trajectory& traj, const ComfortBounds& bounds);

// Euclidean distance from the final sample to the goal.
double GoalCost(const Trajectory& traj, const Pose2& goal);

// `history` is oldest-first with one state per tick of length `dt`.
RelaxationState DetectRelaxation(std::span<const EgoState> history, double dt,
                                 const std::vector<AgentState>& agents,
                                 const ProposalPath& route_path,
                                 const RelaxationConfig& config);

// Raw per-proposal terms before aggregation.
struct TermValues {
  double c_col = 1.0;
  double c_ra = 1.0;
  double c_mp = 1.0;
  ObjectiveTerms objectives;
  double goal_cost = 0.0;
};

ScoreBreakdown AggregateScore(const TermValues& terms, const ScoringConfig& config,
                              const RelaxationState& relax);

struct ScoringContext {
  const Scenario* scenario = nullptr;
  const WorldForecast* forecast = nullptr;
  const ProposalPath* route_path = nullptr;
  EgoState dims;
  RelaxationState relaxation;
  ScoringConfig config;
};

struct Selection {
  size_t winner = 0;
  std::vector<ScoreBreakdown> breakdowns;  // parallel to the proposal set
};

// Scores every proposal and picks the argmax; ties go to the smallest
// ProposalKey. Throws std::invalid_argument on an empty set.
Selection SelectBest(const ProposalSet& proposals, const ScoringContext& context);

}  // namespace radstack

#endif  // RADSTACK_SCORING_H_
