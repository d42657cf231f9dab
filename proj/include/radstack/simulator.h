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

#ifndef RADSTACK_SIMULATOR_H_
#define RADSTACK_SIMULATOR_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "radstack/planner.h"
#include "radstack/scene.h"

namespace radstack {

// ---------------------------------------------------------------------------
// Vehicle model and tracker

struct VehicleLimits {
  double max_accel = 2.5;    // m/s^2
  double max_decel = 6.0;    // m/s^2
  double max_steer = 0.6;    // rad
};

// Kinematic bicycle with commands clamped to `limits`; speed never goes
// negative.
EgoState BicycleStep(const EgoState& ego, double accel_cmd, double steer_cmd, double dt,
                     const VehicleLimits& limits = {});

struct LqrConfig {
  double q_cross_track = 1.0;
  double q_heading = 0.5;
  double r_steer = 2.0;
  int riccati_iterations = 50;
  double k_v = 1.5;
  double lookahead = 0.5;      // s, for the speed reference
  double min_speed = 0.1;      // below this the low-speed gain is used
  double low_speed_gain_speed = 1.0;
  double dt = 0.1;
  VehicleLimits limits;
};

struct LqrGain {
  Eigen::RowVector2d k = Eigen::RowVector2d::Zero();  // on [cross-track, heading error]
  double last_change = 0.0;  // max |K_n - K_{n-1}| of the final iteration
};

// Discrete Riccati recursion for the lateral error model linearized at `speed`.
LqrGain ComputeLqrGain(double speed, double wheelbase, const LqrConfig& config);

struct ControlCommand {
  double accel = 0.0;
  double steer = 0.0;
};

ControlCommand LqrTrack(const EgoState& ego, const Trajectory& reference,
                        const LqrConfig& config);

// ---------------------------------------------------------------------------
// Background agents

enum class AgentPolicy { kReactiveIdm, kReplay };

std::string_view ToString(AgentPolicy policy);
AgentPolicy AgentPolicyFromString(std::string_view s);

// Advances every agent by one tick. Vehicles under kReactiveIdm follow their
// lane with IDM against the nearest leader (the ego included) and a
// pure-pursuit steer; under kReplay they take script[tick + 1], or follow the
// lane at constant speed without a script. Pedestrians move at constant
// velocity; static agents stay put.
std::vector<AgentState> StepAgents(const std::vector<AgentState>& agents,
                                   const Scenario& scenario, AgentPolicy policy, double dt,
                                   int tick, const EgoState* ego = nullptr,
                                   const IdmParams& idm = {});

// ---------------------------------------------------------------------------
// Episodes

struct Disturbance {
  int tick = 0;
  double lateral = 0.0;  // m along the ego's left normal
};

struct SimConfig {
  double dt = 0.1;
  int planner_period = 1;  // ticks
  double horizon = 4.0;    // s
  AgentPolicy agent_policy = AgentPolicy::kReactiveIdm;
  std::vector<Disturbance> disturbances;
  std::uint64_t seed = 0;
  double goal_radius = 3.0;
  double deadlock_window = 10.0;   // s
  double deadlock_distance = 0.5;  // m
  LqrConfig lqr;
  // Optional log payloads.
  bool log_all_breakdowns = false;
  bool log_path_starts = false;
};

// Throws ConfigError when dt or horizon are invalid.
void ValidateSimConfig(const SimConfig& config);

struct EpisodeEvent {
  int tick = 0;
  double time = 0.0;
  std::string kind;  // collision, off_road, goal_reached, deadlock, error
  std::string detail;

  bool operator==(const EpisodeEvent&) const = default;
};

struct TickRecord {
  int tick = 0;
  double time = 0.0;
  EgoState ego;
  std::vector<AgentState> agents;
  TrajectoryTag tag = TrajectoryTag::kIdm;
  std::optional<PathSource> path_source;
  ScoreBreakdown breakdown;
  std::vector<ScoreBreakdown> all_breakdowns;
  std::vector<Vec2> path_starts;
  // Monotonic-clock duration of the planner call; not serialized.
  double planner_seconds = 0.0;
};

struct EpisodeLog {
  Scenario scenario;
  std::string scenario_name;
  PlannerKind planner = PlannerKind::kRad;
  PlannerToggles toggles;
  std::uint64_t seed = 0;
  std::vector<TickRecord> ticks;
  std::vector<EpisodeEvent> events;
  std::string outcome;  // goal_reached, collision, deadlock, off_road, timeout, error
  double route_completion = 0.0;
  EgoState final_ego;

  bool HasEvent(std::string_view kind) const;
};

struct TickView {
  int tick = 0;
  const EgoState& ego;
  const std::vector<AgentState>& agents;
  const PlanOutput& plan;
};

using TickObserver = std::function<void(const TickView&)>;

EpisodeLog RunEpisode(const Scenario& scenario, const PlannerConfig& planner,
                      const SimConfig& sim, const Vocabulary* vocab = nullptr,
                      const PlanHeadModel* model = nullptr,
                      const TickObserver& observer = nullptr);

// Fraction of the initial goal distance covered, 1 once the goal is reached.
double RouteCompletion(const Scenario& scenario, const EgoState& final_ego, bool reached);

// Line-delimited records: header, one per tick, one per event, summary.
void WriteEpisodeLog(const EpisodeLog& log, std::ostream& out);
void SaveEpisodeLog(const EpisodeLog& log, const std::filesystem::path& path);
EpisodeLog ReadEpisodeLog(std::istream& in);
EpisodeLog LoadEpisodeLog(const std::filesystem::path& path);

nlohmann::ordered_json TogglesToJson(const PlannerToggles& t);
PlannerToggles TogglesFromJson(const nlohmann::json& j);

}  // namespace radstack

#endif  // RADSTACK_SIMULATOR_H_
