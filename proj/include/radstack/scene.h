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

#ifndef RADSTACK_SCENE_H_
#define RADSTACK_SCENE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "radstack/geometry.h"

namespace radstack {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr double kLaneJoinTolerance = 0.1;   // m
inline constexpr double kMaxLaneSegmentLength = 10.0;  // m

struct EgoState {
  Pose2 pose;
  double speed = 0.0;  // m/s, >= 0
  double accel = 0.0;
  double steering = 0.0;
  double wheelbase = 2.8;
  double half_length = 2.4;
  double half_width = 1.0;

  bool operator==(const EgoState&) const = default;
};

enum class AgentKind { kVehicle, kPedestrian, kStatic };

std::string_view ToString(AgentKind kind);
AgentKind AgentKindFromString(std::string_view s);

struct ScriptedState {
  Pose2 pose;
  double speed = 0.0;
  bool operator==(const ScriptedState&) const = default;
};

struct AgentState {
  std::string id;
  Pose2 pose;
  double speed = 0.0;
  double half_length = 2.4;
  double half_width = 1.0;
  AgentKind kind = AgentKind::kVehicle;
  // Per-tick states for the replay policy; empty means open-loop lane
  // following at constant speed.
  std::vector<ScriptedState> script;

  bool operator==(const AgentState&) const = default;
};

enum class LaneDirection { kRouteAligned, kOpposing };

struct Lane {
  std::string id;
  Polyline centerline;
  double speed_limit = 10.0;
  double width = 3.5;
  std::vector<std::string> successors;
  std::optional<std::string> left_adjacent;
  std::optional<std::string> right_adjacent;
  LaneDirection direction = LaneDirection::kRouteAligned;

  bool operator==(const Lane& o) const;
};

struct Scenario {
  std::vector<Lane> lanes;
  std::vector<Polygon> drivable_area;
  std::vector<Polygon> crosswalks;
  std::vector<AgentState> agents;
  EgoState ego;
  std::vector<std::string> route;
  Pose2 goal;
  double duration = 30.0;
  std::int64_t seed = 0;

  bool operator==(const Scenario&) const = default;

  // nullptr when absent.
  const Lane* FindLane(std::string_view id) const;
  bool InDrivableArea(const Vec2& p) const;
};

enum class TrajectoryTag { kIdm, kVocabulary, kLearned, kLearnedOffset, kReplay };

std::string_view ToString(TrajectoryTag tag);
TrajectoryTag TrajectoryTagFromString(std::string_view s);

struct TrajectorySample {
  Pose2 pose;
  double speed = 0.0;
  bool operator==(const TrajectorySample&) const = default;
};

// Sample 0 is the current state; size is horizon_steps + 1.
struct Trajectory {
  double dt = 0.1;
  std::vector<TrajectorySample> samples;
  TrajectoryTag tag = TrajectoryTag::kIdm;

  bool operator==(const Trajectory&) const = default;
  size_t steps() const { return samples.empty() ? 0 : samples.size() - 1; }
  Vec2 EndPosition() const { return samples.back().pose.position(); }
};

// Rebuilds headings from consecutive positions and speeds from
// finite-differenced arclength. Sample 0 keeps `initial_heading` and
// `initial_speed`.
Trajectory TrajectoryFromWaypoints(std::span<const Vec2> world_points, double dt,
                                   double initial_heading, double initial_speed,
                                   TrajectoryTag tag);

OrientedBox Footprint(const AgentState& agent);
OrientedBox Footprint(const EgoState& ego);
OrientedBox Footprint(const Pose2& pose, const EgoState& dims);
// Corners counterclockwise in world frame.
std::array<Vec2, 4> AgentFootprint(const AgentState& agent);
std::array<Vec2, 4> AgentFootprint(const EgoState& ego);

// Throws ValidationError naming the first broken invariant.
void ValidateScenario(const Scenario& s);

nlohmann::ordered_json ScenarioToJson(const Scenario& s);
Scenario ScenarioFromJson(const nlohmann::json& j);

// Throws IoError, ParseError or ValidationError.
Scenario LoadScenario(const std::filesystem::path& path);
void SaveScenario(const Scenario& s, const std::filesystem::path& path);

enum class ScenarioKind {
  kBlockedLane,
  kLaneChangeRequired,
  kIntersectionTurn,
  kDeadlockPair,
};

std::string_view ToString(ScenarioKind kind);
ScenarioKind ScenarioKindFromString(std::string_view s);

// Pure function of (kind, seed).
Scenario GenerateSyntheticScenario(ScenarioKind kind, std::int64_t seed);

// Empty straight road of `length` meters with one route lane. Used by tests
// and the vocabulary harvester.
Scenario MakeStraightRoadScenario(double length, double speed_limit,
                                  double ego_speed);

// Builds a lane polygon by offsetting the centerline by +-width/2.
Polygon LanePolygon(const Polyline& centerline, double width);

}  // namespace radstack

#endif  // RADSTACK_SCENE_H_
