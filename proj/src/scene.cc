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

#include "radstack/scene.h"

#include <algorithm>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "radstack/errors.h"

namespace radstack {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr char kModule[] = "scene";
constexpr double kSteeringLimit = 0.6;

}  // namespace

std::string_view ToString(AgentKind kind) {
  switch (kind) {
    case AgentKind::kVehicle:
      return "vehicle";
    case AgentKind::kPedestrian:
      return "pedestrian";
    case AgentKind::kStatic:
      return "static";
  }
  return "vehicle";
}

AgentKind AgentKindFromString(std::string_view s) {
  if (s == "vehicle") return AgentKind::kVehicle;
  if (s == "pedestrian") return AgentKind::kPedestrian;
  if (s == "static") return AgentKind::kStatic;
  throw ParseError(kModule, "unknown agent kind '" + std::string(s) + "'");
}

std::string_view ToString(TrajectoryTag tag) {
  switch (tag) {
    case TrajectoryTag::kIdm:
      return "idm";
    case TrajectoryTag::kVocabulary:
      return "vocabulary";
    case TrajectoryTag::kLearned:
      return "learned";
    case TrajectoryTag::kLearnedOffset:
      return "learned_offset";
    case TrajectoryTag::kReplay:
      return "replay";
  }
  return "idm";
}

TrajectoryTag TrajectoryTagFromString(std::string_view s) {
  if (s == "idm") return TrajectoryTag::kIdm;
  if (s == "vocabulary") return TrajectoryTag::kVocabulary;
  if (s == "learned") return TrajectoryTag::kLearned;
  if (s == "learned_offset") return TrajectoryTag::kLearnedOffset;
  if (s == "replay") return TrajectoryTag::kReplay;
  throw ParseError(kModule, "unknown trajectory tag '" + std::string(s) + "'");
}

bool Lane::operator==(const Lane& o) const {
  return id == o.id && centerline.points() == o.centerline.points() &&
         speed_limit == o.speed_limit && width == o.width &&
         successors == o.successors && left_adjacent == o.left_adjacent &&
         right_adjacent == o.right_adjacent && direction == o.direction;
}

const Lane* Scenario::FindLane(std::string_view id) const {
  for (const Lane& lane : lanes) {
    if (lane.id == id) return &lane;
  }
  return nullptr;
}

bool Scenario::InDrivableArea(const Vec2& p) const {
  return std::any_of(drivable_area.begin(), drivable_area.end(),
                     [&](const Polygon& poly) { return PointInPolygon(p, poly); });
}

Trajectory TrajectoryFromWaypoints(std::span<const Vec2> world_points, double dt,
                                   double initial_heading, double initial_speed,
                                   TrajectoryTag tag) {
  Trajectory traj;
  traj.dt = dt;
  traj.tag = tag;
  traj.samples.reserve(world_points.size());
  double heading = initial_heading;
  for (size_t i = 0; i < world_points.size(); ++i) {
    double speed = initial_speed;
    if (i > 0) {
      const Vec2 d = world_points[i] - world_points[i - 1];
      // Keep the previous heading through standstill.
      if (d.Norm() > 1e-6) heading = std::atan2(d.y, d.x);
      speed = d.Norm() / dt;
    }
    traj.samples.push_back(
        {Pose2(world_points[i].x, world_points[i].y, heading), speed});
  }
  return traj;
}

OrientedBox Footprint(const AgentState& agent) {
  return {agent.pose, agent.half_length, agent.half_width};
}

OrientedBox Footprint(const EgoState& ego) {
  return {ego.pose, ego.half_length, ego.half_width};
}

OrientedBox Footprint(const Pose2& pose, const EgoState& dims) {
  return {pose, dims.half_length, dims.half_width};
}

std::array<Vec2, 4> AgentFootprint(const AgentState& agent) {
  return Footprint(agent).Corners();
}

std::array<Vec2, 4> AgentFootprint(const EgoState& ego) {
  return Footprint(ego).Corners();
}

Polygon LanePolygon(const Polyline& centerline, double width) {
  const auto& pts = centerline.points();
  const size_t n = pts.size();
  std::vector<Vec2> left;
  std::vector<Vec2> right;
  left.reserve(n);
  right.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    // Vertex normal from the averaged tangent of the adjacent segments.
    Vec2 tangent{0.0, 0.0};
    if (i > 0) {
      const Vec2 d = pts[i] - pts[i - 1];
      tangent = tangent + d * (1.0 / std::max(d.Norm(), 1e-12));
    }
    if (i + 1 < n) {
      const Vec2 d = pts[i + 1] - pts[i];
      tangent = tangent + d * (1.0 / std::max(d.Norm(), 1e-12));
    }
    tangent = tangent * (1.0 / std::max(tangent.Norm(), 1e-12));
    const Vec2 normal{-tangent.y, tangent.x};
    left.push_back(pts[i] + normal * (0.5 * width));
    right.push_back(pts[i] - normal * (0.5 * width));
  }
  Polygon poly = right;
  poly.insert(poly.end(), left.rbegin(), left.rend());
  return poly;
}

// ---------------------------------------------------------------------------
// Validation

void ValidateScenario(const Scenario& s) {
  std::set<std::string> ids;
  for (size_t i = 0; i < s.lanes.size(); ++i) {
    const Lane& lane = s.lanes[i];
    const std::string path = "lanes[" + std::to_string(i) + "]";
    if (!ids.insert(lane.id).second) {
      throw ValidationError(kModule, path + ".id", "duplicate lane id " + lane.id);
    }
    if (lane.centerline.size() < 2) {
      throw ValidationError(kModule, path + ".centerline",
                            "centerline needs at least 2 points");
    }
    const auto& arc = lane.centerline.arclengths();
    for (size_t k = 1; k < arc.size(); ++k) {
      if (arc[k] - arc[k - 1] > kMaxLaneSegmentLength + 1e-9) {
        throw ValidationError(kModule, path + ".centerline",
                              "segment longer than max_segment_length");
      }
    }
    if (!(lane.speed_limit > 0.0) || !(lane.width > 0.0)) {
      throw ValidationError(kModule, path, "speed_limit and width must be > 0");
    }
  }
  for (size_t i = 0; i < s.lanes.size(); ++i) {
    const Lane& lane = s.lanes[i];
    const std::string path = "lanes[" + std::to_string(i) + "]";
    for (const std::string& succ_id : lane.successors) {
      const Lane* succ = s.FindLane(succ_id);
      if (succ == nullptr) {
        throw ValidationError(kModule, path + ".successors",
                              "unknown lane id " + succ_id);
      }
      if (Distance(succ->centerline.points().front(),
                   lane.centerline.points().back()) > kLaneJoinTolerance) {
        throw ValidationError(kModule, path + ".successors",
                              "successor " + succ_id + " does not start at lane end");
      }
    }
    for (const auto* adj : {&lane.left_adjacent, &lane.right_adjacent}) {
      if (adj->has_value() && s.FindLane(**adj) == nullptr) {
        throw ValidationError(kModule, path + ".adjacent",
                              "unknown lane id " + **adj);
      }
    }
  }
  if (s.route.empty()) throw ValidationError(kModule, "route", "route is empty");
  for (size_t i = 0; i < s.route.size(); ++i) {
    const std::string path = "route[" + std::to_string(i) + "]";
    const Lane* lane = s.FindLane(s.route[i]);
    if (lane == nullptr) {
      throw ValidationError(kModule, path, "unknown lane id " + s.route[i]);
    }
    if (i > 0) {
      const Lane* prev = s.FindLane(s.route[i - 1]);
      if (std::find(prev->successors.begin(), prev->successors.end(),
                    s.route[i]) == prev->successors.end()) {
        throw ValidationError(kModule, path, "route is not a successor chain");
      }
    }
  }
  for (size_t i = 0; i < s.drivable_area.size(); ++i) {
    if (s.drivable_area[i].size() < 3) {
      throw ValidationError(kModule, "drivable_area[" + std::to_string(i) + "]",
                            "polygon needs at least 3 vertices");
    }
  }
  if (s.drivable_area.empty()) {
    throw ValidationError(kModule, "drivable_area", "no drivable polygons");
  }
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const Polygon& poly : s.drivable_area) {
    for (const Vec2& p : poly) {
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }
  }
  if (s.goal.x < min_x || s.goal.x > max_x || s.goal.y < min_y ||
      s.goal.y > max_y) {
    throw ValidationError(kModule, "goal", "goal outside drivable bounding box");
  }
  if (!s.InDrivableArea(s.ego.pose.position())) {
    throw ValidationError(kModule, "ego.pose", "ego start outside drivable area");
  }
  if (s.ego.speed < 0.0) throw ValidationError(kModule, "ego.speed", "speed < 0");
  if (std::abs(s.ego.steering) > kSteeringLimit) {
    throw ValidationError(kModule, "ego.steering", "steering beyond limit");
  }
  if (!(s.ego.wheelbase > 0.0) || !(s.ego.half_length > 0.0) ||
      !(s.ego.half_width > 0.0)) {
    throw ValidationError(kModule, "ego", "dimensions must be > 0");
  }
  for (size_t i = 0; i < s.agents.size(); ++i) {
    const AgentState& a = s.agents[i];
    const std::string path = "agents[" + std::to_string(i) + "]";
    if (a.kind == AgentKind::kStatic && a.speed != 0.0) {
      throw ValidationError(kModule, path + ".speed", "static agent must have speed 0");
    }
    if (!(a.half_length > 0.0) || !(a.half_width > 0.0)) {
      throw ValidationError(kModule, path, "half extents must be > 0");
    }
  }
  if (!(s.duration > 0.0)) {
    throw ValidationError(kModule, "duration", "duration must be > 0");
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

ordered_json PoseToJson(const Pose2& p) {
  return ordered_json{{"x", p.x}, {"y", p.y}, {"heading", p.heading}};
}

ordered_json PointsToJson(const std::vector<Vec2>& pts) {
  ordered_json arr = ordered_json::array();
  for (const Vec2& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

// Field-path aware accessors so parse errors name where they happened.
const json& Require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(kModule, path + "." + key + ": missing required key");
  }
  return j.at(key);
}

double ReadNumber(const json& j, const char* key, const std::string& path) {
  const json& v = Require(j, key, path);
  if (!v.is_number()) {
    throw ParseError(kModule, path + "." + key + ": expected a number");
  }
  return v.get<double>();
}

std::string ReadString(const json& j, const char* key, const std::string& path) {
  const json& v = Require(j, key, path);
  if (!v.is_string()) {
    throw ParseError(kModule, path + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

Pose2 PoseFromJson(const json& j, const std::string& path) {
  return Pose2(ReadNumber(j, "x", path), ReadNumber(j, "y", path),
               ReadNumber(j, "heading", path));
}

std::vector<Vec2> PointsFromJson(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(kModule, path + ": expected an array");
  std::vector<Vec2> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const json& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ParseError(kModule,
                       path + "[" + std::to_string(i) + "]: expected [x, y]");
    }
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

std::optional<std::string> OptionalId(const json& j, const char* key,
                                      const std::string& path) {
  const json& v = Require(j, key, path);
  if (v.is_null()) return std::nullopt;
  if (!v.is_string()) {
    throw ParseError(kModule, path + "." + key + ": expected string or null");
  }
  return v.get<std::string>();
}

}  // namespace

ordered_json ScenarioToJson(const Scenario& s) {
  ordered_json j;
  j["version"] = kScenarioSchemaVersion;
  ordered_json lanes = ordered_json::array();
  for (const Lane& lane : s.lanes) {
    ordered_json l;
    l["id"] = lane.id;
    l["centerline"] = PointsToJson(lane.centerline.points());
    l["speed_limit"] = lane.speed_limit;
    l["width"] = lane.width;
    l["successors"] = lane.successors;
    l["left_adjacent"] = lane.left_adjacent ? ordered_json(*lane.left_adjacent)
                                            : ordered_json(nullptr);
    l["right_adjacent"] = lane.right_adjacent ? ordered_json(*lane.right_adjacent)
                                              : ordered_json(nullptr);
    l["direction"] =
        lane.direction == LaneDirection::kOpposing ? "opposing" : "route_aligned";
    lanes.push_back(std::move(l));
  }
  j["lanes"] = std::move(lanes);
  ordered_json drivable = ordered_json::array();
  for (const Polygon& poly : s.drivable_area) drivable.push_back(PointsToJson(poly));
  j["drivable_area"] = std::move(drivable);
  ordered_json crosswalks = ordered_json::array();
  for (const Polygon& poly : s.crosswalks) crosswalks.push_back(PointsToJson(poly));
  j["crosswalks"] = std::move(crosswalks);
  ordered_json agents = ordered_json::array();
  for (const AgentState& a : s.agents) {
    ordered_json aj;
    aj["id"] = a.id;
    aj["kind"] = std::string(ToString(a.kind));
    aj["pose"] = PoseToJson(a.pose);
    aj["speed"] = a.speed;
    aj["half_length"] = a.half_length;
    aj["half_width"] = a.half_width;
    ordered_json script = ordered_json::array();
    for (const ScriptedState& st : a.script) {
      script.push_back({st.pose.x, st.pose.y, st.pose.heading, st.speed});
    }
    aj["script"] = std::move(script);
    agents.push_back(std::move(aj));
  }
  j["agents"] = std::move(agents);
  ordered_json ego;
  ego["pose"] = PoseToJson(s.ego.pose);
  ego["speed"] = s.ego.speed;
  ego["accel"] = s.ego.accel;
  ego["steering"] = s.ego.steering;
  ego["wheelbase"] = s.ego.wheelbase;
  ego["half_length"] = s.ego.half_length;
  ego["half_width"] = s.ego.half_width;
  j["ego"] = std::move(ego);
  j["route"] = s.route;
  j["goal"] = PoseToJson(s.goal);
  j["duration"] = s.duration;
  j["seed"] = s.seed;
  return j;
}

Scenario ScenarioFromJson(const json& j) {
  if (!j.is_object()) throw ParseError(kModule, "document: expected an object");
  const std::string root = "$";
  if (j.contains("version") &&
      (!j["version"].is_number_integer() ||
       j["version"].get<int>() != kScenarioSchemaVersion)) {
    throw ParseError(kModule, "$.version: unsupported schema version");
  }
  Scenario s;
  const json& lanes = Require(j, "lanes", root);
  if (!lanes.is_array()) throw ParseError(kModule, "$.lanes: expected an array");
  for (size_t i = 0; i < lanes.size(); ++i) {
    const std::string path = "$.lanes[" + std::to_string(i) + "]";
    const json& lj = lanes[i];
    Lane lane;
    lane.id = ReadString(lj, "id", path);
    lane.centerline = Polyline(PointsFromJson(Require(lj, "centerline", path),
                                              path + ".centerline"));
    lane.speed_limit = ReadNumber(lj, "speed_limit", path);
    lane.width = ReadNumber(lj, "width", path);
    const json& succ = Require(lj, "successors", path);
    if (!succ.is_array()) throw ParseError(kModule, path + ".successors: expected an array");
    for (const json& sid : succ) {
      if (!sid.is_string()) throw ParseError(kModule, path + ".successors: expected strings");
      lane.successors.push_back(sid.get<std::string>());
    }
    lane.left_adjacent = OptionalId(lj, "left_adjacent", path);
    lane.right_adjacent = OptionalId(lj, "right_adjacent", path);
    const std::string dir = ReadString(lj, "direction", path);
    if (dir == "route_aligned") {
      lane.direction = LaneDirection::kRouteAligned;
    } else if (dir == "opposing") {
      lane.direction = LaneDirection::kOpposing;
    } else {
      throw ParseError(kModule, path + ".direction: unknown value " + dir);
    }
    s.lanes.push_back(std::move(lane));
  }
  const json& drivable = Require(j, "drivable_area", root);
  if (!drivable.is_array()) throw ParseError(kModule, "$.drivable_area: expected an array");
  for (size_t i = 0; i < drivable.size(); ++i) {
    s.drivable_area.push_back(
        PointsFromJson(drivable[i], "$.drivable_area[" + std::to_string(i) + "]"));
  }
  if (j.contains("crosswalks")) {
    const json& cw = j["crosswalks"];
    if (!cw.is_array()) throw ParseError(kModule, "$.crosswalks: expected an array");
    for (size_t i = 0; i < cw.size(); ++i) {
      s.crosswalks.push_back(
          PointsFromJson(cw[i], "$.crosswalks[" + std::to_string(i) + "]"));
    }
  }
  const json& agents = Require(j, "agents", root);
  if (!agents.is_array()) throw ParseError(kModule, "$.agents: expected an array");
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "$.agents[" + std::to_string(i) + "]";
    const json& aj = agents[i];
    AgentState a;
    a.id = ReadString(aj, "id", path);
    a.kind = AgentKindFromString(ReadString(aj, "kind", path));
    a.pose = PoseFromJson(Require(aj, "pose", path), path + ".pose");
    a.speed = ReadNumber(aj, "speed", path);
    a.half_length = ReadNumber(aj, "half_length", path);
    a.half_width = ReadNumber(aj, "half_width", path);
    if (aj.contains("script")) {
      const json& script = aj["script"];
      if (!script.is_array()) throw ParseError(kModule, path + ".script: expected an array");
      for (const json& st : script) {
        if (!st.is_array() || st.size() != 4) {
          throw ParseError(kModule, path + ".script: expected [x, y, heading, speed]");
        }
        a.script.push_back({Pose2(st[0].get<double>(), st[1].get<double>(),
                                  st[2].get<double>()),
                            st[3].get<double>()});
      }
    }
    s.agents.push_back(std::move(a));
  }
  const json& ego = Require(j, "ego", root);
  s.ego.pose = PoseFromJson(Require(ego, "pose", "$.ego"), "$.ego.pose");
  s.ego.speed = ReadNumber(ego, "speed", "$.ego");
  s.ego.accel = ReadNumber(ego, "accel", "$.ego");
  s.ego.steering = ReadNumber(ego, "steering", "$.ego");
  s.ego.wheelbase = ReadNumber(ego, "wheelbase", "$.ego");
  s.ego.half_length = ReadNumber(ego, "half_length", "$.ego");
  s.ego.half_width = ReadNumber(ego, "half_width", "$.ego");
  const json& route = Require(j, "route", root);
  if (!route.is_array()) throw ParseError(kModule, "$.route: expected an array");
  for (const json& r : route) {
    if (!r.is_string()) throw ParseError(kModule, "$.route: expected lane id strings");
    s.route.push_back(r.get<std::string>());
  }
  s.goal = PoseFromJson(Require(j, "goal", root), "$.goal");
  s.duration = ReadNumber(j, "duration", root);
  const json& seed = Require(j, "seed", root);
  if (!seed.is_number_integer()) throw ParseError(kModule, "$.seed: expected an integer");
  s.seed = seed.get<std::int64_t>();
  return s;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(kModule, path.string() + ": " + e.what());
  }
  Scenario s = ScenarioFromJson(j);
  ValidateScenario(s);
  return s;
}

void SaveScenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write " + path.string());
  out << ScenarioToJson(s).dump(2) << '\n';
  if (!out) throw IoError(kModule, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Synthetic scenarios

std::string_view ToString(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kBlockedLane:
      return "blocked_lane";
    case ScenarioKind::kLaneChangeRequired:
      return "lane_change_required";
    case ScenarioKind::kIntersectionTurn:
      return "intersection_turn";
    case ScenarioKind::kDeadlockPair:
      return "deadlock_pair";
  }
  return "blocked_lane";
}

ScenarioKind ScenarioKindFromString(std::string_view s) {
  if (s == "blocked_lane") return ScenarioKind::kBlockedLane;
  if (s == "lane_change_required") return ScenarioKind::kLaneChangeRequired;
  if (s == "intersection_turn") return ScenarioKind::kIntersectionTurn;
  if (s == "deadlock_pair") return ScenarioKind::kDeadlockPair;
  throw ParseError(kModule, "unknown scenario kind '" + std::string(s) + "'");
}

namespace {

Polyline StraightLine(Vec2 from, Vec2 to, double step = 5.0) {
  const double length = Distance(from, to);
  const int n = std::max(1, static_cast<int>(std::ceil(length / step)));
  std::vector<Vec2> pts;
  for (int i = 0; i <= n; ++i) {
    pts.push_back(from + (to - from) * (static_cast<double>(i) / n));
  }
  return Polyline(std::move(pts));
}

// Arc around `center` from angle a0 to a1 (radians, sign gives direction).
Polyline Arc(Vec2 center, double radius, double a0, double a1, double step = 2.0) {
  const double length = std::abs(a1 - a0) * radius;
  const int n = std::max(2, static_cast<int>(std::ceil(length / step)));
  std::vector<Vec2> pts;
  for (int i = 0; i <= n; ++i) {
    const double a = a0 + (a1 - a0) * static_cast<double>(i) / n;
    pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return Polyline(std::move(pts));
}

Lane MakeLane(std::string id, Polyline centerline, double speed_limit, double width) {
  Lane lane;
  lane.id = std::move(id);
  lane.centerline = std::move(centerline);
  lane.speed_limit = speed_limit;
  lane.width = width;
  return lane;
}

void AddLanePolygons(Scenario& s) {
  for (const Lane& lane : s.lanes) {
    s.drivable_area.push_back(LanePolygon(lane.centerline, lane.width));
  }
}

EgoState DefaultEgo(Pose2 pose, double speed) {
  EgoState ego;
  ego.pose = pose;
  ego.speed = speed;
  return ego;
}

AgentState StaticVehicle(std::string id, Pose2 pose, double half_length,
                         double half_width) {
  AgentState a;
  a.id = std::move(id);
  a.pose = pose;
  a.speed = 0.0;
  a.half_length = half_length;
  a.half_width = half_width;
  a.kind = AgentKind::kStatic;
  return a;
}

// Round to a millimetre so generated files stay readable.
double Mm(double v) { return std::round(v * 1000.0) / 1000.0; }

Scenario BlockedLane(std::mt19937_64& rng, std::int64_t seed) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double length = 160.0;
  const double width = 3.5;
  const double limit = Mm(10.0 + 3.0 * u01(rng));
  Scenario s;
  s.seed = seed;
  Lane route = MakeLane("route_0", StraightLine({0, 0}, {length, 0}), limit, width);
  Lane left = MakeLane("left_0", StraightLine({0, width}, {length, width}), limit, width);
  route.left_adjacent = left.id;
  left.right_adjacent = route.id;
  s.lanes = {route, left};
  AddLanePolygons(s);
  s.route = {"route_0"};
  const double blocker_x = Mm(45.0 + 20.0 * u01(rng));
  const double blocker_y = Mm(-0.3 + 0.6 * u01(rng));
  const double blocker_h = Mm(-0.05 + 0.1 * u01(rng));
  s.agents.push_back(StaticVehicle("blocker", Pose2(blocker_x, blocker_y, blocker_h),
                                   2.4, 1.0));
  s.ego = DefaultEgo(Pose2(10.0, 0.0, 0.0), Mm(5.0 + 3.0 * u01(rng)));
  s.goal = Pose2(length - 10.0, 0.0, 0.0);
  s.duration = 40.0;
  return s;
}

Scenario LaneChangeRequired(std::mt19937_64& rng, std::int64_t seed) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double width = 3.5;
  const double limit = Mm(10.0 + 2.0 * u01(rng));
  const double split = Mm(90.0 + 20.0 * u01(rng));
  Scenario s;
  s.seed = seed;
  Lane right = MakeLane("right_0", StraightLine({0, 0}, {split, 0}), limit, width);
  Lane left0 = MakeLane("left_0", StraightLine({0, width}, {split, width}), limit, width);
  Lane left1 = MakeLane("left_1", StraightLine({split, width}, {split + 100.0, width}),
                        limit, width);
  right.left_adjacent = left0.id;
  left0.right_adjacent = right.id;
  left0.successors = {left1.id};
  s.lanes = {right, left0, left1};
  AddLanePolygons(s);
  s.route = {"right_0"};
  s.ego = DefaultEgo(Pose2(Mm(10.0 + 5.0 * u01(rng)), 0.0, 0.0), Mm(5.0 + 3.0 * u01(rng)));
  s.goal = Pose2(Mm(split + 80.0 + 10.0 * u01(rng)), width, 0.0);
  s.duration = 40.0;
  return s;
}

Scenario IntersectionTurn(std::mt19937_64& rng, std::int64_t seed) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double width = 3.5;
  const double limit = Mm(9.0 + 2.0 * u01(rng));
  const double radius = Mm(10.0 + 4.0 * u01(rng));
  const double approach = 50.0;
  Scenario s;
  s.seed = seed;
  Lane a = MakeLane("approach", StraightLine({0, 0}, {approach, 0}), limit, width);
  Lane turn = MakeLane("turn_left",
                       Arc({approach, radius}, radius, -kPi / 2.0, 0.0),
                       limit, width);
  const Vec2 turn_end = turn.centerline.points().back();
  Lane straight = MakeLane("straight",
                           StraightLine({approach, 0}, {approach + 2.0 * radius, 0}, 4.0),
                           limit, width);
  Lane north = MakeLane("north", StraightLine(turn_end, {turn_end.x, turn_end.y + 80.0}),
                        limit, width);
  Lane east = MakeLane("east", StraightLine({approach + 2.0 * radius, 0},
                                            {approach + 2.0 * radius + 80.0, 0}),
                       limit, width);
  a.successors = {"straight", "turn_left"};
  turn.successors = {"north"};
  straight.successors = {"east"};
  s.lanes = {a, turn, straight, north, east};
  AddLanePolygons(s);
  s.route = {"approach", "turn_left", "north"};
  AgentState lead;
  lead.id = "east_vehicle";
  lead.kind = AgentKind::kVehicle;
  lead.pose = Pose2(Mm(approach + 2.0 * radius + 20.0 + 20.0 * u01(rng)), 0.0, 0.0);
  lead.speed = Mm(5.0 + 3.0 * u01(rng));
  s.agents.push_back(lead);
  s.ego = DefaultEgo(Pose2(Mm(5.0 + 10.0 * u01(rng)), 0.0, 0.0), Mm(4.0 + 3.0 * u01(rng)));
  s.goal = Pose2(turn_end.x, turn_end.y + 60.0, kPi / 2.0);
  s.duration = 40.0;
  return s;
}

Scenario DeadlockPair(std::mt19937_64& rng, std::int64_t seed) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double length = 160.0;
  const double width = 3.0;
  const double limit = 8.0;
  Scenario s;
  s.seed = seed;
  Lane east = MakeLane("east_0", StraightLine({0, 0}, {length, 0}), limit, width);
  Lane west = MakeLane("west_0", StraightLine({length, width}, {0, width}), limit, width);
  west.direction = LaneDirection::kOpposing;
  east.left_adjacent = west.id;
  west.left_adjacent = east.id;
  s.lanes = {east, west};
  AddLanePolygons(s);
  s.route = {"east_0"};
  // The oncoming truck straddles the centre line, so neither side can be
  // passed without leaving the paved area.
  const double truck_x = Mm(55.0 + 10.0 * u01(rng));
  const double truck_h = Mm(kPi - 0.03 + 0.06 * u01(rng));
  s.agents.push_back(StaticVehicle("oncoming_truck", Pose2(truck_x, 1.6, truck_h),
                                   4.0, 1.25));
  s.ego = DefaultEgo(Pose2(10.0, 0.0, 0.0), Mm(4.0 + 3.0 * u01(rng)));
  s.goal = Pose2(length - 10.0, 0.0, 0.0);
  s.duration = 40.0;
  return s;
}

}  // namespace

Scenario GenerateSyntheticScenario(ScenarioKind kind, std::int64_t seed) {
  // Mixing the kind into the stream keeps kinds independent for equal seeds.
  std::seed_seq seq{static_cast<std::uint64_t>(seed),
                    static_cast<std::uint64_t>(static_cast<int>(kind)) + 17u};
  std::mt19937_64 rng(seq);
  switch (kind) {
    case ScenarioKind::kBlockedLane:
      return BlockedLane(rng, seed);
    case ScenarioKind::kLaneChangeRequired:
      return LaneChangeRequired(rng, seed);
    case ScenarioKind::kIntersectionTurn:
      return IntersectionTurn(rng, seed);
    case ScenarioKind::kDeadlockPair:
      return DeadlockPair(rng, seed);
  }
  return BlockedLane(rng, seed);
}

Scenario MakeStraightRoadScenario(double length, double speed_limit, double ego_speed) {
  Scenario s;
  Lane lane = MakeLane("lane_0", StraightLine({0, 0}, {length, 0}), speed_limit, 3.5);
  s.lanes = {lane};
  AddLanePolygons(s);
  s.route = {"lane_0"};
  s.ego = DefaultEgo(Pose2(5.0, 0.0, 0.0), ego_speed);
  s.goal = Pose2(length - 10.0, 0.0, 0.0);
  s.duration = length / std::max(speed_limit * 0.5, 1.0) + 10.0;
  return s;
}

}  // namespace radstack
