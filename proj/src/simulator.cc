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

#include "radstack/simulator.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "radstack/errors.h"

namespace radstack {

namespace {
constexpr char kModule[] = "simulator";
}  // namespace

// ---------------------------------------------------------------------------
// Vehicle model and tracker

EgoState BicycleStep(const EgoState& ego, double accel_cmd, double steer_cmd, double dt,
                     const VehicleLimits& limits) {
  const double a = std::clamp(accel_cmd, -limits.max_decel, limits.max_accel);
  const double steer = std::clamp(steer_cmd, -limits.max_steer, limits.max_steer);
  const double v = ego.speed;
  const double h = ego.pose.heading;
  EgoState next = ego;
  next.pose = Pose2(ego.pose.x + v * std::cos(h) * dt, ego.pose.y + v * std::sin(h) * dt,
                    h + v / ego.wheelbase * std::tan(steer) * dt);
  next.speed = std::max(0.0, v + a * dt);
  next.accel = (next.speed - v) / dt;
  next.steering = steer;
  return next;
}

LqrGain ComputeLqrGain(double speed, double wheelbase, const LqrConfig& config) {
  Eigen::Matrix2d a;
  a << 1.0, speed * config.dt, 0.0, 1.0;
  Eigen::Vector2d b(0.0, speed / wheelbase * config.dt);
  Eigen::Matrix2d q = Eigen::Vector2d(config.q_cross_track, config.q_heading).asDiagonal();
  const double r = config.r_steer;
  Eigen::Matrix2d p = q;
  LqrGain gain;
  for (int i = 0; i < config.riccati_iterations; ++i) {
    const double denom = r + b.dot(p * b);
    const Eigen::RowVector2d k = (b.transpose() * p * a) / denom;
    p = q + a.transpose() * p * (a - b * k);
    gain.last_change = (k - gain.k).cwiseAbs().maxCoeff();
    gain.k = k;
  }
  return gain;
}

ControlCommand LqrTrack(const EgoState& ego, const Trajectory& reference,
                        const LqrConfig& config) {
  ControlCommand cmd;
  if (reference.samples.empty()) return cmd;
  const size_t ahead = std::min(
      reference.samples.size() - 1,
      static_cast<size_t>(std::lround(config.lookahead / std::max(reference.dt, 1e-9))));
  const double v_ref = reference.samples[ahead].speed;
  cmd.accel = std::clamp(config.k_v * (v_ref - ego.speed), -config.limits.max_decel,
                         config.limits.max_accel);

  std::vector<Vec2> pts;
  for (const auto& s : reference.samples) {
    const Vec2 p = s.pose.position();
    if (pts.empty() || Distance(pts.back(), p) > 1e-6) pts.push_back(p);
  }
  if (pts.size() < 2) return cmd;
  const Polyline path(pts);
  const PathProjection proj = path.Project(ego.pose);
  const double s0 = std::max(0.0, proj.arclength - 1.0);
  const double s1 = std::min(path.Length(), proj.arclength + 1.0);
  double kappa = 0.0;
  if (s1 - s0 > 1e-6) {
    kappa = NormalizeAngle(path.Interpolate(s1).heading - path.Interpolate(s0).heading) /
            (s1 - s0);
  }
  const double v_lin = ego.speed < config.min_speed ? config.low_speed_gain_speed : ego.speed;
  const LqrGain gain = ComputeLqrGain(v_lin, ego.wheelbase, config);
  const Eigen::Vector2d x(proj.lateral_offset, proj.heading_error);
  const double feedforward = std::atan(ego.wheelbase * kappa);
  cmd.steer = std::clamp(feedforward - gain.k.dot(x), -config.limits.max_steer,
                         config.limits.max_steer);
  return cmd;
}

// ---------------------------------------------------------------------------
// Background agents

std::string_view ToString(AgentPolicy policy) {
  return policy == AgentPolicy::kReplay ? "replay" : "reactive_idm";
}

AgentPolicy AgentPolicyFromString(std::string_view s) {
  if (s == "reactive_idm") return AgentPolicy::kReactiveIdm;
  if (s == "replay") return AgentPolicy::kReplay;
  throw ConfigError(kModule, "unknown agent policy '" + std::string(s) + "'");
}

namespace {

// Lane best matching a vehicle: smallest |lateral| among lanes whose
// direction agrees with the heading.
const Lane* MatchLane(const Scenario& scenario, const Pose2& pose) {
  const Lane* best = nullptr;
  double best_lat = std::numeric_limits<double>::infinity();
  for (const Lane& lane : scenario.lanes) {
    const PathProjection p = lane.centerline.Project(pose);
    if (std::abs(p.heading_error) > kPi / 2) continue;
    const double lat = std::abs(p.lateral_offset);
    if (lat < best_lat) {
      best_lat = lat;
      best = &lane;
    }
  }
  return best;
}

// Point `ahead` meters past arclength `s` on `lane`, continuing onto the
// first successor when the lane ends.
Vec2 PointAhead(const Scenario& scenario, const Lane& lane, double s, double ahead) {
  const Lane* cur = &lane;
  double target = s + ahead;
  for (int hop = 0; hop < 8; ++hop) {
    if (target <= cur->centerline.Length() || cur->successors.empty()) break;
    std::vector<std::string> succ = cur->successors;
    std::sort(succ.begin(), succ.end());
    const Lane* next = scenario.FindLane(succ.front());
    if (next == nullptr) break;
    target -= cur->centerline.Length();
    cur = next;
  }
  return cur->centerline.Interpolate(std::min(target, cur->centerline.Length())).position();
}

AgentState FollowLane(const AgentState& agent, const Scenario& scenario, double accel,
                      double dt) {
  AgentState next = agent;
  const Lane* lane = MatchLane(scenario, agent.pose);
  double curvature = 0.0;
  if (lane != nullptr) {
    const PathProjection p = lane->centerline.Project(agent.pose);
    const double ld = std::max(5.0, agent.speed);
    const Vec2 target = PointAhead(scenario, *lane, p.arclength, ld);
    const Vec2 local = agent.pose.ToLocal(target);
    const double d2 = local.Dot(local);
    if (d2 > 1e-9) curvature = 2.0 * local.y / d2;
  }
  const double v = agent.speed;
  const double h = agent.pose.heading;
  next.pose = Pose2(agent.pose.x + v * std::cos(h) * dt, agent.pose.y + v * std::sin(h) * dt,
                    h + v * curvature * dt);
  next.speed = std::max(0.0, v + accel * dt);
  return next;
}

struct Obstacle {
  Pose2 pose;
  double speed;
  double half_length;
};

}  // namespace

std::vector<AgentState> StepAgents(const std::vector<AgentState>& agents,
                                   const Scenario& scenario, AgentPolicy policy, double dt,
                                   int tick, const EgoState* ego, const IdmParams& idm) {
  std::vector<Obstacle> obstacles;
  for (const AgentState& a : agents) {
    obstacles.push_back({a.pose, a.kind == AgentKind::kStatic ? 0.0 : a.speed, a.half_length});
  }
  if (ego != nullptr) obstacles.push_back({ego->pose, ego->speed, ego->half_length});

  std::vector<AgentState> out;
  out.reserve(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    const AgentState& a = agents[i];
    if (a.kind == AgentKind::kStatic) {
      out.push_back(a);
      continue;
    }
    if (a.kind == AgentKind::kPedestrian) {
      AgentState next = a;
      next.pose = Pose2(a.pose.x + a.speed * std::cos(a.pose.heading) * dt,
                        a.pose.y + a.speed * std::sin(a.pose.heading) * dt, a.pose.heading);
      out.push_back(next);
      continue;
    }
    if (policy == AgentPolicy::kReplay) {
      if (!a.script.empty()) {
        const size_t idx = std::min(static_cast<size_t>(tick + 1), a.script.size() - 1);
        AgentState next = a;
        next.pose = a.script[idx].pose;
        next.speed = a.script[idx].speed;
        out.push_back(next);
      } else {
        out.push_back(FollowLane(a, scenario, 0.0, dt));
      }
      continue;
    }
    // Reactive IDM against the nearest obstacle ahead on the same lane.
    const Lane* lane = MatchLane(scenario, a.pose);
    IdmParams p = idm;
    p.v0 = lane != nullptr ? lane->speed_limit : std::max(a.speed, 0.1);
    double gap = kInfiniteGap;
    double v_lead = 0.0;
    if (lane != nullptr) {
      const double s_self = lane->centerline.Project(a.pose).arclength;
      for (size_t j = 0; j < obstacles.size(); ++j) {
        if (j == i) continue;
        const PathProjection po = lane->centerline.Project(obstacles[j].pose);
        if (std::abs(po.lateral_offset) > lane->width / 2.0 + 0.5) continue;
        const double ds = po.arclength - s_self;
        if (ds <= 0.0) continue;
        const double g = ds - a.half_length - obstacles[j].half_length;
        if (g < gap) {
          gap = std::max(0.0, g);
          v_lead = obstacles[j].speed * std::cos(po.heading_error);
        }
      }
    }
    out.push_back(FollowLane(a, scenario, IdmAccel(a.speed, v_lead, gap, p), dt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Episodes

void ValidateSimConfig(const SimConfig& config) {
  if (!(config.dt > 0.0)) throw ConfigError(kModule, "sim dt must be positive");
  const double steps = config.horizon / config.dt;
  if (!(config.horizon > 0.0) || std::abs(steps - std::round(steps)) > 1e-6) {
    throw ConfigError(kModule, "horizon must be a positive multiple of dt");
  }
  if (config.planner_period < 1) throw ConfigError(kModule, "planner_period must be >= 1");
}

bool EpisodeLog::HasEvent(std::string_view kind) const {
  return std::any_of(events.begin(), events.end(),
                     [&](const EpisodeEvent& e) { return e.kind == kind; });
}

double RouteCompletion(const Scenario& scenario, const EgoState& final_ego, bool reached) {
  if (reached) return 1.0;
  const double initial = Distance(scenario.ego.pose.position(), scenario.goal.position());
  if (initial <= 1e-9) return 1.0;
  const double remaining = Distance(final_ego.pose.position(), scenario.goal.position());
  return std::clamp(1.0 - remaining / initial, 0.0, 1.0);
}

namespace {

bool FootprintOffRoad(const EgoState& ego, const Scenario& scenario) {
  for (const Vec2& c : AgentFootprint(ego)) {
    if (!scenario.InDrivableArea(c)) return true;
  }
  return false;
}

const AgentState* Collides(const EgoState& ego, const std::vector<AgentState>& agents) {
  const OrientedBox box = Footprint(ego);
  for (const AgentState& a : agents) {
    if (BoxesOverlap(box, Footprint(a))) return &a;
  }
  return nullptr;
}

// Reference for `elapsed` ticks after the plan was made.
Trajectory Advance(const Trajectory& traj, int elapsed) {
  if (elapsed <= 0) return traj;
  Trajectory out = traj;
  const size_t drop = std::min<size_t>(elapsed, out.samples.size() - 1);
  out.samples.erase(out.samples.begin(), out.samples.begin() + drop);
  return out;
}

}  // namespace

EpisodeLog RunEpisode(const Scenario& scenario, const PlannerConfig& planner,
                      const SimConfig& sim, const Vocabulary* vocab,
                      const PlanHeadModel* model, const TickObserver& observer) {
  ValidateSimConfig(sim);
  PlannerConfig pc = planner;
  pc.proposals.dt = sim.dt;
  pc.proposals.horizon = sim.horizon;
  Planner plnr(scenario, pc, vocab, model);
  LqrConfig lqr = sim.lqr;
  lqr.dt = sim.dt;

  EpisodeLog log;
  log.scenario = scenario;
  log.planner = pc.kind;
  log.toggles = plnr.config().toggles;
  log.seed = sim.seed;

  EgoState ego = scenario.ego;
  std::vector<AgentState> agents = scenario.agents;
  std::vector<Vec2> positions = {ego.pose.position()};
  const int max_ticks = static_cast<int>(std::lround(scenario.duration / sim.dt));
  const int window = static_cast<int>(std::lround(sim.deadlock_window / sim.dt));
  Trajectory plan;
  int plan_tick = -1;
  TickRecord last;
  bool reached = false;
  auto emit = [&](int tick, const std::string& kind, const std::string& detail) {
    log.events.push_back({tick, (tick + 1) * sim.dt, kind, detail});
  };

  for (int tick = 0; tick < max_ticks; ++tick) {
    TickRecord rec;
    rec.tick = tick;
    rec.time = tick * sim.dt;
    rec.ego = ego;
    rec.agents = agents;
    if (plan_tick < 0 || tick - plan_tick >= sim.planner_period) {
      PlanOutput out;
      try {
        const auto t0 = std::chrono::steady_clock::now();
        out = plnr.Plan(ego, agents);
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        rec.planner_seconds = dt.count();
      } catch (const OffMapError& e) {
        log.ticks.push_back(rec);
        emit(tick, "error", e.what());
        break;
      }
      plan = out.trajectory;
      plan_tick = tick;
      rec.tag = out.trajectory.tag;
      rec.path_source = out.path_source;
      rec.breakdown = out.breakdown;
      if (sim.log_all_breakdowns) rec.all_breakdowns = out.breakdowns;
      if (sim.log_path_starts) {
        for (const ProposalPath& p : out.paths) {
          rec.path_starts.push_back(p.centerline.points().front());
        }
      }
      if (observer) observer({tick, ego, agents, out});
    } else {
      rec.tag = last.tag;
      rec.path_source = last.path_source;
      rec.breakdown = last.breakdown;
    }
    log.ticks.push_back(rec);
    last = rec;

    const ControlCommand cmd = LqrTrack(ego, Advance(plan, tick - plan_tick), lqr);
    EgoState next = BicycleStep(ego, cmd.accel, cmd.steer, sim.dt, lqr.limits);
    agents = StepAgents(agents, scenario, sim.agent_policy, sim.dt, tick, &ego, pc.idm);
    for (const Disturbance& d : sim.disturbances) {
      if (d.tick != tick) continue;
      const double h = next.pose.heading;
      next.pose = Pose2(next.pose.x - std::sin(h) * d.lateral,
                        next.pose.y + std::cos(h) * d.lateral, h);
    }
    ego = next;
    positions.push_back(ego.pose.position());

    if (const AgentState* hit = Collides(ego, agents)) {
      emit(tick, "collision", hit->id);
      break;
    }
    if (!log.HasEvent("off_road") && FootprintOffRoad(ego, scenario)) {
      emit(tick, "off_road", "");
    }
    if (Distance(ego.pose.position(), scenario.goal.position()) <= sim.goal_radius) {
      reached = true;
      emit(tick, "goal_reached", "");
      break;
    }
    const int n = static_cast<int>(positions.size());
    if (!log.HasEvent("deadlock") && n > window &&
        Distance(positions[n - 1], positions[n - 1 - window]) < sim.deadlock_distance) {
      emit(tick, "deadlock", "");
    }
  }

  log.final_ego = ego;
  if (reached) {
    log.outcome = "goal_reached";
  } else if (log.HasEvent("error")) {
    log.outcome = "error";
  } else if (log.HasEvent("collision")) {
    log.outcome = "collision";
  } else if (log.HasEvent("deadlock")) {
    log.outcome = "deadlock";
  } else if (log.HasEvent("off_road")) {
    log.outcome = "off_road";
  } else {
    log.outcome = "timeout";
  }
  log.route_completion = RouteCompletion(scenario, ego, reached);
  return log;
}

// ---------------------------------------------------------------------------
// Log serialization

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr char kLogFormat[] = "radstack-episode v1";

ordered_json EgoToJson(const EgoState& e) {
  return {{"x", e.pose.x},        {"y", e.pose.y},         {"heading", e.pose.heading},
          {"speed", e.speed},     {"accel", e.accel},      {"steering", e.steering}};
}

EgoState EgoFromJson(const json& j, EgoState base) {
  base.pose = Pose2(j.at("x").get<double>(), j.at("y").get<double>(),
                    j.at("heading").get<double>());
  base.speed = j.at("speed").get<double>();
  base.accel = j.at("accel").get<double>();
  base.steering = j.at("steering").get<double>();
  return base;
}

ScoreBreakdown BreakdownFromJson(const json& j) {
  ScoreBreakdown b;
  b.c_col = j.at("c_col").get<double>();
  b.c_ra = j.at("c_ra").get<double>();
  b.c_mp = j.at("c_mp").get<double>();
  b.c_ttc = j.at("c_ttc").get<double>();
  b.c_dr = j.at("c_dr").get<double>();
  b.c_sp = j.at("c_sp").get<double>();
  b.c_ep = j.at("c_ep").get<double>();
  b.c_cf = j.at("c_cf").get<double>();
  b.goal_cost = j.at("goal_cost").get<double>();
  b.relaxed = j.at("relaxed").get<bool>();
  b.aggregate = j.at("aggregate").get<double>();
  return b;
}

PathSource PathSourceFromString(std::string_view s) {
  for (PathSource p : {PathSource::kEgoRoute, PathSource::kLeftAdjacent,
                       PathSource::kRightAdjacent, PathSource::kOpposing}) {
    if (ToString(p) == s) return p;
  }
  throw ParseError(kModule, "unknown path source '" + std::string(s) + "'");
}

}  // namespace

ordered_json TogglesToJson(const PlannerToggles& t) {
  return {{"replan", t.replan},       {"vocab", t.vocab}, {"adjacents", t.adjacents},
          {"opposing", t.opposing},   {"goal", t.goal},   {"relaxation", t.relaxation}};
}

PlannerToggles TogglesFromJson(const json& j) {
  PlannerToggles t;
  t.replan = j.at("replan").get<bool>();
  t.vocab = j.at("vocab").get<bool>();
  t.adjacents = j.at("adjacents").get<bool>();
  t.opposing = j.at("opposing").get<bool>();
  t.goal = j.at("goal").get<bool>();
  t.relaxation = j.at("relaxation").get<bool>();
  return t;
}

void WriteEpisodeLog(const EpisodeLog& log, std::ostream& out) {
  ordered_json header;
  header["type"] = "header";
  header["format"] = kLogFormat;
  header["scenario_name"] = log.scenario_name;
  header["planner"] = ToString(log.planner);
  header["toggles"] = TogglesToJson(log.toggles);
  header["seed"] = log.seed;
  header["scenario"] = ScenarioToJson(log.scenario);
  out << header.dump() << '\n';
  for (const TickRecord& r : log.ticks) {
    ordered_json j;
    j["type"] = "tick";
    j["tick"] = r.tick;
    j["time"] = r.time;
    j["ego"] = EgoToJson(r.ego);
    ordered_json agents = ordered_json::array();
    for (const AgentState& a : r.agents) {
      agents.push_back({a.pose.x, a.pose.y, a.pose.heading, a.speed});
    }
    j["agents"] = std::move(agents);
    j["tag"] = ToString(r.tag);
    j["path_source"] = r.path_source ? ordered_json(ToString(*r.path_source)) : ordered_json();
    j["score"] = BreakdownToJson(r.breakdown);
    if (!r.all_breakdowns.empty()) {
      ordered_json all = ordered_json::array();
      for (const ScoreBreakdown& b : r.all_breakdowns) all.push_back(BreakdownToJson(b));
      j["all_scores"] = std::move(all);
    }
    if (!r.path_starts.empty()) {
      ordered_json starts = ordered_json::array();
      for (const Vec2& p : r.path_starts) starts.push_back({p.x, p.y});
      j["path_starts"] = std::move(starts);
    }
    out << j.dump() << '\n';
  }
  for (const EpisodeEvent& e : log.events) {
    ordered_json j;
    j["type"] = "event";
    j["tick"] = e.tick;
    j["time"] = e.time;
    j["kind"] = e.kind;
    j["detail"] = e.detail;
    out << j.dump() << '\n';
  }
  ordered_json summary;
  summary["type"] = "summary";
  summary["outcome"] = log.outcome;
  summary["route_completion"] = log.route_completion;
  summary["ticks"] = log.ticks.size();
  summary["final_ego"] = EgoToJson(log.final_ego);
  out << summary.dump() << '\n';
}

void SaveEpisodeLog(const EpisodeLog& log, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write " + path.string());
  WriteEpisodeLog(log, out);
  if (!out) throw IoError(kModule, "write failed for " + path.string());
}

EpisodeLog ReadEpisodeLog(std::istream& in) {
  EpisodeLog log;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  bool have_summary = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("format").get<std::string>() != kLogFormat) {
          throw ParseError(kModule, "unsupported log format");
        }
        log.scenario_name = j.at("scenario_name").get<std::string>();
        log.planner = PlannerKindFromString(j.at("planner").get<std::string>());
        log.toggles = TogglesFromJson(j.at("toggles"));
        log.seed = j.at("seed").get<std::uint64_t>();
        log.scenario = ScenarioFromJson(j.at("scenario"));
        have_header = true;
      } else if (type == "tick") {
        if (!have_header) throw ParseError(kModule, "tick before header");
        TickRecord r;
        r.tick = j.at("tick").get<int>();
        r.time = j.at("time").get<double>();
        r.ego = EgoFromJson(j.at("ego"), log.scenario.ego);
        const json& agents = j.at("agents");
        if (agents.size() != log.scenario.agents.size()) {
          throw ParseError(kModule, "agent count differs from scenario");
        }
        for (size_t i = 0; i < agents.size(); ++i) {
          AgentState a = log.scenario.agents[i];
          a.pose = Pose2(agents[i][0].get<double>(), agents[i][1].get<double>(),
                         agents[i][2].get<double>());
          a.speed = agents[i][3].get<double>();
          r.agents.push_back(std::move(a));
        }
        r.tag = TrajectoryTagFromString(j.at("tag").get<std::string>());
        if (!j.at("path_source").is_null()) {
          r.path_source = PathSourceFromString(j.at("path_source").get<std::string>());
        }
        r.breakdown = BreakdownFromJson(j.at("score"));
        if (j.contains("all_scores")) {
          for (const json& b : j.at("all_scores")) r.all_breakdowns.push_back(BreakdownFromJson(b));
        }
        if (j.contains("path_starts")) {
          for (const json& p : j.at("path_starts")) {
            r.path_starts.push_back({p[0].get<double>(), p[1].get<double>()});
          }
        }
        log.ticks.push_back(std::move(r));
      } else if (type == "event") {
        log.events.push_back({j.at("tick").get<int>(), j.at("time").get<double>(),
                              j.at("kind").get<std::string>(),
                              j.at("detail").get<std::string>()});
      } else if (type == "summary") {
        log.outcome = j.at("outcome").get<std::string>();
        log.route_completion = j.at("route_completion").get<double>();
        log.final_ego = EgoFromJson(j.at("final_ego"), log.scenario.ego);
        have_summary = true;
      } else {
        throw ParseError(kModule, "unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(kModule, "log line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header || !have_summary) {
    throw ParseError(kModule, "log is missing its header or summary record");
  }
  return log;
}

EpisodeLog LoadEpisodeLog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open " + path.string());
  return ReadEpisodeLog(in);
}

}  // namespace radstack
