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

#include "radstack/scoring.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace radstack {

nlohmann::ordered_json BreakdownToJson(const ScoreBreakdown& b) {
  return {{"c_col", b.c_col}, {"c_ra", b.c_ra},   {"c_mp", b.c_mp},
          {"c_ttc", b.c_ttc}, {"c_dr", b.c_dr},   {"c_sp", b.c_sp},
          {"c_ep", b.c_ep},   {"c_cf", b.c_cf},   {"goal_cost", b.goal_cost},
          {"relaxed", b.relaxed}, {"aggregate", b.aggregate}};
}

WorldForecast ForecastAgents(const std::vector<AgentState>& agents, int horizon_steps,
                             double dt) {
  WorldForecast f;
  f.dt = dt;
  f.steps = horizon_steps;
  f.boxes.resize(horizon_steps + 1);
  for (int k = 0; k <= horizon_steps; ++k) {
    f.boxes[k].reserve(agents.size());
    const double t = k * dt;
    for (const AgentState& a : agents) {
      const double v = a.kind == AgentKind::kStatic ? 0.0 : a.speed;
      // Explicit cos/sin keeps step 0 bit-identical to the current pose.
      Pose2 p = a.pose;
      if (k > 0 && v != 0.0) {
        p = Pose2(a.pose.x + v * t * std::cos(a.pose.heading),
                  a.pose.y + v * t * std::sin(a.pose.heading), a.pose.heading);
      }
      f.boxes[k].push_back({p, a.half_length, a.half_width});
    }
  }
  return f;
}

namespace {

// Conservative circle test before the SAT.
bool MayOverlap(const OrientedBox& a, const OrientedBox& b) {
  const double ra = std::hypot(a.half_length, a.half_width);
  const double rb = std::hypot(b.half_length, b.half_width);
  return Distance(a.center.position(), b.center.position()) <= ra + rb;
}

bool OverlapsAny(const OrientedBox& ego, const std::vector<OrientedBox>& agents) {
  for (const OrientedBox& a : agents) {
    if (MayOverlap(ego, a) && BoxesOverlap(ego, a)) return true;
  }
  return false;
}

const std::vector<OrientedBox>& BoxesAt(const WorldForecast& f, size_t k) {
  return f.boxes[std::min(k, f.boxes.size() - 1)];
}

struct LaneLocation {
  const Lane* lane = nullptr;
  Vec2 tangent;
};

// Lane whose corridor contains `p` with the smallest lateral offset.
LaneLocation LocateLane(const Scenario& scenario, const Vec2& p) {
  LaneLocation best;
  double best_lat = std::numeric_limits<double>::infinity();
  for (const Lane& lane : scenario.lanes) {
    const PathProjection proj = lane.centerline.Project(Pose2(p.x, p.y, 0.0));
    const double lat = std::abs(proj.lateral_offset);
    if (lat > 0.5 * lane.width) continue;
    const Pose2 at = lane.centerline.Interpolate(proj.arclength);
    // Reject points beyond the lane ends.
    if (Distance(at.position(), p) > 0.5 * lane.width + 1e-9) continue;
    if (lat < best_lat) {
      best_lat = lat;
      best.lane = &lane;
      best.tangent = {std::cos(at.heading), std::sin(at.heading)};
    }
  }
  return best;
}

}  // namespace

double CheckCollision(const Trajectory& traj, const WorldForecast& forecast,
                      const EgoState& dims) {
  if (forecast.boxes.empty()) return 1.0;
  for (size_t k = 0; k < traj.samples.size(); ++k) {
    if (OverlapsAny(Footprint(traj.samples[k].pose, dims), BoxesAt(forecast, k))) {
      return 0.0;
    }
  }
  return 1.0;
}

double CheckDrivableArea(const Trajectory& traj, const Scenario& scenario,
                         const EgoState& dims) {
  for (const TrajectorySample& s : traj.samples) {
    for (const Vec2& c : Footprint(s.pose, dims).Corners()) {
      if (!scenario.InDrivableArea(c)) return 0.0;
    }
  }
  return 1.0;
}

double ProgressAlongPath(const Trajectory& traj, const ProposalPath& path) {
  const double s0 = path.centerline.Project(traj.samples.front().pose).arclength;
  const double s1 = path.centerline.Project(traj.samples.back().pose).arclength;
  return s1 - s0;
}

double CheckMinProgress(double progress, double min_progress,
                        double best_admissible_progress) {
  if (best_admissible_progress < min_progress) return 1.0;
  return progress < min_progress ? 0.0 : 1.0;
}

double TimeToCollisionTerm(const Trajectory& traj, const WorldForecast& forecast,
                           const EgoState& dims, double window) {
  if (forecast.boxes.empty() || forecast.boxes.front().empty()) return 1.0;
  const int lookahead = static_cast<int>(std::floor(window / traj.dt + 1e-9));
  for (size_t k = 0; k < traj.samples.size(); ++k) {
    const TrajectorySample& s = traj.samples[k];
    if (s.speed <= 0.0) continue;
    for (int j = 1; j <= lookahead; ++j) {
      const double d = s.speed * j * traj.dt;
      const Pose2 ahead(s.pose.x + d * std::cos(s.pose.heading),
                        s.pose.y + d * std::sin(s.pose.heading), s.pose.heading);
      if (OverlapsAny(Footprint(ahead, dims), BoxesAt(forecast, k + j))) return 0.0;
    }
  }
  return 1.0;
}

double SpeedComplianceTerm(const Trajectory& traj, const Scenario& scenario,
                           double tolerance) {
  if (traj.samples.empty()) return 1.0;
  int violations = 0;
  for (const TrajectorySample& s : traj.samples) {
    const LaneLocation loc = LocateLane(scenario, s.pose.position());
    if (loc.lane != nullptr && s.speed > loc.lane->speed_limit + tolerance) {
      ++violations;
    }
  }
  return 1.0 - static_cast<double>(violations) / traj.samples.size();
}

double AgainstDirectionDistance(const Trajectory& traj, const Scenario& scenario) {
  double against = 0.0;
  for (size_t k = 1; k < traj.samples.size(); ++k) {
    const Vec2 a = traj.samples[k - 1].pose.position();
    const Vec2 b = traj.samples[k].pose.position();
    const LaneLocation loc = LocateLane(scenario, (a + b) * 0.5);
    if (loc.lane == nullptr) continue;
    against += std::max(0.0, -(b - a).Dot(loc.tangent));
  }
  return against;
}

double DirectionComplianceTerm(const Trajectory& traj, const Scenario& scenario,
                               double tolerance) {
  const double against = AgainstDirectionDistance(traj, scenario);
  if (against <= 1e-9) return 1.0;
  return against < tolerance ? 0.5 : 0.0;
}

double ComfortTerm(const Trajectory& traj, const ComfortBounds& b) {
  const size_t n = traj.samples.size();
  if (n < 2) return 1.0;
  const double dt = traj.dt;
  std::vector<double> lon_accel(n - 1);
  std::vector<double> yaw_rate(n - 1);
  for (size_t k = 0; k + 1 < n; ++k) {
    lon_accel[k] = (traj.samples[k + 1].speed - traj.samples[k].speed) / dt;
    yaw_rate[k] =
        NormalizeAngle(traj.samples[k + 1].pose.heading - traj.samples[k].pose.heading) /
        dt;
  }
  int ok = 0;
  for (size_t k = 0; k + 1 < n; ++k) {
    bool good = lon_accel[k] <= b.max_lon_accel && lon_accel[k] >= -b.max_lon_decel &&
                std::abs(yaw_rate[k]) <= b.max_yaw_rate &&
                std::abs(traj.samples[k].speed * yaw_rate[k]) <= b.max_lat_accel;
    if (k + 2 < n) {
      good = good && std::abs(lon_accel[k + 1] - lon_accel[k]) / dt <= b.max_jerk &&
             std::abs(yaw_rate[k + 1] - yaw_rate[k]) / dt <= b.max_yaw_accel;
    }
    if (good) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(n - 1);
}

ObjectiveTerms WeightedObjectives(const Trajectory& traj, const WorldForecast& forecast,
                                  const Scenario& scenario, const EgoState& dims,
                                  double progress, double max_progress,
                                  const ScoringConfig& config) {
  ObjectiveTerms t;
  t.c_ttc = TimeToCollisionTerm(traj, forecast, dims, config.ttc_window);
  t.c_sp = SpeedComplianceTerm(traj, scenario, config.speed_tolerance);
  t.c_dr = DirectionComplianceTerm(traj, scenario, config.direction_tolerance);
  t.c_cf = ComfortTerm(traj, config.comfort);
  t.c_ep = max_progress > 1e-6 ? std::clamp(progress / max_progress, 0.0, 1.0) : 1.0;
  return t;
}

double GoalCost(const Trajectory& traj, const Pose2& goal) {
  const Vec2 end = traj.EndPosition();
  return std::hypot(end.x - goal.x, end.y - goal.y);
}

RelaxationState DetectRelaxation(std::span<const EgoState> history, double dt,
                                 const std::vector<AgentState>& agents,
                                 const ProposalPath& route_path,
                                 const RelaxationConfig& config) {
  RelaxationState state;
  if (history.empty()) return state;
  int stopped = 0;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    if (it->speed >= config.stop_speed) break;
    ++stopped;
  }
  state.stopped_duration = stopped * dt;
  const EgoState& ego = history.back();
  const double ego_s = route_path.centerline.Project(ego.pose).arclength;
  for (const AgentState& a : agents) {
    const bool is_static = a.kind == AgentKind::kStatic || a.speed < 0.1;
    if (!is_static || a.kind == AgentKind::kPedestrian) continue;
    const PathProjection pa = route_path.centerline.Project(a.pose);
    if (std::abs(pa.lateral_offset) >= config.corridor_half_width) continue;
    if (pa.arclength <= ego_s) continue;
    const double gap =
        std::max(0.0, pa.arclength - ego_s - ego.half_length - a.half_length);
    if (gap <= config.d_block &&
        (!state.blocker_distance || gap < *state.blocker_distance)) {
      state.blocker_distance = gap;
    }
  }
  state.active = state.stopped_duration >= config.t_block - 1e-9 &&
                 state.blocker_distance.has_value();
  return state;
}

ScoreBreakdown AggregateScore(const TermValues& terms, const ScoringConfig& config,
                              const RelaxationState& relax) {
  ScoreBreakdown b;
  const bool relaxed = config.kind == ScorerKind::kRad && relax.active;
  b.relaxed = relaxed;
  b.c_col = terms.c_col;
  b.c_ra = relaxed ? std::max(terms.c_ra, config.relax_floor) : terms.c_ra;
  b.c_mp = terms.c_mp;
  b.c_ttc = terms.objectives.c_ttc;
  b.c_dr = relaxed ? std::max(terms.objectives.c_dr, config.relax_floor)
                   : terms.objectives.c_dr;
  b.c_sp = terms.objectives.c_sp;
  b.c_ep = terms.objectives.c_ep;
  b.c_cf = terms.objectives.c_cf;
  b.goal_cost = terms.goal_cost;
  const ScoreWeights& w = config.weights;
  const double weighted = (w.ttc * b.c_ttc + w.dr * b.c_dr + w.sp * b.c_sp +
                           w.ep * b.c_ep + w.cf * b.c_cf) /
                          w.ObjectiveSum();
  b.aggregate = b.c_col * b.c_ra * b.c_mp * weighted;
  if (config.kind == ScorerKind::kRad && w.goal != 0.0) {
    const double norm = config.goal_norm > 0.0 ? config.goal_norm : 1.0;
    b.aggregate -= w.goal * std::min(1.0, b.goal_cost / norm);
  }
  return b;
}

Selection SelectBest(const ProposalSet& proposals, const ScoringContext& ctx) {
  if (proposals.empty()) throw std::invalid_argument("SelectBest: empty proposal set");
  const ScoringConfig& cfg = ctx.config;
  const bool relaxed = cfg.kind == ScorerKind::kRad && ctx.relaxation.active;
  const size_t n = proposals.size();
  std::vector<TermValues> terms(n);
  std::vector<double> progress(n, 0.0);
  double best_admissible = -std::numeric_limits<double>::infinity();
  bool any_admissible = false;
  for (size_t i = 0; i < n; ++i) {
    const Trajectory& traj = proposals[i].trajectory;
    TermValues& t = terms[i];
    t.c_col = CheckCollision(traj, *ctx.forecast, ctx.dims);
    t.c_ra = CheckDrivableArea(traj, *ctx.scenario, ctx.dims);
    t.goal_cost = GoalCost(traj, ctx.scenario->goal);
    progress[i] = ProgressAlongPath(traj, *ctx.route_path);
    const double c_ra = relaxed ? std::max(t.c_ra, cfg.relax_floor) : t.c_ra;
    if (t.c_col * c_ra > 0.0) {
      any_admissible = true;
      best_admissible = std::max(best_admissible, progress[i]);
    }
  }
  if (!any_admissible) best_admissible = 0.0;
  Selection sel;
  sel.breakdowns.resize(n);
  for (size_t i = 0; i < n; ++i) {
    TermValues& t = terms[i];
    t.c_mp = CheckMinProgress(progress[i], cfg.min_progress, best_admissible);
    t.objectives = WeightedObjectives(proposals[i].trajectory, *ctx.forecast,
                                      *ctx.scenario, ctx.dims, std::max(0.0, progress[i]),
                                      best_admissible, cfg);
    sel.breakdowns[i] = AggregateScore(t, cfg, ctx.relaxation);
  }
  size_t best = 0;
  for (size_t i = 1; i < n; ++i) {
    const double a = sel.breakdowns[i].aggregate;
    const double b = sel.breakdowns[best].aggregate;
    if (a > b || (a == b && proposals[i].key < proposals[best].key)) best = i;
  }
  sel.winner = best;
  return sel;
}

}  // namespace radstack
