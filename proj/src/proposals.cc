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

#include "radstack/proposals.h"

#include <algorithm>
#include <cmath>

namespace radstack {

int ProposalConfig::HorizonSteps() const {
  return static_cast<int>(std::lround(horizon / dt));
}

double IdmAccel(double v, double v_lead, double gap, const IdmParams& p) {
  const double free_term = std::pow(std::max(v, 0.0) / p.v0, p.delta);
  double interaction = 0.0;
  if (std::isfinite(gap)) {
    if (gap <= 0.0) return -kIdmHardBrake;
    const double dynamic =
        v * p.time_headway + v * (v - v_lead) / (2.0 * std::sqrt(p.a_max * p.b_comf));
    const double s_star = p.s0 + std::max(0.0, dynamic);
    interaction = (s_star / gap) * (s_star / gap);
  }
  const double a = p.a_max * (1.0 - free_term - interaction);
  return std::clamp(a, -kIdmHardBrake, p.a_max);
}

int TagRank(TrajectoryTag tag) {
  switch (tag) {
    case TrajectoryTag::kIdm:
      return 0;
    case TrajectoryTag::kLearned:
      return 1;
    case TrajectoryTag::kLearnedOffset:
      return 2;
    case TrajectoryTag::kVocabulary:
      return 3;
    case TrajectoryTag::kReplay:
      return 4;
  }
  return 4;
}

namespace {

struct PathAgent {
  double s = 0.0;        // arclength of the agent center at t = 0
  double v_along = 0.0;  // velocity component along the path
  double half_length = 0.0;
  bool is_static = false;
};

}  // namespace

Trajectory RolloutIdm(const EgoState& ego, const ProposalPath& path, double offset,
                      const IdmParams& params, const std::vector<AgentState>& agents,
                      const ProposalConfig& config) {
  offset = std::clamp(offset, -config.max_offset, config.max_offset);
  const PathProjection start = path.centerline.Project(ego.pose);
  const double path_length = path.centerline.Length();

  std::vector<PathAgent> corridor;
  for (const AgentState& a : agents) {
    const PathProjection pa = path.centerline.Project(a.pose);
    if (std::abs(pa.lateral_offset - offset) >= config.corridor_half_width) continue;
    if (pa.arclength <= start.arclength) continue;
    // Agents beyond the path end cannot be leads.
    if (pa.arclength >= path_length && Distance(path.centerline.points().back(),
                                                a.pose.position()) > a.half_length) {
      continue;
    }
    const double path_heading = path.centerline.Interpolate(pa.arclength).heading;
    PathAgent pa_out;
    pa_out.s = pa.arclength;
    pa_out.v_along = a.speed * std::cos(a.pose.heading - path_heading);
    pa_out.half_length = a.half_length;
    pa_out.is_static = a.kind == AgentKind::kStatic || a.speed < 0.1;
    corridor.push_back(pa_out);
  }

  const int steps = config.HorizonSteps();
  const double dt = config.dt;
  std::vector<Vec2> positions;
  std::vector<double> speeds;
  positions.reserve(steps + 1);
  speeds.reserve(steps + 1);
  positions.push_back(ego.pose.position());
  speeds.push_back(ego.speed);

  double s = start.arclength;
  double lateral = start.lateral_offset;
  double v = ego.speed;
  for (int k = 1; k <= steps; ++k) {
    const double t = (k - 1) * dt;
    double gap = kInfiniteGap;
    double v_lead = 0.0;
    for (const PathAgent& a : corridor) {
      const double a_s = a.s + a.v_along * t;
      double g = a_s - s - ego.half_length - a.half_length;
      if (a.is_static) g -= config.static_stop_margin;
      if (a_s > s && g < gap) {
        gap = g;
        v_lead = a.v_along;
      }
    }
    if (path.terminal) {
      const double g = path_length - s - ego.half_length;
      if (g < gap) {
        gap = g;
        v_lead = 0.0;
      }
    }
    const double accel = IdmAccel(v, v_lead, gap, params);
    s += v * dt;
    v = std::max(0.0, v + accel * dt);
    const double rate = std::min(config.max_lateral_rate,
                                 config.lateral_rate_per_speed * v);
    const double step = rate * dt;
    lateral += std::clamp(offset - lateral, -step, step);
    positions.push_back(path.centerline.Interpolate(s).ToWorld({0.0, lateral}));
    speeds.push_back(v);
  }
  Trajectory traj = TrajectoryFromWaypoints(positions, dt, ego.pose.heading, ego.speed,
                                            TrajectoryTag::kIdm);
  for (size_t i = 0; i < traj.samples.size(); ++i) traj.samples[i].speed = speeds[i];
  traj.samples[0].pose = ego.pose;
  return traj;
}

ProposalSet GenerateProposals(const EgoState& ego, const std::vector<ProposalPath>& paths,
                              const std::vector<AgentState>& agents,
                              const ProposalConfig& config, const IdmParams& base) {
  ProposalSet out;
  out.reserve(paths.size() * config.offsets.size() * config.speed_fractions.size());
  for (size_t pi = 0; pi < paths.size(); ++pi) {
    for (size_t oi = 0; oi < config.offsets.size(); ++oi) {
      for (size_t fi = 0; fi < config.speed_fractions.size(); ++fi) {
        IdmParams params = base;
        params.v0 = std::max(0.1, config.speed_fractions[fi] * paths[pi].speed_limit);
        Proposal p;
        p.trajectory = RolloutIdm(ego, paths[pi], config.offsets[oi], params, agents, config);
        p.key = {TagRank(TrajectoryTag::kIdm), static_cast<int>(pi),
                 static_cast<int>(oi), static_cast<int>(fi), 0};
        p.path_index = static_cast<int>(pi);
        p.offset = config.offsets[oi];
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace radstack
