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

#ifndef RADSTACK_PROPOSALS_H_
#define RADSTACK_PROPOSALS_H_

#include <compare>
#include <limits>
#include <vector>

#include "radstack/scene.h"
#include "radstack/topology.h"

namespace radstack {

inline constexpr double kInfiniteGap = std::numeric_limits<double>::infinity();
inline constexpr double kIdmHardBrake = 6.0;  // m/s^2

struct IdmParams {
  double v0 = 10.0;            // reference speed, m/s
  double time_headway = 1.5;   // s
  double s0 = 2.0;             // jam distance, m
  double a_max = 1.5;          // m/s^2
  double b_comf = 3.0;         // m/s^2
  double delta = 4.0;
};

struct ProposalConfig {
  std::vector<double> offsets = {-1.0, 0.0, 1.0};
  std::vector<double> speed_fractions = {0.2, 0.4, 0.6, 0.8, 1.0};
  double horizon = 4.0;  // s
  double dt = 0.1;       // s
  double corridor_half_width = 2.0;
  double max_lateral_rate = 0.75;  // m/s
  // Lateral rate is also bounded by this fraction of the longitudinal speed,
  // so a stopped vehicle is never asked to slide sideways.
  double lateral_rate_per_speed = 0.55;
  double max_offset = 3.0;
  // Extra standstill distance kept to static obstacles on top of s0.
  double static_stop_margin = 6.0;

  int HorizonSteps() const;
};

// Longitudinal acceleration of the Intelligent Driver Model, clamped to
// [-kIdmHardBrake, a_max]. `gap` may be kInfiniteGap.
double IdmAccel(double v, double v_lead, double gap, const IdmParams& p);

// Stable ordering key of a proposal. Lower sorts first on score ties.
struct ProposalKey {
  int tag_rank = 0;
  int path_index = 0;
  int offset_index = 0;
  int fraction_index = 0;
  int extra = 0;

  auto operator<=>(const ProposalKey&) const = default;
};

int TagRank(TrajectoryTag tag);

struct Proposal {
  Trajectory trajectory;
  ProposalKey key;
  int path_index = -1;  // index into the tick's path list, -1 if pathless
  double offset = 0.0;
};

using ProposalSet = std::vector<Proposal>;

// One IDM rollout along `path` converging to lateral `offset`.
Trajectory RolloutIdm(const EgoState& ego, const ProposalPath& path, double offset,
                      const IdmParams& params, const std::vector<AgentState>& agents,
                      const ProposalConfig& config);

// |paths| x |offsets| x |speed_fractions| rollouts in that product order.
// `base` supplies every IDM parameter except v0, which is the fraction times
// the path's speed limit.
ProposalSet GenerateProposals(const EgoState& ego, const std::vector<ProposalPath>& paths,
                              const std::vector<AgentState>& agents,
                              const ProposalConfig& config, const IdmParams& base);

}  // namespace radstack

#endif  // RADSTACK_PROPOSALS_H_
