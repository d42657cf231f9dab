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

#include "radstack/hybrid.h"

#include <cmath>
#include <string>

#include "radstack/errors.h"

namespace radstack {

namespace {
constexpr char kModule[] = "hybrid";
}  // namespace

Trajectory ShiftLaterally(const Trajectory& traj, double offset) {
  Trajectory out = traj;
  for (auto& s : out.samples) {
    const Vec2 normal{-std::sin(s.pose.heading), std::cos(s.pose.heading)};
    const Vec2 p = s.pose.position() + normal * offset;
    s.pose = Pose2(p.x, p.y, s.pose.heading);
  }
  return out;
}

ProposalSet InjectLearned(ProposalSet proposals, const Trajectory& learned,
                          const std::vector<double>& offsets) {
  if (!proposals.empty()) {
    const Trajectory& ref = proposals.front().trajectory;
    if (ref.steps() != learned.steps() || std::abs(ref.dt - learned.dt) > 1e-12) {
      throw HorizonMismatchError(
          kModule, "learned plan has " + std::to_string(learned.steps()) +
                       " steps, proposals have " + std::to_string(ref.steps()));
    }
  }
  Proposal base;
  base.trajectory = learned;
  base.trajectory.tag = TrajectoryTag::kLearned;
  base.key = {TagRank(TrajectoryTag::kLearned), 0, 0, 0, 0};
  proposals.push_back(base);
  for (size_t i = 0; i < offsets.size(); ++i) {
    Proposal p;
    p.trajectory = ShiftLaterally(learned, offsets[i]);
    p.trajectory.tag = TrajectoryTag::kLearnedOffset;
    p.key = {TagRank(TrajectoryTag::kLearnedOffset), 0, static_cast<int>(i), 0, 0};
    p.offset = offsets[i];
    proposals.push_back(std::move(p));
  }
  return proposals;
}

HybridResult HybridSelect(ProposalSet proposals, const std::optional<Trajectory>& learned,
                          const std::vector<double>& offsets,
                          const ScoringContext& context) {
  HybridResult result;
  result.proposals =
      learned ? InjectLearned(std::move(proposals), *learned, offsets) : std::move(proposals);
  result.selection = SelectBest(result.proposals, context);
  return result;
}

}  // namespace radstack
