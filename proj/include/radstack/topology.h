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

#ifndef RADSTACK_TOPOLOGY_H_
#define RADSTACK_TOPOLOGY_H_

#include <string>
#include <string_view>
#include <vector>

#include "radstack/geometry.h"
#include "radstack/scene.h"

namespace radstack {

enum class PathSource { kEgoRoute, kLeftAdjacent, kRightAdjacent, kOpposing };

std::string_view ToString(PathSource source);

// A centerline-level route candidate. The centerline starts at the query
// pose's projection onto the first lane.
struct ProposalPath {
  std::vector<std::string> lane_sequence;
  Polyline centerline;
  PathSource source = PathSource::kEgoRoute;
  // True when the path stops at a lane without successors rather than at the
  // search horizon; rollouts treat the end as a stop.
  bool terminal = false;
  // Speed limit of the first lane.
  double speed_limit = 10.0;

  double Length() const { return centerline.Length(); }
};

struct TopologyConfig {
  double localization_radius = 10.0;  // m
  int max_paths = 5;
  double horizon_length = 120.0;  // m
  double ds = 1.0;                // resampling step, m
  double snap_radius = 0.5;       // m
  double bypass_length = 40.0;    // opposing-lane stretch before splicing back
  double splice_length = 10.0;    // transition back onto the route path
  bool enable_adjacents = true;
  bool enable_opposing = true;
};

// Lane-graph search from the ego's current pose. Throws OffMapError when no
// lane lies within `localization_radius`.
std::vector<ProposalPath> GraphSearch(const EgoState& ego, const Scenario& scenario,
                                      const TopologyConfig& config);

// Appends adjacent-lane and (optionally) opposing-lane paths for every
// ego-route path. Identity when both toggles are off.
std::vector<ProposalPath> AugmentWithAdjacents(std::vector<ProposalPath> paths,
                                               const Scenario& scenario,
                                               const EgoState& ego,
                                               const TopologyConfig& config);

PathProjection ProjectOntoPath(const ProposalPath& path, const Pose2& pose);

}  // namespace radstack

#endif  // RADSTACK_TOPOLOGY_H_
