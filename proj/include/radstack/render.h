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

#ifndef RADSTACK_RENDER_H_
#define RADSTACK_RENDER_H_

#include <string>

#include "radstack/simulator.h"

namespace radstack {

// Overhead view of an episode: drivable area, lane centerlines, agents at
// the first tick, the ego trace colored by the winning trajectory tag, and
// the goal.
std::string RenderEpisodeSvg(const EpisodeLog& log);

// Fill color used for a trajectory tag.
const char* TagColor(TrajectoryTag tag);

}  // namespace radstack

#endif  // RADSTACK_RENDER_H_
