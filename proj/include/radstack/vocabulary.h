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

#ifndef RADSTACK_VOCABULARY_H_
#define RADSTACK_VOCABULARY_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "radstack/proposals.h"
#include "radstack/scene.h"

namespace radstack {

// T ego-frame waypoints (x forward, y left) at t = dt, 2dt, ..., T dt.
using Waypoints = std::vector<Vec2>;

struct Vocabulary {
  int horizon_steps = 0;  // T
  double dt = 0.1;
  std::vector<Waypoints> prototypes;  // K entries of T waypoints

  int size() const { return static_cast<int>(prototypes.size()); }
  bool operator==(const Vocabulary&) const = default;
};

// Closed-loop ego history of one episode, one state per tick.
using EpisodeRunner = std::function<std::vector<EgoState>(const Scenario&)>;

// Slices `history` every `stride` ticks into T-step ego-frame windows.
std::vector<Waypoints> SamplesFromHistory(const std::vector<EgoState>& history,
                                          int horizon_steps, int stride);

// Runs `policy` on each scenario and harvests at most `count` windows.
std::vector<Waypoints> CollectExpertTrajectories(const std::vector<Scenario>& scenarios,
                                                 const EpisodeRunner& policy, int count,
                                                 int horizon_steps, int stride);

struct ClusterResult {
  Vocabulary vocabulary;
  std::vector<double> sse_history;  // after each Lloyd iteration
  int iterations = 0;
};

// Lloyd's k-means with k-means++ seeding on flattened 2T vectors.
// Throws DegenerateClusterError when an empty cluster cannot be re-seeded.
ClusterResult KMeansCluster(const std::vector<Waypoints>& samples, int k, int max_iters,
                            std::uint64_t seed, double dt);

// Sum of squared distances of every sample to its nearest prototype.
double ClusterSse(const std::vector<Waypoints>& samples, const Vocabulary& vocab);

// Squared L2 distance between two equally sized waypoint arrays.
double SquaredDistance(const Waypoints& a, const Waypoints& b);

// Rigid transform of a prototype into the world frame at the ego pose.
Trajectory InstantiateVocabulary(const Waypoints& prototype, const EgoState& ego,
                                 double dt);

// Appends one vocabulary proposal per prototype.
void AppendVocabularyProposals(const Vocabulary& vocab, const EgoState& ego,
                               ProposalSet& proposals);

// Text format v1: magic line, "K", "T", "dt" header lines, then one row of
// 2T numbers per prototype.
void SaveVocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary LoadVocabulary(const std::filesystem::path& path);

}  // namespace radstack

#endif  // RADSTACK_VOCABULARY_H_
