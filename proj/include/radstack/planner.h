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

#ifndef RADSTACK_PLANNER_H_
#define RADSTACK_PLANNER_H_

#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "radstack/hybrid.h"
#include "radstack/planhead.h"
#include "radstack/proposals.h"
#include "radstack/scene.h"
#include "radstack/scoring.h"
#include "radstack/topology.h"
#include "radstack/vocabulary.h"

namespace radstack {

enum class PlannerKind { kRad, kPlanHead, kHybrid, kBaselineStatic };

std::string_view ToString(PlannerKind kind);
// Accepts both "baseline_static" and "baseline-static".
PlannerKind PlannerKindFromString(std::string_view s);

// Ablation axes. Each flag removes one component when false.
struct PlannerToggles {
  bool replan = true;
  bool vocab = true;
  bool adjacents = true;
  bool opposing = true;
  bool goal = true;
  bool relaxation = true;

  bool operator==(const PlannerToggles&) const = default;
};

struct PlannerConfig {
  PlannerKind kind = PlannerKind::kRad;
  PlannerToggles toggles;
  TopologyConfig topology;
  ProposalConfig proposals;
  IdmParams idm;
  ScoringConfig scoring;
  std::vector<double> learned_offsets = kDefaultLearnedOffsets;
  AnytimeBudget budget = AnytimeBudget::kClassifyAndRefine;
};

// Applies the planner kind to the toggles and scorer: baseline_static turns
// every RAD component off and uses the PDM scorer.
PlannerConfig Effective(PlannerConfig config);

struct PlanOutput {
  Trajectory trajectory;
  size_t winner = 0;
  ScoreBreakdown breakdown;
  std::optional<PathSource> path_source;  // empty for pathless winners
  std::vector<ProposalPath> paths;
  ProposalSet proposals;
  std::vector<ScoreBreakdown> breakdowns;  // parallel to proposals
  RelaxationState relaxation;
};

// Stateful closed-loop planner. Keeps the ego history for relaxation and,
// without replanning, the paths found on the first call.
class Planner {
 public:
  // `vocab` and `model` may be null; they must outlive the planner.
  Planner(const Scenario& scenario, PlannerConfig config, const Vocabulary* vocab,
          const PlanHeadModel* model);

  PlanOutput Plan(const EgoState& ego, const std::vector<AgentState>& agents);

  const PlannerConfig& config() const { return config_; }

 private:
  std::vector<ProposalPath> Paths(const EgoState& ego);
  RelaxationState Relaxation(const EgoState& ego, const std::vector<AgentState>& agents,
                             const ProposalPath& route_path);
  std::optional<Trajectory> Learned(const EgoState& ego,
                                    const std::vector<AgentState>& agents,
                                    const ProposalPath& route_path) const;

  const Scenario& scenario_;
  PlannerConfig config_;
  const Vocabulary* vocab_;
  const PlanHeadModel* model_;
  std::optional<std::vector<ProposalPath>> static_paths_;
  std::deque<EgoState> history_;
  bool relax_latched_ = false;
};

}  // namespace radstack

#endif  // RADSTACK_PLANNER_H_
