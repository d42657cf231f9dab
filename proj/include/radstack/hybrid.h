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

#ifndef RADSTACK_HYBRID_H_
#define RADSTACK_HYBRID_H_

#include <optional>
#include <vector>

#include "radstack/proposals.h"
#include "radstack/scoring.h"

namespace radstack {

inline const std::vector<double> kDefaultLearnedOffsets = {-0.5, 0.5};

// Shifts every sample of `traj` by `offset` meters along its own left normal.
Trajectory ShiftLaterally(const Trajectory& traj, double offset);

// Appends the learned plan (tag learned) and one shifted copy per offset
// (tag learned_offset). Throws HorizonMismatchError if the learned plan's
// dt or step count differs from the existing proposals.
ProposalSet InjectLearned(ProposalSet proposals, const Trajectory& learned,
                          const std::vector<double>& offsets);

struct HybridResult {
  ProposalSet proposals;  // the injected union
  Selection selection;
};

// SelectBest over the injected union; with no learned plan this is plain
// SelectBest over `proposals`.
HybridResult HybridSelect(ProposalSet proposals, const std::optional<Trajectory>& learned,
                          const std::vector<double>& offsets,
                          const ScoringContext& context);

}  // namespace radstack

#endif  // RADSTACK_HYBRID_H_
