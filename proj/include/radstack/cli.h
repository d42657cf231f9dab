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

#ifndef RADSTACK_CLI_H_
#define RADSTACK_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "radstack/planhead.h"
#include "radstack/simulator.h"

namespace radstack {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitUsage = 2;

// Entry point of the radstack binary. Writes human-readable output to `out`
// and diagnostics to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Imitation samples from one episode: features at tick t and the ego-frame
// positions of the next `horizon_steps` ticks.
std::vector<TrainingSample> TrainingSamplesFromLog(const EpisodeLog& log, int horizon_steps,
                                                   int stride);

// Ego history of an episode log, one state per tick plus the final state.
std::vector<EgoState> EgoHistory(const EpisodeLog& log);

// Episode logs (*.jsonl) in `dir`, sorted by file name.
std::vector<std::filesystem::path> ListFiles(const std::filesystem::path& dir,
                                             const std::string& extension);

}  // namespace radstack

#endif  // RADSTACK_CLI_H_
