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

#ifndef RADSTACK_CONFIG_H_
#define RADSTACK_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "radstack/planner.h"
#include "radstack/simulator.h"

namespace radstack {

// Everything a `run` or `bench` invocation can be configured with. Every
// field defaults to the documented value; a config file overrides a subset.
struct RunConfig {
  PlannerConfig planner;
  SimConfig sim;
  std::optional<std::string> model_path;
  std::optional<std::string> vocab_path;
};

// Full config with every key present.
nlohmann::ordered_json ConfigToJson(const RunConfig& config);

// Starts from the defaults and applies `j`. Unknown keys and wrongly typed
// values throw ConfigError naming the offending $.path.
RunConfig ConfigFromJson(const nlohmann::json& j);

// Throws IoError, ConfigError.
RunConfig LoadConfig(const std::filesystem::path& path);

// Value of RADSTACK_SEED when set and numeric, else `fallback`.
std::uint64_t SeedFromEnv(std::uint64_t fallback);

}  // namespace radstack

#endif  // RADSTACK_CONFIG_H_
