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

#include "radstack/config.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "radstack/errors.h"

namespace radstack {
namespace {

std::string ErrorText(const nlohmann::json& j) {
  try {
    ConfigFromJson(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("defaults round trip through json") {
  const RunConfig defaults;
  const nlohmann::ordered_json j = ConfigToJson(defaults);
  const RunConfig back = ConfigFromJson(nlohmann::json::parse(j.dump()));
  CHECK(ConfigToJson(back).dump() == j.dump());
  CHECK(back.planner.kind == PlannerKind::kRad);
  CHECK(back.planner.toggles == PlannerToggles{});
  CHECK(back.sim.dt == 0.1);
  CHECK(back.planner.scoring.weights.goal == 0.3);
  CHECK_FALSE(back.model_path.has_value());
}

TEST_CASE("partial config overrides only the given keys") {
  const nlohmann::json j = nlohmann::json::parse(R"({
    "planner": {"kind": "hybrid", "toggles": {"goal": false}, "learned_offsets": [-1.0, 1.0]},
    "scoring": {"weights": {"ttc": 3.0}},
    "sim": {"agent_policy": "replay", "disturbances": [{"tick": 5, "lateral": 2.0}]},
    "model_path": "m.txt"
  })");
  const RunConfig c = ConfigFromJson(j);
  CHECK(c.planner.kind == PlannerKind::kHybrid);
  CHECK_FALSE(c.planner.toggles.goal);
  CHECK(c.planner.toggles.replan);
  CHECK(c.planner.learned_offsets == std::vector<double>{-1.0, 1.0});
  CHECK(c.planner.scoring.weights.ttc == 3.0);
  CHECK(c.planner.scoring.weights.ep == 5.0);
  CHECK(c.sim.agent_policy == AgentPolicy::kReplay);
  REQUIRE(c.sim.disturbances.size() == 1);
  CHECK(c.sim.disturbances[0].tick == 5);
  CHECK(c.model_path == "m.txt");
}

TEST_CASE("unknown keys and wrong types name the json path") {
  CHECK(ErrorText(nlohmann::json::parse(R"({"planner": {"kindd": "rad"}})"))
            .find("$.planner.kindd") != std::string::npos);
  CHECK(ErrorText(nlohmann::json::parse(R"({"sim": {"dt": "fast"}})")).find("$.sim.dt") !=
        std::string::npos);
  CHECK(ErrorText(nlohmann::json::parse(R"({"planner": {"kind": "magic"}})")) != "");
  CHECK(ErrorText(nlohmann::json::parse(R"({"bogus": 1})")).find("$.bogus") != std::string::npos);
  CHECK(ErrorText(nlohmann::json::parse(R"([1, 2])")) != "");
}

TEST_CASE("load_config reports io and parse failures") {
  CHECK_THROWS_AS(LoadConfig("/nonexistent/config.json"), IoError);
  const auto dir = std::filesystem::temp_directory_path() / "radstack_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{not json";
  CHECK_THROWS_AS(LoadConfig(dir / "bad.json"), ConfigError);
  std::ofstream(dir / "ok.json") << R"({"sim": {"seed": 9}})";
  CHECK(LoadConfig(dir / "ok.json").sim.seed == 9);
}

TEST_CASE("seed from the environment") {
  ::unsetenv("RADSTACK_SEED");
  CHECK(SeedFromEnv(17) == 17);
  ::setenv("RADSTACK_SEED", "123", 1);
  CHECK(SeedFromEnv(17) == 123);
  ::setenv("RADSTACK_SEED", "abc", 1);
  CHECK(SeedFromEnv(17) == 17);
  ::unsetenv("RADSTACK_SEED");
}

TEST_CASE("planner kind names") {
  CHECK(PlannerKindFromString("baseline-static") == PlannerKind::kBaselineStatic);
  CHECK(PlannerKindFromString("baseline_static") == PlannerKind::kBaselineStatic);
  CHECK(ToString(PlannerKind::kPlanHead) == "planhead");
  CHECK_THROWS_AS(PlannerKindFromString("pdm"), ConfigError);
}

TEST_CASE("baseline_static disables every ablation axis") {
  PlannerConfig c;
  c.kind = PlannerKind::kBaselineStatic;
  const PlannerConfig e = Effective(c);
  CHECK_FALSE(e.toggles.replan);
  CHECK_FALSE(e.toggles.vocab);
  CHECK_FALSE(e.toggles.adjacents);
  CHECK_FALSE(e.toggles.opposing);
  CHECK_FALSE(e.toggles.goal);
  CHECK_FALSE(e.toggles.relaxation);
  CHECK(e.scoring.kind == ScorerKind::kPdm);
  CHECK_FALSE(e.topology.enable_adjacents);
}

TEST_CASE("learned planners require a model") {
  const Scenario s = MakeStraightRoadScenario(100, 10, 5);
  PlannerConfig c;
  c.kind = PlannerKind::kHybrid;
  CHECK_THROWS_AS(Planner(s, c, nullptr, nullptr), ConfigError);
  c.kind = PlannerKind::kPlanHead;
  CHECK_THROWS_AS(Planner(s, c, nullptr, nullptr), ConfigError);
}

}  // namespace
}  // namespace radstack
