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

#include "radstack/simulator.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "radstack/errors.h"

namespace radstack {
namespace {

Trajectory StraightReference(double x0, double speed, int steps, double dt) {
  Trajectory t;
  t.dt = dt;
  for (int k = 0; k <= steps; ++k) t.samples.push_back({Pose2(x0 + speed * dt * k, 0, 0), speed});
  return t;
}

std::string Serialize(const EpisodeLog& log) {
  std::ostringstream out;
  WriteEpisodeLog(log, out);
  return out.str();
}

AgentState Vehicle(std::string id, double x, double speed) {
  AgentState a;
  a.id = std::move(id);
  a.pose = Pose2(x, 0, 0);
  a.speed = speed;
  return a;
}

TEST_CASE("bicycle: straight line at constant speed") {
  EgoState e;
  e.pose = Pose2(1, 2, 0.3);
  e.speed = 4.0;
  for (int k = 0; k < 50; ++k) e = BicycleStep(e, 0.0, 0.0, 0.1);
  CHECK(e.pose.x == doctest::Approx(1 + 20 * std::cos(0.3)));
  CHECK(e.pose.y == doctest::Approx(2 + 20 * std::sin(0.3)));
  CHECK(e.pose.heading == doctest::Approx(0.3));
  CHECK(e.speed == doctest::Approx(4.0));
}

TEST_CASE("bicycle: constant steer traces the closed-form circle") {
  EgoState e;
  e.speed = 5.0;
  const double delta = 0.3;
  const double radius = e.wheelbase / std::tan(delta);
  const double dt = 1e-3;
  const int lap = static_cast<int>(std::lround(2 * kPi * radius / (e.speed * dt)));
  std::vector<Vec2> pts;
  for (int k = 0; k < lap; ++k) {
    e = BicycleStep(e, 0.0, delta, dt);
    pts.push_back(e.pose.position());
  }
  Vec2 center{0.0, 0.0};
  for (const Vec2& p : pts) center = center + p * (1.0 / static_cast<double>(pts.size()));
  double worst = 0.0;
  for (const Vec2& p : pts) worst = std::max(worst, std::abs(Distance(p, center) - radius));
  CHECK(worst < 1e-3);
  CHECK(Distance(pts.back(), Vec2{0.0, 0.0}) < 5.0 * dt * 2.0);
}

TEST_CASE("bicycle: no reverse and clamped commands") {
  EgoState e;
  e.speed = 0.0;
  e = BicycleStep(e, -1.0, 0.0, 0.1);
  CHECK(e.speed == 0.0);
  CHECK(e.pose == Pose2());
  e.speed = 1.0;
  const EgoState fast = BicycleStep(e, 100.0, 5.0, 0.1);
  CHECK(fast.speed == doctest::Approx(1.0 + 0.25));
  CHECK(fast.steering == doctest::Approx(0.6));
  CHECK(fast.accel == doctest::Approx(2.5));
  CHECK(BicycleStep(e, -100.0, 0.0, 0.1).accel == doctest::Approx(-6.0));
}

TEST_CASE("lqr: Riccati recursion reaches a fixed point") {
  const LqrConfig cfg;
  for (double v : {7.0, 10.0, 12.0, 15.0}) {
    const LqrGain g = ComputeLqrGain(v, 2.8, cfg);
    CAPTURE(v);
    CHECK(g.last_change < 1e-9);
    CHECK(g.k.allFinite());
  }
  for (double v : {0.5, 1.0, 5.0}) CHECK(ComputeLqrGain(v, 2.8, cfg).k.allFinite());
}

TEST_CASE("lqr: below the minimum speed the low-speed gain steers") {
  EgoState e;
  e.pose = Pose2(0, 0.5, 0);
  e.speed = 0.0;
  const ControlCommand c = LqrTrack(e, StraightReference(0, 3.0, 40, 0.1), {});
  CHECK(c.steer < 0.0);
  CHECK(std::isfinite(c.steer));
}

TEST_CASE("lqr: on the reference gives zero commands") {
  EgoState e;
  e.speed = 5.0;
  const ControlCommand c = LqrTrack(e, StraightReference(0, 5.0, 40, 0.1), {});
  CHECK(c.accel == doctest::Approx(0.0));
  CHECK(c.steer == doctest::Approx(0.0));
}

TEST_CASE("lqr: 0.5 m offset converges on a straight reference") {
  EgoState e;
  e.pose = Pose2(0, 0.5, 0);
  e.speed = 5.0;
  const LqrConfig cfg;
  double max_after_4s = 0.0;
  for (int k = 0; k < 200; ++k) {
    const ControlCommand c = LqrTrack(e, StraightReference(e.pose.x, 5.0, 40, 0.1), cfg);
    e = BicycleStep(e, c.accel, c.steer, 0.1);
    if (k >= 40) max_after_4s = std::max(max_after_4s, std::abs(e.pose.y));
  }
  CHECK(max_after_4s < 0.1);
  CHECK(std::abs(e.pose.y) < 0.05);
  CHECK(e.speed == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("agents: free flow approaches the lane speed limit") {
  Scenario s = MakeStraightRoadScenario(2000, 10, 0);
  std::vector<AgentState> agents = {Vehicle("a", 10, 2.0)};
  for (int k = 0; k < 400; ++k) agents = StepAgents(agents, s, AgentPolicy::kReactiveIdm, 0.1, k);
  CHECK(agents[0].speed == doctest::Approx(10.0).epsilon(0.05));
  CHECK(std::abs(agents[0].pose.y) < 0.05);
}

TEST_CASE("agents: a platoon of three never collides") {
  Scenario s = MakeStraightRoadScenario(2000, 10, 0);
  std::vector<AgentState> agents = {Vehicle("lead", 60, 3.0), Vehicle("mid", 40, 9.0),
                                    Vehicle("tail", 20, 12.0)};
  for (int k = 0; k < 600; ++k) {
    agents = StepAgents(agents, s, AgentPolicy::kReactiveIdm, 0.1, k);
    for (size_t i = 0; i < agents.size(); ++i) {
      for (size_t j = i + 1; j < agents.size(); ++j) {
        CHECK_FALSE(BoxesOverlap(Footprint(agents[i]), Footprint(agents[j])));
      }
    }
  }
}

TEST_CASE("agents: replay follows the script exactly") {
  Scenario s = MakeStraightRoadScenario(500, 10, 0);
  AgentState a = Vehicle("r", 30, 1.0);
  for (int k = 0; k < 20; ++k) a.script.push_back({Pose2(30 + 0.37 * k, 0.01 * k, 0.002 * k), 1.0 + 0.1 * k});
  std::vector<AgentState> agents = {a};
  for (int k = 0; k + 1 < 20; ++k) {
    agents = StepAgents(agents, s, AgentPolicy::kReplay, 0.1, k);
    CHECK(agents[0].pose == a.script[k + 1].pose);
    CHECK(agents[0].speed == a.script[k + 1].speed);
  }
}

TEST_CASE("agents: static stays put and pedestrians walk straight") {
  Scenario s = MakeStraightRoadScenario(500, 10, 0);
  AgentState st = Vehicle("s", 50, 0.0);
  st.kind = AgentKind::kStatic;
  AgentState ped = Vehicle("p", 70, 1.2);
  ped.kind = AgentKind::kPedestrian;
  ped.pose = Pose2(70, -3, kPi / 2);
  std::vector<AgentState> agents = {st, ped};
  for (int k = 0; k < 10; ++k) agents = StepAgents(agents, s, AgentPolicy::kReactiveIdm, 0.1, k);
  CHECK(agents[0].pose == st.pose);
  CHECK(agents[1].pose.x == doctest::Approx(70.0));
  CHECK(agents[1].pose.y == doctest::Approx(-3 + 1.2));
}

TEST_CASE("episode: empty road reaches the goal without other events") {
  const Scenario s = MakeStraightRoadScenario(150, 10, 5);
  const EpisodeLog log = RunEpisode(s, PlannerConfig{}, SimConfig{});
  CHECK(log.outcome == "goal_reached");
  REQUIRE(log.events.size() == 1);
  CHECK(log.events[0].kind == "goal_reached");
  CHECK(log.route_completion == 1.0);
  for (size_t i = 1; i < log.ticks.size(); ++i) CHECK(log.ticks[i].time > log.ticks[i - 1].time);
}

TEST_CASE("episode: blocked lane deadlocks the static baseline and not RAD") {
  const Scenario s = GenerateSyntheticScenario(ScenarioKind::kBlockedLane, 0);
  PlannerConfig baseline;
  baseline.kind = PlannerKind::kBaselineStatic;
  const EpisodeLog stuck = RunEpisode(s, baseline, SimConfig{});
  CHECK(stuck.HasEvent("deadlock"));
  CHECK_FALSE(stuck.HasEvent("goal_reached"));

  const EpisodeLog rad = RunEpisode(s, PlannerConfig{}, SimConfig{});
  CHECK(rad.outcome == "goal_reached");
  CHECK_FALSE(rad.HasEvent("collision"));
  const bool used_adjacent = std::any_of(rad.ticks.begin(), rad.ticks.end(), [](const TickRecord& t) {
    return t.path_source == PathSource::kLeftAdjacent || t.path_source == PathSource::kRightAdjacent;
  });
  CHECK(used_adjacent);
}

TEST_CASE("episode: bit-deterministic log and bounded displacement") {
  const Scenario s = GenerateSyntheticScenario(ScenarioKind::kDeadlockPair, 2);
  SimConfig sim;
  sim.seed = 5;
  const EpisodeLog a = RunEpisode(s, PlannerConfig{}, sim);
  const EpisodeLog b = RunEpisode(s, PlannerConfig{}, sim);
  CHECK(Serialize(a) == Serialize(b));

  const double v_max = 2.0 * std::max_element(s.lanes.begin(), s.lanes.end(), [](const Lane& x, const Lane& y) {
                         return x.speed_limit < y.speed_limit;
                       })->speed_limit;
  for (size_t i = 1; i < a.ticks.size(); ++i) {
    const double moved = Distance(a.ticks[i].ego.pose.position(), a.ticks[i - 1].ego.pose.position());
    CHECK(moved <= a.ticks[i - 1].ego.speed * sim.dt + 1e-9);
    CHECK(moved <= v_max * sim.dt);
  }
}

TEST_CASE("episode: proposals restart from a disturbed pose") {
  const Scenario s = GenerateSyntheticScenario(ScenarioKind::kBlockedLane, 1);
  SimConfig sim;
  sim.disturbances = {{20, 2.0}};
  sim.log_path_starts = true;
  bool checked = false;
  Pose2 before;
  const TickObserver observer = [&](const TickView& v) {
    if (v.tick == 20) before = v.ego.pose;
    if (v.tick != 21) return;
    checked = true;
    CHECK(Distance(v.ego.pose.position(), before.position()) > 1.0);
    for (const Proposal& p : v.plan.proposals) {
      CHECK(p.trajectory.samples.front().pose == v.ego.pose);
    }
    for (const ProposalPath& path : v.plan.paths) {
      const PathProjection proj = path.centerline.Project(v.ego.pose);
      const Vec2 foot = path.centerline.Interpolate(proj.arclength).position();
      CHECK(Distance(path.centerline.points().front(), foot) <= 0.5);
    }
  };
  RunEpisode(s, PlannerConfig{}, sim, nullptr, nullptr, observer);
  CHECK(checked);
}

TEST_CASE("episode log round trip") {
  const Scenario s = GenerateSyntheticScenario(ScenarioKind::kIntersectionTurn, 4);
  SimConfig sim;
  sim.log_all_breakdowns = true;
  sim.log_path_starts = true;
  EpisodeLog log = RunEpisode(s, PlannerConfig{}, sim);
  log.scenario_name = "intersection_turn_4";
  const std::string text = Serialize(log);
  std::istringstream in(text);
  const EpisodeLog back = ReadEpisodeLog(in);
  CHECK(Serialize(back) == text);
  CHECK(back.outcome == log.outcome);
  CHECK(back.ticks.size() == log.ticks.size());
  CHECK(back.scenario == log.scenario);

  std::istringstream garbage("{\"format\": \"something else\"}\n");
  CHECK_THROWS_AS(ReadEpisodeLog(garbage), ParseError);
  CHECK_THROWS_AS(LoadEpisodeLog("/nonexistent/log.jsonl"), IoError);
}

TEST_CASE("sim config validation") {
  SimConfig bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(ValidateSimConfig(bad), ConfigError);
  bad = SimConfig{};
  bad.horizon = 0.35;
  CHECK_THROWS_AS(ValidateSimConfig(bad), ConfigError);
  CHECK_NOTHROW(ValidateSimConfig(SimConfig{}));
}

}  // namespace
}  // namespace radstack
