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

#include "radstack/proposals.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

namespace radstack {
namespace {

ProposalPath StraightPath(const Scenario& s) { return GraphSearch(s.ego, s, {})[0]; }

AgentState StaticAt(double x) {
  AgentState a;
  a.id = "blocker";
  a.pose = Pose2(x, 0, 0);
  a.kind = AgentKind::kStatic;
  return a;
}

TEST_CASE("idm_accel examples") {
  IdmParams p;
  p.v0 = 10.0;
  p.a_max = 2.0;
  p.delta = 4.0;
  CHECK(IdmAccel(10.0, 0.0, kInfiniteGap, p) == doctest::Approx(0.0));
  CHECK(IdmAccel(0.0, 0.0, p.s0, p) == doctest::Approx(0.0));
  CHECK(IdmAccel(5.0, 0.0, kInfiniteGap, p) == doctest::Approx(1.875));
}

TEST_CASE("idm_accel stays within the clamp and is finite") {
  const IdmParams p;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(0.0, 30.0);
  std::uniform_real_distribution<double> gap(1e-4, 200.0);
  for (int i = 0; i < 5000; ++i) {
    const double a = IdmAccel(v(rng), v(rng), gap(rng), p);
    CHECK(std::isfinite(a));
    CHECK(a <= p.a_max + 1e-12);
    CHECK(a >= -kIdmHardBrake - 1e-12);
  }
}

TEST_CASE("idm_accel is non-increasing in speed and non-decreasing in gap") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    IdmParams p;
    p.v0 = 5.0 + 20.0 * u(rng);
    p.time_headway = 0.5 + 2.0 * u(rng);
    p.s0 = 1.0 + 3.0 * u(rng);
    p.a_max = 0.5 + 2.5 * u(rng);
    p.b_comf = 1.0 + 3.0 * u(rng);
    const double v_lead = 20.0 * u(rng);
    const double gap = 1.0 + 100.0 * u(rng);
    const double v = 25.0 * u(rng);
    const double dv = 0.01 + 2.0 * u(rng);
    const double dg = 0.01 + 10.0 * u(rng);
    CHECK(IdmAccel(v + dv, v_lead, gap, p) <= IdmAccel(v, v_lead, gap, p) + 1e-12);
    CHECK(IdmAccel(v, v_lead, gap + dg, p) >= IdmAccel(v, v_lead, gap, p) - 1e-12);
    CHECK(IdmAccel(v, v_lead, kInfiniteGap, p) >= IdmAccel(v, v_lead, gap, p) - 1e-12);
  }
}

TEST_CASE("closed-loop IDM following never closes the gap") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double dt = 0.1;
  for (int draw = 0; draw < 50; ++draw) {
    IdmParams p;
    p.v0 = 8.0 + 12.0 * u(rng);
    p.time_headway = 0.8 + 1.2 * u(rng);
    p.s0 = 1.0 + 2.0 * u(rng);
    p.a_max = 0.8 + 1.7 * u(rng);
    p.b_comf = 1.5 + 2.0 * u(rng);
    double lead_x = 30.0 + 30.0 * u(rng);
    double lead_v = 15.0 * u(rng);
    double x = 0.0;
    double v = p.v0 * u(rng);
    double lead_a = 0.0;
    double min_gap = lead_x - x;
    for (int k = 0; k < 600; ++k) {
      if (k % 20 == 0) lead_a = -3.0 + 4.0 * u(rng);
      const double a = IdmAccel(v, lead_v, lead_x - x, p);
      x += v * dt;
      v = std::max(0.0, v + a * dt);
      lead_x += lead_v * dt;
      lead_v = std::clamp(lead_v + lead_a * dt, 0.0, 20.0);
      min_gap = std::min(min_gap, lead_x - x);
    }
    CHECK(min_gap > 0.0);
  }
}

TEST_CASE("rollout on an empty road at v0 is a constant-speed straight line") {
  const Scenario s = MakeStraightRoadScenario(300, 10, 10);
  IdmParams p;
  p.v0 = 10.0;
  const ProposalConfig cfg;
  const Trajectory t = RolloutIdm(s.ego, StraightPath(s), 0.0, p, {}, cfg);
  REQUIRE(t.steps() == static_cast<size_t>(cfg.HorizonSteps()));
  CHECK(t.tag == TrajectoryTag::kIdm);
  for (size_t k = 0; k < t.samples.size(); ++k) {
    CHECK(t.samples[k].speed == doctest::Approx(10.0));
    CHECK(t.samples[k].pose.y == doctest::Approx(0.0));
    CHECK(t.samples[k].pose.x == doctest::Approx(s.ego.pose.x + 10.0 * cfg.dt * k));
  }
}

TEST_CASE("rollout behind a static lead stops short of it") {
  const Scenario s = MakeStraightRoadScenario(300, 10, 5);
  IdmParams p;
  p.v0 = 10.0;
  ProposalConfig cfg;
  cfg.horizon = 30.0;
  const double half = s.ego.half_length;
  const AgentState lead = StaticAt(s.ego.pose.x + 20.0 + 2.0 * half);
  const Trajectory t = RolloutIdm(s.ego, StraightPath(s), 0.0, p, {lead}, cfg);

  const auto effective_gap = [&](double x) {
    return lead.pose.x - x - half - lead.half_length - cfg.static_stop_margin;
  };
  double min_gap = kInfiniteGap;
  for (const auto& sample : t.samples) min_gap = std::min(min_gap, effective_gap(sample.pose.x));
  CHECK(t.samples.back().speed < 0.5);
  CHECK(min_gap >= p.s0 - 0.1);

  double x = s.ego.pose.x;
  double v = s.ego.speed;
  double ref_min_gap = kInfiniteGap;
  const double h = 1e-3;
  for (int k = 0; k < static_cast<int>(std::lround(cfg.horizon / h)); ++k) {
    const double a = IdmAccel(v, 0.0, effective_gap(x), p);
    x += v * h;
    v = std::max(0.0, v + a * h);
    ref_min_gap = std::min(ref_min_gap, effective_gap(x));
  }
  CHECK(v < 0.5);
  CHECK(ref_min_gap >= p.s0 - 0.1);
  CHECK(std::abs(t.samples.back().pose.x - x) < 0.5);
}

TEST_CASE("rollout with offset +1 converges to the target lateral offset") {
  const Scenario s = MakeStraightRoadScenario(400, 10, 8);
  IdmParams p;
  p.v0 = 8.0;
  ProposalConfig cfg;
  cfg.horizon = 8.0;
  const ProposalPath path = StraightPath(s);
  const Trajectory t = RolloutIdm(s.ego, path, 1.0, p, {}, cfg);
  CHECK(std::abs(path.centerline.Project(t.samples.back().pose).lateral_offset - 1.0) < 0.05);
  for (size_t k = 1; k < t.samples.size(); ++k) {
    const double dl = t.samples[k].pose.y - t.samples[k - 1].pose.y;
    CHECK(std::abs(dl) <= cfg.max_lateral_rate * cfg.dt + 1e-9);
  }
}

TEST_CASE("generate_proposals cardinality and rollout contract") {
  const Scenario one = MakeStraightRoadScenario(300, 10, 5);
  const ProposalConfig cfg;
  const IdmParams base;
  const auto paths1 = GraphSearch(one.ego, one, {});
  const ProposalSet set1 = GenerateProposals(one.ego, paths1, {}, cfg, base);
  CHECK(set1.size() == 15);

  const Scenario s = GenerateSyntheticScenario(ScenarioKind::kBlockedLane, 2);
  std::vector<ProposalPath> paths = AugmentWithAdjacents(GraphSearch(s.ego, s, {}), s, s.ego, {});
  while (paths.size() < 3) paths.push_back(paths.front());
  paths.resize(3);
  const ProposalSet set3 = GenerateProposals(s.ego, paths, s.agents, cfg, base);
  CHECK(set3.size() == 45);
  for (const Proposal& p : set3) {
    CHECK(p.trajectory.tag == TrajectoryTag::kIdm);
    CHECK(p.trajectory.samples.front().pose == s.ego.pose);
    CHECK(p.trajectory.samples.front().speed == s.ego.speed);
  }

  ProposalConfig wide;
  wide.offsets = {-1.5, -0.5, 0.0, 0.5, 1.5};
  wide.speed_fractions = {0.5, 1.0};
  CHECK(GenerateProposals(s.ego, paths, s.agents, wide, base).size() == 3 * 5 * 2);
}

TEST_CASE("generate_proposals order is the path x offset x fraction product") {
  const Scenario s = GenerateSyntheticScenario(ScenarioKind::kDeadlockPair, 1);
  const auto paths = AugmentWithAdjacents(GraphSearch(s.ego, s, {}), s, s.ego, {});
  const ProposalConfig cfg;
  const ProposalSet set = GenerateProposals(s.ego, paths, s.agents, cfg, {});
  for (size_t i = 1; i < set.size(); ++i) CHECK(set[i - 1].key < set[i].key);
  CHECK(set.size() == paths.size() * cfg.offsets.size() * cfg.speed_fractions.size());
}

}  // namespace
}  // namespace radstack
