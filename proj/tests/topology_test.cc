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

#include "radstack/topology.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "radstack/errors.h"

namespace radstack {
namespace {

Lane StraightLane(std::string id, Vec2 from, Vec2 to, int n = 10) {
  Lane lane;
  lane.id = std::move(id);
  std::vector<Vec2> pts;
  for (int i = 0; i <= n; ++i) pts.push_back(from + (to - from) * (static_cast<double>(i) / n));
  lane.centerline = Polyline(std::move(pts));
  return lane;
}

Scenario WithLanes(std::vector<Lane> lanes, std::vector<std::string> route, Pose2 ego,
                   Pose2 goal) {
  Scenario s;
  s.lanes = std::move(lanes);
  for (const Lane& l : s.lanes) s.drivable_area.push_back(LanePolygon(l.centerline, l.width));
  s.route = std::move(route);
  s.ego.pose = ego;
  s.ego.speed = 5.0;
  s.goal = goal;
  return s;
}

Scenario ThreeParallelLanes() {
  Lane right = StraightLane("right", {0, -3.5}, {100, -3.5});
  Lane mid = StraightLane("mid", {0, 0}, {100, 0});
  Lane left = StraightLane("left", {0, 3.5}, {100, 3.5});
  mid.left_adjacent = "left";
  mid.right_adjacent = "right";
  left.right_adjacent = "mid";
  right.left_adjacent = "mid";
  return WithLanes({right, mid, left}, {"mid"}, Pose2(10, 0, 0), Pose2(90, 0, 0));
}

double StartDistance(const ProposalPath& p, const Pose2& pose) {
  return Distance(p.centerline.points().front(),
                  p.centerline.Interpolate(p.centerline.Project(pose).arclength).position());
}

TEST_CASE("graph_search: single straight lane gives exactly that centerline") {
  const Scenario s = MakeStraightRoadScenario(200, 10, 5);
  const auto paths = GraphSearch(s.ego, s, {});
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].lane_sequence == s.route);
  CHECK(paths[0].source == PathSource::kEgoRoute);
  const Vec2 start = paths[0].centerline.points().front();
  CHECK(start.x == doctest::Approx(s.ego.pose.x));
  CHECK(start.y == doctest::Approx(0.0));
  for (const Vec2& p : paths[0].centerline.points()) CHECK(p.y == doctest::Approx(0.0));
}

TEST_CASE("graph_search: path is rooted at the projection of the current pose") {
  const Scenario s = MakeStraightRoadScenario(200, 10, 5);
  EgoState moved = s.ego;
  moved.pose = Pose2(s.ego.pose.x + 17.0, 2.0, 0.1);
  const auto before = GraphSearch(s.ego, s, {});
  const auto after = GraphSearch(moved, s, {});
  REQUIRE(after.size() == 1);
  const Vec2 start = after[0].centerline.points().front();
  CHECK(start.x == doctest::Approx(moved.pose.x));
  CHECK(start.y == doctest::Approx(0.0));
  CHECK(before[0].centerline.points().front().x != doctest::Approx(start.x));
}

TEST_CASE("graph_search: diamond fork returns both branches") {
  Lane a = StraightLane("a", {0, 0}, {30, 0});
  Lane b = StraightLane("b", {30, 0}, {60, 10});
  Lane c = StraightLane("c", {30, 0}, {60, -10});
  Lane d = StraightLane("d", {60, 10}, {120, 10});
  Lane e = StraightLane("e", {60, -10}, {120, -10});
  a.successors = {"b", "c"};
  b.successors = {"d"};
  c.successors = {"e"};
  const Scenario s = WithLanes({a, b, c, d, e}, {"a", "b", "d"}, Pose2(5, 0, 0),
                               Pose2(110, 10, 0));
  TopologyConfig cfg;
  cfg.max_paths = 2;
  const auto paths = GraphSearch(s.ego, s, cfg);
  REQUIRE(paths.size() == 2);
  std::set<std::vector<std::string>> seqs;
  for (const auto& p : paths) seqs.insert(p.lane_sequence);
  CHECK(seqs.count({"a", "b", "d"}) == 1);
  CHECK(seqs.count({"a", "c", "e"}) == 1);

  cfg.max_paths = 1;
  CHECK(GraphSearch(s.ego, s, cfg).size() == 1);
}

TEST_CASE("graph_search: path length covers the horizon or the route end") {
  const Scenario s = MakeStraightRoadScenario(400, 10, 5);
  TopologyConfig cfg;
  cfg.horizon_length = 120.0;
  auto paths = GraphSearch(s.ego, s, cfg);
  REQUIRE(!paths.empty());
  CHECK(paths[0].Length() >= cfg.horizon_length - cfg.ds);
  cfg.horizon_length = 1000.0;
  paths = GraphSearch(s.ego, s, cfg);
  CHECK(paths[0].Length() == doctest::Approx(400.0 - s.ego.pose.x).epsilon(0.01));
  CHECK(paths[0].terminal);
}

TEST_CASE("graph_search: off map is an OffMapError") {
  const Scenario s = MakeStraightRoadScenario(200, 10, 5);
  EgoState far = s.ego;
  far.pose = Pose2(50, 40, 0);
  CHECK_THROWS_AS(GraphSearch(far, s, {}), OffMapError);
}

TEST_CASE("graph_search is deterministic") {
  for (ScenarioKind kind : {ScenarioKind::kBlockedLane, ScenarioKind::kIntersectionTurn,
                            ScenarioKind::kDeadlockPair, ScenarioKind::kLaneChangeRequired}) {
    const Scenario s = GenerateSyntheticScenario(kind, 11);
    const auto a = AugmentWithAdjacents(GraphSearch(s.ego, s, {}), s, s.ego, {});
    const auto b = AugmentWithAdjacents(GraphSearch(s.ego, s, {}), s, s.ego, {});
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].lane_sequence == b[i].lane_sequence);
      CHECK(a[i].centerline.points() == b[i].centerline.points());
      CHECK(a[i].source == b[i].source);
    }
  }
}

TEST_CASE("augment: single lane without adjacency is the identity") {
  const Scenario s = MakeStraightRoadScenario(200, 10, 5);
  const auto paths = GraphSearch(s.ego, s, {});
  const auto out = AugmentWithAdjacents(paths, s, s.ego, {});
  REQUIRE(out.size() == paths.size());
  CHECK(out[0].lane_sequence == paths[0].lane_sequence);
  CHECK(out[0].centerline.points() == paths[0].centerline.points());
}

TEST_CASE("augment: three parallel lanes yield ego, left and right sources") {
  const Scenario s = ThreeParallelLanes();
  const auto out = AugmentWithAdjacents(GraphSearch(s.ego, s, {}), s, s.ego, {});
  std::set<PathSource> sources;
  for (const auto& p : out) sources.insert(p.source);
  CHECK(sources == std::set<PathSource>{PathSource::kEgoRoute, PathSource::kLeftAdjacent,
                                        PathSource::kRightAdjacent});
  std::set<std::vector<std::string>> seqs;
  for (const auto& p : out) CHECK(seqs.insert(p.lane_sequence).second);
}

TEST_CASE("augment: toggles off is the identity on every generator kind") {
  TopologyConfig cfg;
  cfg.enable_adjacents = false;
  cfg.enable_opposing = false;
  for (ScenarioKind kind : {ScenarioKind::kBlockedLane, ScenarioKind::kIntersectionTurn,
                            ScenarioKind::kDeadlockPair, ScenarioKind::kLaneChangeRequired}) {
    for (int seed = 0; seed < 10; ++seed) {
      const Scenario s = GenerateSyntheticScenario(kind, seed);
      const auto paths = GraphSearch(s.ego, s, cfg);
      const auto out = AugmentWithAdjacents(paths, s, s.ego, cfg);
      REQUIRE(out.size() == paths.size());
      for (size_t i = 0; i < out.size(); ++i) {
        CHECK(out[i].lane_sequence == paths[i].lane_sequence);
        CHECK(out[i].centerline.points() == paths[i].centerline.points());
      }
    }
  }
}

TEST_CASE("augment: output contains the input and has no duplicate lane sequences") {
  for (ScenarioKind kind : {ScenarioKind::kBlockedLane, ScenarioKind::kIntersectionTurn,
                            ScenarioKind::kDeadlockPair, ScenarioKind::kLaneChangeRequired}) {
    for (int seed = 0; seed < 10; ++seed) {
      const Scenario s = GenerateSyntheticScenario(kind, seed);
      const auto paths = GraphSearch(s.ego, s, {});
      const auto out = AugmentWithAdjacents(paths, s, s.ego, {});
      REQUIRE(out.size() >= paths.size());
      for (size_t i = 0; i < paths.size(); ++i) {
        CHECK(out[i].lane_sequence == paths[i].lane_sequence);
      }
      std::set<std::vector<std::string>> seqs;
      for (const auto& p : out) CHECK(seqs.insert(p.lane_sequence).second);
    }
  }
}

TEST_CASE("augment: bidirectional road adds exactly one opposing path") {
  for (int seed = 0; seed < 10; ++seed) {
    const Scenario s = GenerateSyntheticScenario(ScenarioKind::kDeadlockPair, seed);
    const auto out = AugmentWithAdjacents(GraphSearch(s.ego, s, {}), s, s.ego, {});
    CHECK(std::count_if(out.begin(), out.end(), [](const ProposalPath& p) {
            return p.source == PathSource::kOpposing;
          }) == 1);
    TopologyConfig no_opp;
    no_opp.enable_opposing = false;
    const auto without = AugmentWithAdjacents(GraphSearch(s.ego, s, no_opp), s, s.ego, no_opp);
    CHECK(std::none_of(without.begin(), without.end(), [](const ProposalPath& p) {
      return p.source == PathSource::kOpposing;
    }));
  }
}

TEST_CASE("every path starts within the snap radius of the ego projection") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(-1.5, 1.5);
  std::uniform_real_distribution<double> head(-0.3, 0.3);
  for (ScenarioKind kind : {ScenarioKind::kBlockedLane, ScenarioKind::kIntersectionTurn,
                            ScenarioKind::kDeadlockPair, ScenarioKind::kLaneChangeRequired}) {
    for (int seed = 0; seed < 10; ++seed) {
      const Scenario s = GenerateSyntheticScenario(kind, seed);
      EgoState ego = s.ego;
      ego.pose = Pose2(ego.pose.x + 3.0, ego.pose.y + lat(rng), ego.pose.heading + head(rng));
      const TopologyConfig cfg;
      for (const auto& p : AugmentWithAdjacents(GraphSearch(ego, s, cfg), s, ego, cfg)) {
        CHECK(StartDistance(p, ego.pose) <= cfg.snap_radius);
      }
    }
  }
}

TEST_CASE("project_onto_path examples") {
  const Scenario s = MakeStraightRoadScenario(200, 10, 5);
  const auto path = GraphSearch(s.ego, s, {})[0];
  PathProjection p = ProjectOntoPath(path, Pose2(30, 0, 0));
  CHECK(p.lateral_offset == doctest::Approx(0.0));
  p = ProjectOntoPath(path, Pose2(30, 1.0, 0));
  CHECK(p.lateral_offset == doctest::Approx(1.0));
  CHECK(p.heading_error == doctest::Approx(0.0));
  CHECK(p.arclength == doctest::Approx(30.0 - s.ego.pose.x));
  p = ProjectOntoPath(path, Pose2(-50, -3, 0));
  CHECK(p.arclength >= 0.0);
  p = ProjectOntoPath(path, Pose2(1e4, 0, 0));
  CHECK(p.arclength <= path.Length() + 1e-9);
}

TEST_CASE("project_onto_path near a bend matches a dense sampling oracle") {
  Lane a = StraightLane("a", {0, 0}, {50, 0}, 5);
  Lane b = StraightLane("b", {50, 0}, {50, 50}, 5);
  a.successors = {"b"};
  const Scenario s = WithLanes({a, b}, {"a", "b"}, Pose2(2, 0, 0), Pose2(50, 45, kPi / 2));
  const auto path = GraphSearch(s.ego, s, {})[0];
  const auto& pts = path.centerline.points();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> jitter(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Pose2 q(50 + jitter(rng), jitter(rng), 0.0);
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      for (int k = 0; k <= 10000; ++k) {
        const Vec2 x = pts[i] + (pts[i + 1] - pts[i]) * (k / 10000.0);
        best = std::min(best, Distance(x, q.position()));
      }
    }
    const PathProjection p = ProjectOntoPath(path, q);
    const Vec2 foot = path.centerline.Interpolate(p.arclength).position();
    const double d = Distance(foot, q.position());
    CHECK(d <= best + 1e-6);
    CHECK(best - d < 1e-3);
  }
}

}  // namespace
}  // namespace radstack
