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

#include "radstack/vocabulary.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "radstack/cli.h"
#include "radstack/errors.h"
#include "radstack/simulator.h"

namespace radstack {
namespace {

std::filesystem::path TempPath(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "radstack_vocab_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<EgoState> RadHistory(const Scenario& s) {
  return EgoHistory(RunEpisode(s, PlannerConfig{}, SimConfig{}));
}

Waypoints Bundle(double curvature, double speed, int t, double noise, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, noise);
  Waypoints w;
  for (int k = 1; k <= t; ++k) {
    const double s = speed * 0.1 * k;
    Vec2 p = curvature == 0.0 ? Vec2{s, 0.0}
                              : Vec2{std::sin(curvature * s) / curvature,
                                     (1.0 - std::cos(curvature * s)) / curvature};
    w.push_back({p.x + n(rng), p.y + n(rng)});
  }
  return w;
}

double Rms(const Waypoints& a, const Waypoints& b) {
  return std::sqrt(SquaredDistance(a, b) / static_cast<double>(a.size()));
}

Waypoints Mean(const std::vector<Waypoints>& samples) {
  Waypoints m(samples.front().size(), Vec2{0, 0});
  for (const auto& s : samples) {
    for (size_t i = 0; i < m.size(); ++i) m[i] = m[i] + s[i];
  }
  for (auto& p : m) p = p * (1.0 / static_cast<double>(samples.size()));
  return m;
}

TEST_CASE("collect: straight road gives straight samples") {
  const Scenario s = MakeStraightRoadScenario(400, 10, 6);
  const auto samples = CollectExpertTrajectories({s}, RadHistory, 50, 40, 5);
  REQUIRE(!samples.empty());
  for (const Waypoints& w : samples) {
    REQUIRE(w.size() == 40);
    for (const Vec2& p : w) CHECK(std::abs(p.y) < 0.2);
  }
}

TEST_CASE("collect: deterministic and includes turning arcs") {
  std::vector<Scenario> scenarios;
  for (int seed = 0; seed < 2; ++seed) {
    scenarios.push_back(GenerateSyntheticScenario(ScenarioKind::kIntersectionTurn, seed));
  }
  const auto a = CollectExpertTrajectories(scenarios, RadHistory, 200, 40, 5);
  const auto b = CollectExpertTrajectories(scenarios, RadHistory, 200, 40, 5);
  CHECK(a == b);
  CHECK(a.size() <= 200);
  bool arc = false;
  for (const Waypoints& w : a) {
    const Vec2 d = w[w.size() - 1] - w[w.size() - 2];
    if (d.Norm() < 1e-6) continue;
    arc = arc || std::abs(std::atan2(d.y, d.x)) > kPi / 3.0;
  }
  CHECK(arc);
  CHECK(CollectExpertTrajectories(scenarios, RadHistory, 7, 40, 5).size() == 7);
}

TEST_CASE("samples from history are ego-frame windows") {
  std::vector<EgoState> history;
  for (int k = 0; k < 100; ++k) {
    EgoState e;
    e.pose = Pose2(10.0 + k, 5.0 + k, kPi / 4);
    history.push_back(e);
  }
  const auto samples = SamplesFromHistory(history, 10, 5);
  REQUIRE(!samples.empty());
  for (const Waypoints& w : samples) {
    for (int k = 0; k < 10; ++k) {
      CHECK(w[k].x == doctest::Approx(std::sqrt(2.0) * (k + 1)));
      CHECK(w[k].y == doctest::Approx(0.0).epsilon(1e-9));
    }
  }
  CHECK(samples.size() == (100 - 10 - 1) / 5 + 1);
}

TEST_CASE("kmeans: K = 1 is the element-wise mean") {
  std::mt19937_64 rng(1);
  std::vector<Waypoints> samples;
  for (int i = 0; i < 30; ++i) samples.push_back(Bundle(0.02 * (i % 3), 8.0, 20, 0.3, rng));
  const ClusterResult r = KMeansCluster(samples, 1, 50, 0, 0.1);
  REQUIRE(r.vocabulary.size() == 1);
  CHECK(Rms(r.vocabulary.prototypes[0], Mean(samples)) < 1e-9);
}

TEST_CASE("kmeans: K = |samples| reproduces the samples with zero SSE") {
  std::mt19937_64 rng(2);
  std::vector<Waypoints> samples;
  for (int i = 0; i < 12; ++i) samples.push_back(Bundle(0.01 * i, 5.0 + i, 20, 0.1, rng));
  const ClusterResult r = KMeansCluster(samples, 12, 50, 3, 0.1);
  CHECK(ClusterSse(samples, r.vocabulary) == doctest::Approx(0.0));
  for (const Waypoints& s : samples) {
    CHECK(std::count(r.vocabulary.prototypes.begin(), r.vocabulary.prototypes.end(), s) == 1);
  }
  CHECK_THROWS(KMeansCluster(samples, 13, 50, 3, 0.1));
}

TEST_CASE("kmeans: two separated bundles recover their means") {
  std::mt19937_64 rng(3);
  std::vector<Waypoints> straight, turn, all;
  const double kappa = (kPi / 2.0) / 32.0;
  for (int i = 0; i < 40; ++i) {
    straight.push_back(Bundle(0.0, 8.0, 40, 0.3, rng));
    turn.push_back(Bundle(kappa, 8.0, 40, 0.3, rng));
  }
  all = straight;
  all.insert(all.end(), turn.begin(), turn.end());
  std::shuffle(all.begin(), all.end(), rng);
  const ClusterResult r = KMeansCluster(all, 2, 100, 11, 0.1);
  const Waypoints ms = Mean(straight);
  const Waypoints mt = Mean(turn);
  const auto& p = r.vocabulary.prototypes;
  const double a = std::max(Rms(p[0], ms), Rms(p[1], mt));
  const double b = std::max(Rms(p[0], mt), Rms(p[1], ms));
  CHECK(std::min(a, b) < 0.5);
}

TEST_CASE("kmeans: SSE is monotone and the result deterministic") {
  std::mt19937_64 rng(4);
  std::vector<Waypoints> samples;
  std::uniform_real_distribution<double> kappa(-0.04, 0.04);
  std::uniform_real_distribution<double> speed(4.0, 12.0);
  for (int i = 0; i < 300; ++i) {
    const double k = kappa(rng);
    samples.push_back(Bundle(k, speed(rng), 40, 0.2, rng));
  }
  const ClusterResult r = KMeansCluster(samples, 16, 100, 9, 0.1);
  REQUIRE(!r.sse_history.empty());
  for (size_t i = 1; i < r.sse_history.size(); ++i) {
    CHECK(r.sse_history[i] <= r.sse_history[i - 1] * (1.0 + 1e-12));
  }
  CHECK(KMeansCluster(samples, 16, 100, 9, 0.1).vocabulary == r.vocabulary);
  CHECK(ClusterSse(samples, r.vocabulary) == doctest::Approx(r.sse_history.back()));
}

TEST_CASE("instantiate_vocabulary: identity, rotation and rigid transform") {
  const Waypoints proto = {{1, 0}, {2, 0.5}, {3, 1.5}, {4, 3}};
  EgoState ego;
  ego.speed = 10.0;
  Trajectory t = InstantiateVocabulary(proto, ego, 0.1);
  CHECK(t.tag == TrajectoryTag::kVocabulary);
  REQUIRE(t.samples.size() == proto.size() + 1);
  CHECK(t.samples[0].pose == ego.pose);
  for (size_t k = 0; k < proto.size(); ++k) {
    CHECK(t.samples[k + 1].pose.x == doctest::Approx(proto[k].x));
    CHECK(t.samples[k + 1].pose.y == doctest::Approx(proto[k].y));
  }

  ego.pose = Pose2(0, 0, kPi / 2);
  t = InstantiateVocabulary(proto, ego, 0.1);
  CHECK(t.samples[1].pose.x == doctest::Approx(0.0));
  CHECK(t.samples[1].pose.y == doctest::Approx(1.0));

  ego.pose = Pose2(10, 5, kPi / 4);
  t = InstantiateVocabulary(proto, ego, 0.1);
  const double c = std::cos(kPi / 4), s = std::sin(kPi / 4);
  for (size_t k = 0; k < proto.size(); ++k) {
    CHECK(std::abs(t.samples[k + 1].pose.x - (10 + c * proto[k].x - s * proto[k].y)) < 1e-9);
    CHECK(std::abs(t.samples[k + 1].pose.y - (5 + s * proto[k].x + c * proto[k].y)) < 1e-9);
  }
  CHECK(t.samples[2].speed == doctest::Approx(std::hypot(1.0, 0.5) / 0.1));
}

TEST_CASE("vocabulary proposals add exactly K entries") {
  std::mt19937_64 rng(6);
  std::vector<Waypoints> samples;
  for (int i = 0; i < 50; ++i) samples.push_back(Bundle(0.002 * i, 8.0, 40, 0.1, rng));
  const Vocabulary v = KMeansCluster(samples, 8, 50, 1, 0.1).vocabulary;
  const Scenario s = MakeStraightRoadScenario(300, 10, 5);
  ProposalSet set = GenerateProposals(s.ego, GraphSearch(s.ego, s, {}), {}, {}, {});
  const size_t before = set.size();
  AppendVocabularyProposals(v, s.ego, set);
  CHECK(set.size() == before + 8);
  for (size_t i = before; i < set.size(); ++i) {
    CHECK(set[i].trajectory.tag == TrajectoryTag::kVocabulary);
  }
}

TEST_CASE("save/load vocabulary") {
  std::mt19937_64 rng(7);
  std::vector<Waypoints> samples;
  for (int i = 0; i < 20; ++i) samples.push_back(Bundle(0.003 * i, 7.0, 40, 0.1, rng));
  const Vocabulary v = KMeansCluster(samples, 4, 50, 1, 0.1).vocabulary;
  const auto path = TempPath("v.txt");
  SaveVocabulary(v, path);
  const Vocabulary a = LoadVocabulary(path);
  CHECK(a == v);
  CHECK(LoadVocabulary(path) == a);

  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  lines.pop_back();
  const auto bad = TempPath("bad.txt");
  std::ofstream out(bad);
  for (const auto& l : lines) out << l << '\n';
  out.close();
  CHECK_THROWS_AS(LoadVocabulary(bad), ParseError);
  CHECK_THROWS_AS(LoadVocabulary(TempPath("missing.txt")), IoError);
}

}  // namespace
}  // namespace radstack
