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

#include "radstack/geometry.h"

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"

namespace radstack {
namespace {

TEST_CASE("NormalizeAngle maps into (-pi, pi]") {
  CHECK(NormalizeAngle(kPi) == doctest::Approx(kPi));
  CHECK(NormalizeAngle(-kPi) == doctest::Approx(kPi));
  CHECK(NormalizeAngle(3 * kPi) == doctest::Approx(kPi));
  CHECK(NormalizeAngle(0.5) == doctest::Approx(0.5));
  CHECK(NormalizeAngle(2 * kPi + 0.25) == doctest::Approx(0.25));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = NormalizeAngle(u(rng));
    CHECK(a > -kPi);
    CHECK(a <= kPi);
  }
}

TEST_CASE("Pose2 frame transforms invert each other") {
  const Pose2 pose(3.0, -2.0, 0.7);
  const Vec2 local{1.5, -0.25};
  const Vec2 world = pose.ToWorld(local);
  const Vec2 back = pose.ToLocal(world);
  CHECK(back.x == doctest::Approx(local.x));
  CHECK(back.y == doctest::Approx(local.y));
  // Rotation-matrix oracle.
  CHECK(world.x == doctest::Approx(3.0 + std::cos(0.7) * 1.5 - std::sin(0.7) * -0.25));
  CHECK(world.y == doctest::Approx(-2.0 + std::sin(0.7) * 1.5 + std::cos(0.7) * -0.25));
}

TEST_CASE("BoxesOverlap: separated, touching, rotated") {
  const OrientedBox a{Pose2(0, 0, 0), 2.0, 1.0};
  CHECK(BoxesOverlap(a, OrientedBox{Pose2(3.9, 0, 0), 2.0, 1.0}));
  CHECK(BoxesOverlap(a, OrientedBox{Pose2(4.0, 0, 0), 2.0, 1.0}));  // touching
  CHECK_FALSE(BoxesOverlap(a, OrientedBox{Pose2(4.01, 0, 0), 2.0, 1.0}));
  // A diamond whose corner reaches past the box edge on the diagonal only.
  const OrientedBox diamond{Pose2(3.0, 2.0, kPi / 4), 0.5, 0.5};
  CHECK_FALSE(BoxesOverlap(a, diamond));
  CHECK(BoxesOverlap(a, OrientedBox{Pose2(2.3, 0.0, kPi / 4), 0.5, 0.5}));
}

TEST_CASE("PointInPolygon is boundary inclusive") {
  const Polygon square = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  CHECK(PointInPolygon({1, 1}, square));
  CHECK(PointInPolygon({0, 1}, square));
  CHECK(PointInPolygon({2, 2}, square));
  CHECK_FALSE(PointInPolygon({2.001, 1}, square));
  CHECK_FALSE(PointInPolygon({-1, -1}, square));
}

TEST_CASE("Polyline projection on a straight line") {
  const Polyline line({{0, 0}, {10, 0}});
  const PathProjection on = line.Project(Pose2(4, 0, 0));
  CHECK(on.arclength == doctest::Approx(4.0));
  CHECK(on.lateral_offset == doctest::Approx(0.0));
  const PathProjection left = line.Project(Pose2(4, 1, 0));
  CHECK(left.lateral_offset == doctest::Approx(1.0));
  CHECK(left.heading_error == doctest::Approx(0.0));
  const PathProjection past = line.Project(Pose2(15, -1, 0));
  CHECK(past.arclength == doctest::Approx(10.0));
}

TEST_CASE("Polyline projection near a 90 degree bend matches dense sampling") {
  const Polyline bend({{0, 0}, {10, 0}, {10, 10}});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(7.0, 13.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec2 q{u(rng), u(rng) - 10.0 + 3.0};
    const PathProjection p = bend.Project(Pose2(q.x, q.y, 0));
    // Brute force over 10^4 samples of the polyline.
    double best = std::numeric_limits<double>::infinity();
    const int n = 10000;
    for (int i = 0; i <= n; ++i) {
      const Vec2 s = bend.Interpolate(bend.Length() * i / n).position();
      best = std::min(best, Distance(s, q));
    }
    const Vec2 foot = bend.Interpolate(p.arclength).position();
    CHECK(Distance(foot, q) <= best + 1e-6);
    CHECK(std::abs(p.lateral_offset) == doctest::Approx(Distance(foot, q)).epsilon(1e-9));
  }
}

TEST_CASE("Polyline resample, slice, reverse") {
  const Polyline line({{0, 0}, {10, 0}});
  const Polyline r = line.Resample(1.0);
  CHECK(r.size() == 11);
  CHECK(r.Length() == doctest::Approx(10.0));
  const Polyline s = line.Slice(2.0, 5.0);
  CHECK(s.Length() == doctest::Approx(3.0));
  CHECK(s.points().front().x == doctest::Approx(2.0));
  const Polyline rev = line.Reversed();
  CHECK(rev.points().front() == Vec2{10, 0});
  CHECK(rev.Interpolate(1.0).heading == doctest::Approx(kPi));
}

}  // namespace
}  // namespace radstack
