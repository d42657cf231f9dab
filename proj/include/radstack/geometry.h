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

#ifndef RADSTACK_GEOMETRY_H_
#define RADSTACK_GEOMETRY_H_

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace radstack {

inline constexpr double kPi = std::numbers::pi;

// Maps any angle into (-pi, pi].
double NormalizeAngle(double angle);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;

  double Dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double Cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double Norm() const { return std::hypot(x, y); }
};

// Planar pose. Heading is normalized into (-pi, pi] on construction; code
// that writes `heading` directly must keep it normalized.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Pose2() = default;
  Pose2(double x_in, double y_in, double heading_in)
      : x(x_in), y(y_in), heading(NormalizeAngle(heading_in)) {}

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose2&) const = default;

  // Maps a point given in this pose's local frame (x forward, y left) to the
  // world frame.
  Vec2 ToWorld(const Vec2& local) const;
  // Inverse of ToWorld.
  Vec2 ToLocal(const Vec2& world) const;
};

double Distance(const Vec2& a, const Vec2& b);

// Oriented rectangle centered on `center`.
struct OrientedBox {
  Pose2 center;
  double half_length = 0.0;
  double half_width = 0.0;

  // Corners in world frame, counterclockwise, starting front-left.
  std::array<Vec2, 4> Corners() const;
};

// Separating-axis test. Touching boxes count as overlapping.
bool BoxesOverlap(const OrientedBox& a, const OrientedBox& b);

using Polygon = std::vector<Vec2>;

// Boundary-inclusive point-in-polygon test for simple polygons.
bool PointInPolygon(const Vec2& p, std::span<const Vec2> polygon);

struct PathProjection {
  double arclength = 0.0;
  double lateral_offset = 0.0;  // + is left of the path direction
  double heading_error = 0.0;   // pose heading minus path heading
};

// Piecewise-linear polyline with cached cumulative arclength.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<double>& arclengths() const { return arclengths_; }
  double Length() const { return arclengths_.empty() ? 0.0 : arclengths_.back(); }
  bool empty() const { return points_.empty(); }
  size_t size() const { return points_.size(); }

  // Position and tangent heading at arclength s, clamped to [0, Length()].
  Pose2 Interpolate(double s) const;
  // Nearest-segment projection; arclength is clamped to [0, Length()].
  PathProjection Project(const Pose2& pose) const;
  // Uniform resampling with step ds; the last point is always kept.
  Polyline Resample(double ds) const;
  // Sub-polyline covering [s_begin, s_end].
  Polyline Slice(double s_begin, double s_end) const;
  Polyline Reversed() const;

 private:
  size_t SegmentIndex(double s) const;

  std::vector<Vec2> points_;
  std::vector<double> arclengths_;
};

}  // namespace radstack

#endif  // RADSTACK_GEOMETRY_H_
