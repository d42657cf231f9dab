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

#include <algorithm>
#include <limits>

namespace radstack {

double NormalizeAngle(double angle) {
  if (!std::isfinite(angle)) return angle;
  double a = std::fmod(angle, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

Vec2 Pose2::ToWorld(const Vec2& local) const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  return {x + c * local.x - s * local.y, y + s * local.x + c * local.y};
}

Vec2 Pose2::ToLocal(const Vec2& world) const {
  const double c = std::cos(heading);
  const double s = std::sin(heading);
  const double dx = world.x - x;
  const double dy = world.y - y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

double Distance(const Vec2& a, const Vec2& b) { return (a - b).Norm(); }

std::array<Vec2, 4> OrientedBox::Corners() const {
  return {center.ToWorld({half_length, half_width}),
          center.ToWorld({-half_length, half_width}),
          center.ToWorld({-half_length, -half_width}),
          center.ToWorld({half_length, -half_width})};
}

namespace {

// Projection interval of `corners` on `axis`.
std::pair<double, double> ProjectCorners(const std::array<Vec2, 4>& corners,
                                         const Vec2& axis) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec2& c : corners) {
    const double d = c.Dot(axis);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return {lo, hi};
}

}  // namespace

bool BoxesOverlap(const OrientedBox& a, const OrientedBox& b) {
  const auto ca = a.Corners();
  const auto cb = b.Corners();
  const std::array<Vec2, 4> axes = {
      Vec2{std::cos(a.center.heading), std::sin(a.center.heading)},
      Vec2{-std::sin(a.center.heading), std::cos(a.center.heading)},
      Vec2{std::cos(b.center.heading), std::sin(b.center.heading)},
      Vec2{-std::sin(b.center.heading), std::cos(b.center.heading)}};
  for (const Vec2& axis : axes) {
    const auto [alo, ahi] = ProjectCorners(ca, axis);
    const auto [blo, bhi] = ProjectCorners(cb, axis);
    if (ahi < blo || bhi < alo) return false;
  }
  return true;
}

bool PointInPolygon(const Vec2& p, std::span<const Vec2> polygon) {
  const size_t n = polygon.size();
  if (n < 3) return false;
  constexpr double kEps = 1e-9;
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[j];
    // Boundary check first so edges and vertices count as inside.
    const Vec2 ab = b - a;
    const Vec2 ap = p - a;
    const double len2 = ab.Dot(ab);
    if (std::abs(ab.Cross(ap)) <= kEps * std::max(1.0, std::sqrt(len2))) {
      const double t = len2 > 0.0 ? ap.Dot(ab) / len2 : 0.0;
      if (t >= -kEps && t <= 1.0 + kEps) return true;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points)) {
  arclengths_.reserve(points_.size());
  double s = 0.0;
  for (size_t i = 0; i < points_.size(); ++i) {
    if (i > 0) s += Distance(points_[i - 1], points_[i]);
    arclengths_.push_back(s);
  }
}

size_t Polyline::SegmentIndex(double s) const {
  // Index i such that arclengths_[i] <= s < arclengths_[i + 1].
  auto it = std::upper_bound(arclengths_.begin(), arclengths_.end(), s);
  size_t idx = it == arclengths_.begin()
                   ? 0
                   : static_cast<size_t>(it - arclengths_.begin()) - 1;
  return std::min(idx, points_.size() - 2);
}

Pose2 Polyline::Interpolate(double s) const {
  if (points_.size() == 1) return {points_[0].x, points_[0].y, 0.0};
  s = std::clamp(s, 0.0, Length());
  size_t i = SegmentIndex(s);
  // Skip zero-length segments for the tangent.
  while (i + 2 < points_.size() && arclengths_[i + 1] - arclengths_[i] <= 0.0) {
    ++i;
  }
  const Vec2& a = points_[i];
  const Vec2& b = points_[i + 1];
  const double seg = arclengths_[i + 1] - arclengths_[i];
  const double t = seg > 0.0 ? (s - arclengths_[i]) / seg : 0.0;
  const Vec2 p = a + (b - a) * std::clamp(t, 0.0, 1.0);
  return {p.x, p.y, std::atan2(b.y - a.y, b.x - a.x)};
}

PathProjection Polyline::Project(const Pose2& pose) const {
  PathProjection out;
  if (points_.size() < 2) return out;
  const Vec2 p = pose.position();
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2& a = points_[i];
    const Vec2 ab = points_[i + 1] - a;
    const double len2 = ab.Dot(ab);
    if (len2 <= 0.0) continue;
    const double t = std::clamp((p - a).Dot(ab) / len2, 0.0, 1.0);
    const Vec2 q = a + ab * t;
    const double d = Distance(p, q);
    if (d < best) {
      best = d;
      const double len = std::sqrt(len2);
      const Vec2 dir = ab * (1.0 / len);
      const double seg_heading = std::atan2(ab.y, ab.x);
      out.arclength = arclengths_[i] + t * len;
      out.lateral_offset = dir.Cross(p - a);
      // Past either end, the lateral offset stays the perpendicular component.
      out.heading_error = NormalizeAngle(pose.heading - seg_heading);
    }
  }
  return out;
}

Polyline Polyline::Resample(double ds) const {
  if (points_.size() < 2 || ds <= 0.0) return *this;
  std::vector<Vec2> out;
  const double length = Length();
  const auto n = static_cast<size_t>(std::floor(length / ds));
  out.reserve(n + 2);
  for (size_t k = 0; k <= n; ++k) {
    out.push_back(Interpolate(static_cast<double>(k) * ds).position());
  }
  if (length - static_cast<double>(n) * ds > 1e-9) {
    out.push_back(points_.back());
  }
  if (out.size() < 2) out.push_back(points_.back());
  return Polyline(std::move(out));
}

Polyline Polyline::Slice(double s_begin, double s_end) const {
  if (points_.size() < 2) return *this;
  s_begin = std::clamp(s_begin, 0.0, Length());
  s_end = std::clamp(s_end, s_begin, Length());
  std::vector<Vec2> out;
  out.push_back(Interpolate(s_begin).position());
  for (size_t i = 0; i < points_.size(); ++i) {
    if (arclengths_[i] > s_begin && arclengths_[i] < s_end) {
      out.push_back(points_[i]);
    }
  }
  out.push_back(Interpolate(s_end).position());
  return Polyline(std::move(out));
}

Polyline Polyline::Reversed() const {
  std::vector<Vec2> out(points_.rbegin(), points_.rend());
  return Polyline(std::move(out));
}

}  // namespace radstack
