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

#include "radstack/render.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

namespace radstack {

namespace {

constexpr double kScale = 6.0;   // px per m
constexpr double kMargin = 10.0;  // m

class Canvas {
 public:
  Canvas(double min_x, double min_y, double max_x, double max_y)
      : min_x_(min_x), max_y_(max_y),
        width_((max_x - min_x) * kScale), height_((max_y - min_y) * kScale) {}

  double X(double x) const { return (x - min_x_) * kScale; }
  double Y(double y) const { return (max_y_ - y) * kScale; }
  double width() const { return width_; }
  double height() const { return height_; }

  std::string Points(const std::vector<Vec2>& pts) const {
    std::string s;
    char buf[64];
    for (const Vec2& p : pts) {
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", X(p.x), Y(p.y));
      s += buf;
    }
    if (!s.empty()) s.pop_back();
    return s;
  }

 private:
  double min_x_;
  double max_y_;
  double width_;
  double height_;
};

std::vector<Vec2> Corners(const std::array<Vec2, 4>& c) { return {c.begin(), c.end()}; }

}  // namespace

const char* TagColor(TrajectoryTag tag) {
  switch (tag) {
    case TrajectoryTag::kIdm:
      return "#1f77b4";
    case TrajectoryTag::kVocabulary:
      return "#2ca02c";
    case TrajectoryTag::kLearned:
      return "#d62728";
    case TrajectoryTag::kLearnedOffset:
      return "#ff7f0e";
    case TrajectoryTag::kReplay:
      return "#7f7f7f";
  }
  return "#000000";
}

std::string RenderEpisodeSvg(const EpisodeLog& log) {
  const Scenario& s = log.scenario;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  auto grow = [&](const Vec2& p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  };
  for (const Polygon& poly : s.drivable_area) {
    for (const Vec2& p : poly) grow(p);
  }
  for (const Lane& lane : s.lanes) {
    for (const Vec2& p : lane.centerline.points()) grow(p);
  }
  grow(s.ego.pose.position());
  grow(s.goal.position());
  for (const TickRecord& t : log.ticks) grow(t.ego.pose.position());
  const Canvas c(min_x - kMargin, min_y - kMargin, max_x + kMargin, max_y + kMargin);

  std::ostringstream out;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n"
                "<rect width=\"100%%\" height=\"100%%\" fill=\"#ffffff\"/>\n",
                c.width(), c.height());
  out << buf;
  for (const Polygon& poly : s.drivable_area) {
    out << "<polygon class=\"drivable\" points=\"" << c.Points(poly)
        << "\" fill=\"#e6e6e6\" stroke=\"none\"/>\n";
  }
  for (const Polygon& poly : s.crosswalks) {
    out << "<polygon class=\"crosswalk\" points=\"" << c.Points(poly)
        << "\" fill=\"#f5f0c8\" stroke=\"none\"/>\n";
  }
  for (const Lane& lane : s.lanes) {
    out << "<polyline class=\"lane\" data-lane=\"" << lane.id << "\" points=\""
        << c.Points(lane.centerline.points())
        << "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";
  }
  const std::vector<AgentState>& agents =
      log.ticks.empty() ? s.agents : log.ticks.front().agents;
  for (const AgentState& a : agents) {
    out << "<polygon class=\"agent\" data-agent=\"" << a.id << "\" points=\""
        << c.Points(Corners(AgentFootprint(a))) << "\" fill=\"#555555\"/>\n";
  }
  for (size_t i = 1; i < log.ticks.size(); ++i) {
    const Vec2 a = log.ticks[i - 1].ego.pose.position();
    const Vec2 b = log.ticks[i].ego.pose.position();
    std::snprintf(buf, sizeof(buf),
                  "<line class=\"trace\" data-tag=\"%s\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" "
                  "y2=\"%.2f\" stroke=\"%s\" stroke-width=\"2\"/>\n",
                  std::string(ToString(log.ticks[i - 1].tag)).c_str(), c.X(a.x), c.Y(a.y),
                  c.X(b.x), c.Y(b.y), TagColor(log.ticks[i - 1].tag));
    out << buf;
  }
  for (size_t i = 0; i < log.ticks.size(); i += 20) {
    out << "<polygon class=\"ego\" points=\""
        << c.Points(Corners(AgentFootprint(log.ticks[i].ego)))
        << "\" fill=\"none\" stroke=\"" << TagColor(log.ticks[i].tag) << "\"/>\n";
  }
  std::snprintf(buf, sizeof(buf),
                "<circle class=\"goal\" cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"none\" "
                "stroke=\"#9467bd\" stroke-width=\"2\"/>\n",
                c.X(s.goal.x), c.Y(s.goal.y), 3.0 * kScale);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"8\" y=\"16\" font-family=\"sans-serif\" font-size=\"12\">%s %s: "
                "%s</text>\n",
                log.scenario_name.c_str(), std::string(ToString(log.planner)).c_str(),
                log.outcome.c_str());
  out << buf;
  out << "</svg>\n";
  return out.str();
}

}  // namespace radstack
