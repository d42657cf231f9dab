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
#include <limits>
#include <set>
#include <tuple>

#include "radstack/errors.h"

namespace radstack {

std::string_view ToString(PathSource source) {
  switch (source) {
    case PathSource::kEgoRoute:
      return "ego_route";
    case PathSource::kLeftAdjacent:
      return "left_adjacent";
    case PathSource::kRightAdjacent:
      return "right_adjacent";
    case PathSource::kOpposing:
      return "opposing";
  }
  return "ego_route";
}

namespace {

constexpr int kMaxLeaves = 64;

struct LaneHit {
  const Lane* lane = nullptr;
  double arclength = 0.0;
  double lateral = 0.0;
  double distance = 0.0;
  bool interior = false;
};

LaneHit HitLane(const Lane& lane, const Pose2& pose) {
  LaneHit hit;
  hit.lane = &lane;
  const PathProjection proj = lane.centerline.Project(pose);
  hit.arclength = proj.arclength;
  hit.lateral = proj.lateral_offset;
  hit.distance = Distance(pose.position(),
                          lane.centerline.Interpolate(proj.arclength).position());
  hit.interior = proj.arclength > 0.0 && proj.arclength < lane.centerline.Length();
  return hit;
}

bool InRoute(const Scenario& s, const std::string& id) {
  return std::find(s.route.begin(), s.route.end(), id) != s.route.end();
}

// Concatenates lanes starting at `start_s` on the first lane, cut at
// `max_length`, resampled with `ds`.
Polyline BuildCenterline(const Scenario& s, const std::vector<std::string>& lanes,
                         double start_s, double max_length, double ds) {
  std::vector<Vec2> pts;
  double budget = max_length;
  for (size_t i = 0; i < lanes.size() && budget > 0.0; ++i) {
    const Lane* lane = s.FindLane(lanes[i]);
    const double begin = i == 0 ? start_s : 0.0;
    const double end = std::min(lane->centerline.Length(), begin + budget);
    const Polyline piece = lane->centerline.Slice(begin, end);
    for (const Vec2& p : piece.points()) {
      if (!pts.empty() && Distance(pts.back(), p) < 1e-6) continue;
      pts.push_back(p);
    }
    budget -= end - begin;
  }
  if (pts.size() < 2) {
    // Degenerate: ego projected onto the very end of a dead-end lane.
    const Lane* lane = s.FindLane(lanes.front());
    const Pose2 at = lane->centerline.Interpolate(start_s);
    pts = {at.position(), at.ToWorld({1e-3, 0.0})};
  }
  return Polyline(std::move(pts)).Resample(ds);
}

void Enumerate(const Scenario& s, std::vector<std::string>& seq, double covered,
               double horizon, std::vector<std::pair<std::vector<std::string>, bool>>& out) {
  if (static_cast<int>(out.size()) >= kMaxLeaves) return;
  const Lane* lane = s.FindLane(seq.back());
  if (covered >= horizon || lane->successors.empty()) {
    out.emplace_back(seq, covered < horizon && lane->successors.empty());
    return;
  }
  std::vector<std::string> succ = lane->successors;
  std::sort(succ.begin(), succ.end());
  for (const std::string& next : succ) {
    if (std::find(seq.begin(), seq.end(), next) != seq.end()) continue;  // cycle
    const Lane* next_lane = s.FindLane(next);
    seq.push_back(next);
    Enumerate(s, seq, covered + next_lane->centerline.Length(), horizon, out);
    seq.pop_back();
  }
}

ProposalPath MakePath(const Scenario& s, std::vector<std::string> lanes, double start_s,
                      bool terminal, PathSource source, const TopologyConfig& cfg) {
  ProposalPath path;
  path.centerline = BuildCenterline(s, lanes, start_s, cfg.horizon_length, cfg.ds);
  path.speed_limit = s.FindLane(lanes.front())->speed_limit;
  path.lane_sequence = std::move(lanes);
  path.terminal = terminal;
  path.source = source;
  return path;
}

// Route-alignment rank: 0 = follows the route, 1 = starts on it then leaves,
// 2 = off-route root.
int RouteRank(const Scenario& s, const std::vector<std::string>& lanes) {
  if (!InRoute(s, lanes.front())) return 2;
  auto it = std::find(s.route.begin(), s.route.end(), lanes.front());
  for (const std::string& id : lanes) {
    if (it == s.route.end()) return 0;  // ran past the route end
    if (*it != id) return 1;
    ++it;
  }
  return 0;
}

}  // namespace

std::vector<ProposalPath> GraphSearch(const EgoState& ego, const Scenario& scenario,
                                      const TopologyConfig& config) {
  std::vector<LaneHit> candidates;
  for (const Lane& lane : scenario.lanes) {
    LaneHit hit = HitLane(lane, ego.pose);
    if (hit.distance <= config.localization_radius) candidates.push_back(hit);
  }
  if (candidates.empty()) {
    throw OffMapError("topology", "no lane within localization radius");
  }
  auto closer = [](const LaneHit& a, const LaneHit& b) {
    return std::make_tuple(!a.interior, a.distance, a.lane->id) <
           std::make_tuple(!b.interior, b.distance, b.lane->id);
  };
  std::vector<LaneHit> roots;
  const LaneHit* best_route = nullptr;
  for (const LaneHit& hit : candidates) {
    if (!InRoute(scenario, hit.lane->id)) continue;
    if (best_route == nullptr || closer(hit, *best_route)) best_route = &hit;
  }
  if (best_route != nullptr) roots.push_back(*best_route);
  for (const LaneHit& hit : candidates) {
    if (InRoute(scenario, hit.lane->id)) continue;
    if (hit.lane->direction != LaneDirection::kRouteAligned) continue;
    if (hit.interior && std::abs(hit.lateral) <= 0.5 * hit.lane->width) {
      roots.push_back(hit);
    }
  }
  if (roots.empty()) {
    roots.push_back(*std::min_element(candidates.begin(), candidates.end(), closer));
  }

  struct Ranked {
    int rank;
    double lateral;
    ProposalPath path;
  };
  std::vector<Ranked> ranked;
  for (const LaneHit& root : roots) {
    std::vector<std::pair<std::vector<std::string>, bool>> leaves;
    std::vector<std::string> seq = {root.lane->id};
    Enumerate(scenario, seq, root.lane->centerline.Length() - root.arclength,
              config.horizon_length, leaves);
    for (auto& [lanes, terminal] : leaves) {
      const int rank = RouteRank(scenario, lanes);
      ranked.push_back({rank, std::abs(root.lateral),
                        MakePath(scenario, std::move(lanes), root.arclength, terminal,
                                 PathSource::kEgoRoute, config)});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(a.rank, a.lateral, a.path.lane_sequence) <
           std::tie(b.rank, b.lateral, b.path.lane_sequence);
  });
  std::vector<ProposalPath> out;
  for (auto& r : ranked) {
    if (static_cast<int>(out.size()) >= config.max_paths) break;
    out.push_back(std::move(r.path));
  }
  return out;
}

std::vector<ProposalPath> AugmentWithAdjacents(std::vector<ProposalPath> paths,
                                               const Scenario& scenario,
                                               const EgoState& ego,
                                               const TopologyConfig& config) {
  if (!config.enable_adjacents && !config.enable_opposing) return paths;
  std::set<std::vector<std::string>> seen;
  for (const ProposalPath& p : paths) seen.insert(p.lane_sequence);
  std::vector<ProposalPath> added;
  const size_t n_input = paths.size();
  for (size_t i = 0; i < n_input; ++i) {
    const ProposalPath& parent = paths[i];
    if (parent.source != PathSource::kEgoRoute) continue;
    const Lane* root = scenario.FindLane(parent.lane_sequence.front());
    const std::pair<const std::optional<std::string>*, PathSource> sides[] = {
        {&root->left_adjacent, PathSource::kLeftAdjacent},
        {&root->right_adjacent, PathSource::kRightAdjacent}};
    for (const auto& [adj_id, side] : sides) {
      if (!adj_id->has_value()) continue;
      const Lane* adj = scenario.FindLane(**adj_id);
      const LaneHit hit = HitLane(*adj, ego.pose);
      if (adj->direction == LaneDirection::kRouteAligned) {
        if (!config.enable_adjacents) continue;
        // Greedy successor chain (lexicographically first) up to the horizon.
        std::vector<std::string> lanes = {adj->id};
        double covered = adj->centerline.Length() - hit.arclength;
        bool terminal = false;
        while (covered < config.horizon_length) {
          const Lane* last = scenario.FindLane(lanes.back());
          if (last->successors.empty()) {
            terminal = true;
            break;
          }
          const std::string next =
              *std::min_element(last->successors.begin(), last->successors.end());
          if (std::find(lanes.begin(), lanes.end(), next) != lanes.end()) break;
          lanes.push_back(next);
          covered += scenario.FindLane(next)->centerline.Length();
        }
        if (!seen.insert(lanes).second) continue;
        added.push_back(MakePath(scenario, std::move(lanes), hit.arclength, terminal,
                                 side, config));
      } else {
        if (!config.enable_opposing) continue;
        std::vector<std::string> lanes = {adj->id};
        lanes.insert(lanes.end(), parent.lane_sequence.begin(),
                     parent.lane_sequence.end());
        if (!seen.insert(lanes).second) continue;
        // Drive the opposing lane against its direction for bypass_length,
        // then splice back onto the parent path.
        const double back = std::min(config.bypass_length, hit.arclength);
        const Polyline bypass =
            adj->centerline.Slice(hit.arclength - back, hit.arclength).Reversed();
        std::vector<Vec2> pts = bypass.points();
        const Pose2 bypass_end(pts.back().x, pts.back().y, 0.0);
        const double rejoin =
            parent.centerline.Project(bypass_end).arclength + config.splice_length;
        const bool has_rest = rejoin < parent.centerline.Length();
        if (has_rest) {
          const Polyline rest =
              parent.centerline.Slice(rejoin, parent.centerline.Length());
          pts.insert(pts.end(), rest.points().begin(), rest.points().end());
        }
        ProposalPath path;
        path.centerline = Polyline(std::move(pts)).Resample(config.ds);
        path.lane_sequence = std::move(lanes);
        path.source = PathSource::kOpposing;
        path.terminal = has_rest ? parent.terminal : true;
        path.speed_limit = parent.speed_limit;
        added.push_back(std::move(path));
      }
    }
  }
  for (auto& p : added) paths.push_back(std::move(p));
  return paths;
}

PathProjection ProjectOntoPath(const ProposalPath& path, const Pose2& pose) {
  return path.centerline.Project(pose);
}

}  // namespace radstack
