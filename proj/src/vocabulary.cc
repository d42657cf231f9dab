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
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "radstack/errors.h"

namespace radstack {

namespace {
constexpr char kModule[] = "vocabulary";
constexpr char kMagic[] = "radstack-vocabulary v1";
}  // namespace

std::vector<Waypoints> SamplesFromHistory(const std::vector<EgoState>& history,
                                          int horizon_steps, int stride) {
  std::vector<Waypoints> out;
  const int n = static_cast<int>(history.size());
  for (int t = 0; t + horizon_steps < n; t += std::max(1, stride)) {
    const Pose2& origin = history[t].pose;
    Waypoints w;
    w.reserve(horizon_steps);
    for (int k = 1; k <= horizon_steps; ++k) {
      w.push_back(origin.ToLocal(history[t + k].pose.position()));
    }
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<Waypoints> CollectExpertTrajectories(const std::vector<Scenario>& scenarios,
                                                 const EpisodeRunner& policy, int count,
                                                 int horizon_steps, int stride) {
  std::vector<Waypoints> out;
  for (const Scenario& s : scenarios) {
    if (static_cast<int>(out.size()) >= count) break;
    for (Waypoints& w : SamplesFromHistory(policy(s), horizon_steps, stride)) {
      if (static_cast<int>(out.size()) >= count) break;
      out.push_back(std::move(w));
    }
  }
  return out;
}

double SquaredDistance(const Waypoints& a, const Waypoints& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double dx = a[i].x - b[i].x;
    const double dy = a[i].y - b[i].y;
    d += dx * dx + dy * dy;
  }
  return d;
}

namespace {

size_t Nearest(const Waypoints& sample, const std::vector<Waypoints>& centers,
               double* dist) {
  size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < centers.size(); ++c) {
    const double d = SquaredDistance(sample, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist != nullptr) *dist = best_d;
  return best;
}

// Index sampled proportionally to `weights`; falls back to the first
// positive-eligible index when all weights vanish.
size_t SampleIndex(const std::vector<double>& weights, const std::vector<bool>& taken,
                   std::mt19937_64& rng) {
  double total = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (!taken[i]) total += weights[i];
  }
  if (total <= 0.0) {
    for (size_t i = 0; i < taken.size(); ++i) {
      if (!taken[i]) return i;
    }
    return 0;
  }
  std::uniform_real_distribution<double> u(0.0, total);
  const double r = u(rng);
  double acc = 0.0;
  size_t last = 0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (taken[i] || weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (r < acc) return i;
  }
  return last;
}

}  // namespace

double ClusterSse(const std::vector<Waypoints>& samples, const Vocabulary& vocab) {
  double sse = 0.0;
  for (const Waypoints& s : samples) {
    double d = 0.0;
    Nearest(s, vocab.prototypes, &d);
    sse += d;
  }
  return sse;
}

ClusterResult KMeansCluster(const std::vector<Waypoints>& samples, int k, int max_iters,
                            std::uint64_t seed, double dt) {
  if (k < 1 || static_cast<int>(samples.size()) < k) {
    throw DegenerateClusterError(kModule, "need at least K samples and K >= 1");
  }
  const size_t n = samples.size();
  const size_t t_steps = samples.front().size();
  std::mt19937_64 rng(seed);

  // k-means++ seeding.
  std::vector<Waypoints> centers;
  std::vector<bool> taken(n, false);
  std::uniform_int_distribution<size_t> first(0, n - 1);
  size_t idx = first(rng);
  centers.push_back(samples[idx]);
  taken[idx] = true;
  std::vector<double> d2(n);
  for (size_t i = 0; i < n; ++i) d2[i] = SquaredDistance(samples[i], centers[0]);
  while (static_cast<int>(centers.size()) < k) {
    idx = SampleIndex(d2, taken, rng);
    centers.push_back(samples[idx]);
    taken[idx] = true;
    for (size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(samples[i], centers.back()));
    }
  }

  ClusterResult result;
  std::vector<size_t> assign(n, static_cast<size_t>(-1));
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    std::vector<double> dist(n);
    for (size_t i = 0; i < n; ++i) {
      const size_t c = Nearest(samples[i], centers, &dist[i]);
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    std::vector<size_t> counts(centers.size(), 0);
    for (size_t i = 0; i < n; ++i) ++counts[assign[i]];
    for (size_t c = 0; c < centers.size(); ++c) {
      if (counts[c] > 0) continue;
      // Re-seed with the sample farthest from its center among clusters that
      // can spare one.
      size_t far = n;
      double far_d = 0.0;
      for (size_t i = 0; i < n; ++i) {
        if (counts[assign[i]] > 1 && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far == n) {
        throw DegenerateClusterError(kModule, "empty cluster cannot be re-seeded");
      }
      --counts[assign[far]];
      assign[far] = c;
      counts[c] = 1;
      dist[far] = 0.0;
      changed = true;
    }
    // Mean update in fixed sample order.
    std::vector<Waypoints> sums(centers.size(), Waypoints(t_steps));
    for (size_t i = 0; i < n; ++i) {
      Waypoints& s = sums[assign[i]];
      for (size_t t = 0; t < t_steps; ++t) s[t] = s[t] + samples[i][t];
    }
    for (size_t c = 0; c < centers.size(); ++c) {
      const double inv = 1.0 / static_cast<double>(counts[c]);
      for (size_t t = 0; t < t_steps; ++t) centers[c][t] = sums[c][t] * inv;
    }
    double sse = 0.0;
    for (size_t i = 0; i < n; ++i) sse += SquaredDistance(samples[i], centers[assign[i]]);
    result.sse_history.push_back(sse);
    result.iterations = iter + 1;
    if (!changed) break;
  }
  result.vocabulary.horizon_steps = static_cast<int>(t_steps);
  result.vocabulary.dt = dt;
  result.vocabulary.prototypes = std::move(centers);
  return result;
}

Trajectory InstantiateVocabulary(const Waypoints& prototype, const EgoState& ego,
                                 double dt) {
  std::vector<Vec2> world;
  world.reserve(prototype.size() + 1);
  world.push_back(ego.pose.position());
  for (const Vec2& w : prototype) world.push_back(ego.pose.ToWorld(w));
  Trajectory traj = TrajectoryFromWaypoints(world, dt, ego.pose.heading, ego.speed,
                                            TrajectoryTag::kVocabulary);
  traj.samples[0].pose = ego.pose;
  return traj;
}

void AppendVocabularyProposals(const Vocabulary& vocab, const EgoState& ego,
                               ProposalSet& proposals) {
  for (int k = 0; k < vocab.size(); ++k) {
    Proposal p;
    p.trajectory = InstantiateVocabulary(vocab.prototypes[k], ego, vocab.dt);
    p.key = {TagRank(TrajectoryTag::kVocabulary), 0, 0, 0, k};
    proposals.push_back(std::move(p));
  }
}

void SaveVocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write " + path.string());
  char buf[64];
  out << kMagic << '\n';
  out << "K " << vocab.size() << '\n';
  out << "T " << vocab.horizon_steps << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", vocab.dt);
  out << "dt " << buf << '\n';
  for (const Waypoints& w : vocab.prototypes) {
    for (size_t t = 0; t < w.size(); ++t) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g", w[t].x, w[t].y);
      out << (t == 0 ? "" : " ") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError(kModule, "write failed for " + path.string());
}

Vocabulary LoadVocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ParseError(kModule, path.string() + ": missing vocabulary header");
  }
  auto read_field = [&](const std::string& key) {
    if (!std::getline(in, line)) {
      throw ParseError(kModule, path.string() + ": missing " + key);
    }
    std::istringstream ss(line);
    std::string name;
    double value = 0.0;
    if (!(ss >> name >> value) || name != key) {
      throw ParseError(kModule, path.string() + ": malformed " + key + " line");
    }
    return value;
  };
  const double k = read_field("K");
  const double t = read_field("T");
  Vocabulary vocab;
  vocab.dt = read_field("dt");
  if (k < 1 || t < 1 || k != std::floor(k) || t != std::floor(t) || !(vocab.dt > 0.0)) {
    throw ParseError(kModule, path.string() + ": invalid header values");
  }
  vocab.horizon_steps = static_cast<int>(t);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    Waypoints w;
    double x = 0.0;
    double y = 0.0;
    while (ss >> x >> y) w.push_back({x, y});
    if (!ss.eof() || static_cast<int>(w.size()) != vocab.horizon_steps) {
      throw ParseError(kModule, path.string() + ": row " +
                                    std::to_string(vocab.prototypes.size()) +
                                    " does not hold T waypoints");
    }
    vocab.prototypes.push_back(std::move(w));
  }
  if (vocab.size() != static_cast<int>(k)) {
    throw ParseError(kModule, path.string() + ": header K does not match row count");
  }
  return vocab;
}

}  // namespace radstack
