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

#include "radstack/config.h"

#include <cstdlib>
#include <fstream>
#include <set>
#include <string_view>
#include <vector>

#include "radstack/errors.h"

namespace radstack {

namespace {

constexpr char kModule[] = "config";

using nlohmann::json;
using nlohmann::ordered_json;

template <typename E>
struct EnumNames {
  std::vector<std::pair<E, const char*>> names;

  const char* Name(E e) const {
    for (const auto& [v, n] : names) {
      if (v == e) return n;
    }
    return names.front().second;
  }
  std::optional<E> Parse(std::string_view s) const {
    for (const auto& [v, n] : names) {
      if (s == n) return v;
    }
    return std::nullopt;
  }
};

const EnumNames<PlannerKind> kPlannerNames{{{PlannerKind::kRad, "rad"},
                                            {PlannerKind::kPlanHead, "planhead"},
                                            {PlannerKind::kHybrid, "hybrid"},
                                            {PlannerKind::kBaselineStatic, "baseline_static"}}};
const EnumNames<ScorerKind> kScorerNames{{{ScorerKind::kRad, "rad"}, {ScorerKind::kPdm, "pdm"}}};
const EnumNames<AnytimeBudget> kBudgetNames{
    {{AnytimeBudget::kClassifyAndRefine, "classify_and_refine"},
     {AnytimeBudget::kClassifyOnly, "classify_only"}}};
const EnumNames<AgentPolicy> kPolicyNames{
    {{AgentPolicy::kReactiveIdm, "reactive_idm"}, {AgentPolicy::kReplay, "replay"}}};

// Serializes visited fields into an ordered object.
class Writer {
 public:
  explicit Writer(ordered_json* out) : out_(out) {}

  template <typename T>
  void Field(const char* key, T& value) {
    (*out_)[key] = value;
  }
  void Field(const char* key, std::optional<std::string>& value) {
    (*out_)[key] = value ? ordered_json(*value) : ordered_json();
  }
  void Field(const char* key, std::vector<Disturbance>& value) {
    ordered_json arr = ordered_json::array();
    for (const Disturbance& d : value) arr.push_back({{"tick", d.tick}, {"lateral", d.lateral}});
    (*out_)[key] = arr;
  }
  template <typename E>
  void Enum(const char* key, E& value, const EnumNames<E>& names) {
    (*out_)[key] = names.Name(value);
  }
  template <typename F>
  void Object(const char* key, F&& body) {
    ordered_json child = ordered_json::object();
    Writer w(&child);
    body(w);
    (*out_)[key] = std::move(child);
  }

 private:
  ordered_json* out_;
};

// Applies visited fields from a JSON object and rejects unknown keys.
class Reader {
 public:
  Reader(const json* in, std::string path) : in_(in), path_(std::move(path)) {
    if (!in_->is_object()) throw ConfigError(kModule, path_ + " must be an object");
  }

  template <typename T>
  void Field(const char* key, T& value) {
    const json* v = Find(key);
    if (v == nullptr) return;
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v->is_boolean()) throw std::invalid_argument("boolean");
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v->is_number()) throw std::invalid_argument("number");
        if constexpr (std::is_integral_v<T>) {
          if (!v->is_number_integer()) throw std::invalid_argument("integer");
        }
      }
      value = v->get<T>();
    } catch (const std::exception&) {
      throw ConfigError(kModule, path_ + "." + key + " has the wrong type");
    }
  }
  void Field(const char* key, std::optional<std::string>& value) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (v->is_null()) {
      value.reset();
    } else if (v->is_string()) {
      value = v->get<std::string>();
    } else {
      throw ConfigError(kModule, path_ + "." + key + " must be a string or null");
    }
  }
  void Field(const char* key, std::vector<Disturbance>& value) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_array()) throw ConfigError(kModule, path_ + "." + key + " must be an array");
    value.clear();
    for (size_t i = 0; i < v->size(); ++i) {
      Disturbance d;
      Reader r(&(*v)[i], path_ + "." + key + "[" + std::to_string(i) + "]");
      r.Field("tick", d.tick);
      r.Field("lateral", d.lateral);
      r.Finish();
      value.push_back(d);
    }
  }
  template <typename E>
  void Enum(const char* key, E& value, const EnumNames<E>& names) {
    const json* v = Find(key);
    if (v == nullptr) return;
    std::optional<E> parsed;
    if (v->is_string()) parsed = names.Parse(v->get<std::string>());
    if (!parsed) throw ConfigError(kModule, path_ + "." + key + " has an unknown value");
    value = *parsed;
  }
  template <typename F>
  void Object(const char* key, F&& body) {
    const json* v = Find(key);
    if (v == nullptr) return;
    Reader r(v, path_ + "." + key);
    body(r);
    r.Finish();
  }
  void Finish() const {
    for (const auto& [key, unused] : in_->items()) {
      if (!seen_.count(key)) throw ConfigError(kModule, "unknown key " + path_ + "." + key);
    }
  }

 private:
  const json* Find(const char* key) {
    seen_.insert(key);
    const auto it = in_->find(key);
    return it == in_->end() ? nullptr : &*it;
  }

  const json* in_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename V>
void Visit(V& v, RunConfig& c) {
  v.Object("planner", [&](V& p) {
    p.Enum("kind", c.planner.kind, kPlannerNames);
    p.Object("toggles", [&](V& t) {
      PlannerToggles& tg = c.planner.toggles;
      t.Field("replan", tg.replan);
      t.Field("vocab", tg.vocab);
      t.Field("adjacents", tg.adjacents);
      t.Field("opposing", tg.opposing);
      t.Field("goal", tg.goal);
      t.Field("relaxation", tg.relaxation);
    });
    p.Field("learned_offsets", c.planner.learned_offsets);
    p.Enum("budget", c.planner.budget, kBudgetNames);
  });
  v.Object("topology", [&](V& t) {
    TopologyConfig& tc = c.planner.topology;
    t.Field("localization_radius", tc.localization_radius);
    t.Field("max_paths", tc.max_paths);
    t.Field("horizon_length", tc.horizon_length);
    t.Field("ds", tc.ds);
    t.Field("snap_radius", tc.snap_radius);
    t.Field("bypass_length", tc.bypass_length);
    t.Field("splice_length", tc.splice_length);
  });
  v.Object("proposals", [&](V& p) {
    ProposalConfig& pc = c.planner.proposals;
    p.Field("offsets", pc.offsets);
    p.Field("speed_fractions", pc.speed_fractions);
    p.Field("corridor_half_width", pc.corridor_half_width);
    p.Field("max_lateral_rate", pc.max_lateral_rate);
    p.Field("lateral_rate_per_speed", pc.lateral_rate_per_speed);
    p.Field("max_offset", pc.max_offset);
    p.Field("static_stop_margin", pc.static_stop_margin);
  });
  v.Object("idm", [&](V& i) {
    IdmParams& ip = c.planner.idm;
    i.Field("time_headway", ip.time_headway);
    i.Field("s0", ip.s0);
    i.Field("a_max", ip.a_max);
    i.Field("b_comf", ip.b_comf);
    i.Field("delta", ip.delta);
  });
  v.Object("scoring", [&](V& s) {
    ScoringConfig& sc = c.planner.scoring;
    s.Enum("kind", sc.kind, kScorerNames);
    s.Object("weights", [&](V& w) {
      w.Field("ttc", sc.weights.ttc);
      w.Field("dr", sc.weights.dr);
      w.Field("sp", sc.weights.sp);
      w.Field("ep", sc.weights.ep);
      w.Field("cf", sc.weights.cf);
      w.Field("goal", sc.weights.goal);
    });
    s.Object("comfort", [&](V& cb) {
      cb.Field("max_lon_accel", sc.comfort.max_lon_accel);
      cb.Field("max_lon_decel", sc.comfort.max_lon_decel);
      cb.Field("max_lat_accel", sc.comfort.max_lat_accel);
      cb.Field("max_jerk", sc.comfort.max_jerk);
      cb.Field("max_yaw_rate", sc.comfort.max_yaw_rate);
      cb.Field("max_yaw_accel", sc.comfort.max_yaw_accel);
    });
    s.Object("relaxation", [&](V& r) {
      r.Field("stop_speed", sc.relaxation.stop_speed);
      r.Field("t_block", sc.relaxation.t_block);
      r.Field("d_block", sc.relaxation.d_block);
      r.Field("corridor_half_width", sc.relaxation.corridor_half_width);
    });
    s.Field("min_progress", sc.min_progress);
    s.Field("ttc_window", sc.ttc_window);
    s.Field("speed_tolerance", sc.speed_tolerance);
    s.Field("direction_tolerance", sc.direction_tolerance);
    s.Field("relax_floor", sc.relax_floor);
  });
  v.Object("sim", [&](V& s) {
    SimConfig& sc = c.sim;
    s.Field("dt", sc.dt);
    s.Field("planner_period", sc.planner_period);
    s.Field("horizon", sc.horizon);
    s.Enum("agent_policy", sc.agent_policy, kPolicyNames);
    s.Field("disturbances", sc.disturbances);
    s.Field("seed", sc.seed);
    s.Field("goal_radius", sc.goal_radius);
    s.Field("deadlock_window", sc.deadlock_window);
    s.Field("deadlock_distance", sc.deadlock_distance);
    s.Field("log_all_breakdowns", sc.log_all_breakdowns);
    s.Field("log_path_starts", sc.log_path_starts);
    s.Object("lqr", [&](V& l) {
      LqrConfig& lc = sc.lqr;
      l.Field("q_cross_track", lc.q_cross_track);
      l.Field("q_heading", lc.q_heading);
      l.Field("r_steer", lc.r_steer);
      l.Field("riccati_iterations", lc.riccati_iterations);
      l.Field("k_v", lc.k_v);
      l.Field("lookahead", lc.lookahead);
      l.Field("min_speed", lc.min_speed);
      l.Field("low_speed_gain_speed", lc.low_speed_gain_speed);
      l.Field("max_accel", lc.limits.max_accel);
      l.Field("max_decel", lc.limits.max_decel);
      l.Field("max_steer", lc.limits.max_steer);
    });
  });
  v.Field("model_path", c.model_path);
  v.Field("vocab_path", c.vocab_path);
}

}  // namespace

ordered_json ConfigToJson(const RunConfig& config) {
  RunConfig copy = config;
  ordered_json out = ordered_json::object();
  Writer w(&out);
  Visit(w, copy);
  return out;
}

RunConfig ConfigFromJson(const json& j) {
  RunConfig config;
  Reader r(&j, "$");
  Visit(r, config);
  r.Finish();
  ValidateSimConfig(config.sim);
  return config;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(kModule, path.string() + ": " + e.what());
  }
  return ConfigFromJson(j);
}

std::uint64_t SeedFromEnv(std::uint64_t fallback) {
  const char* env = std::getenv("RADSTACK_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') return fallback;
  return static_cast<std::uint64_t>(v);
}

}  // namespace radstack
