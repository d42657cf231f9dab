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

#include "radstack/planhead.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "radstack/errors.h"

namespace radstack {

namespace {
constexpr char kModule[] = "planhead";
constexpr char kMagic[] = "radstack-planhead v1";
}  // namespace

// ---------------------------------------------------------------------------
// Features

SceneFeatures ExtractFeatures(const EgoState& ego, const std::vector<AgentState>& agents,
                              const ProposalPath& path, const Pose2& goal) {
  SceneFeatures f = SceneFeatures::Zero(kFeatureDim);
  f[0] = ego.speed / 15.0;
  f[1] = ego.accel / 3.0;
  f[2] = ego.steering / 0.6;

  const PathProjection proj = path.centerline.Project(ego.pose);
  f[3] = proj.lateral_offset / 5.0;
  f[4] = proj.heading_error / kPi;
  double prev_heading = path.centerline.Interpolate(proj.arclength).heading;
  double curvature_sum = 0.0;
  double curvature_max = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double ds = 10.0;
    const Pose2 at = path.centerline.Interpolate(proj.arclength + ds * (i + 1));
    const Vec2 local = ego.pose.ToLocal(at.position());
    f[5 + 2 * i] = local.x / 50.0;
    f[6 + 2 * i] = local.y / 50.0;
    const double kappa = NormalizeAngle(at.heading - prev_heading) / ds;
    curvature_sum += kappa;
    curvature_max = std::max(curvature_max, std::abs(kappa));
    prev_heading = at.heading;
  }
  f[11] = curvature_sum / 3.0 * 10.0;
  f[12] = curvature_max * 10.0;

  const Vec2 goal_local = ego.pose.ToLocal(goal.position());
  f[13] = goal_local.x / 100.0;
  f[14] = goal_local.y / 100.0;
  f[15] = goal_local.Norm() / 100.0;

  // Nearest agents first; ties by id for determinism.
  std::vector<const AgentState*> sorted;
  for (const AgentState& a : agents) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(), [&](const AgentState* a, const AgentState* b) {
    const double da = Distance(a->pose.position(), ego.pose.position());
    const double db = Distance(b->pose.position(), ego.pose.position());
    return da != db ? da < db : a->id < b->id;
  });
  const size_t n = std::min<size_t>(sorted.size(), kFeatureAgentSlots);
  for (size_t i = 0; i < n; ++i) {
    const AgentState& a = *sorted[i];
    const int base = kFeatureAgentOffset + static_cast<int>(i) * kFeatureAgentWidth;
    const Vec2 local = ego.pose.ToLocal(a.pose.position());
    const double rel_heading = NormalizeAngle(a.pose.heading - ego.pose.heading);
    const double v = a.kind == AgentKind::kStatic ? 0.0 : a.speed;
    f[base + 0] = local.x / 50.0;
    f[base + 1] = local.y / 50.0;
    f[base + 2] = std::cos(rel_heading);
    f[base + 3] = std::sin(rel_heading);
    f[base + 4] = (v * std::cos(rel_heading) - ego.speed) / 15.0;
    f[base + 5] = v * std::sin(rel_heading) / 15.0;
  }
  return f;
}

Eigen::VectorXd Flatten(const Waypoints& w) {
  Eigen::VectorXd v(2 * w.size());
  for (size_t t = 0; t < w.size(); ++t) {
    v[2 * t] = w[t].x;
    v[2 * t + 1] = w[t].y;
  }
  return v;
}

Waypoints Unflatten(const Eigen::VectorXd& v) {
  Waypoints w(v.size() / 2);
  for (size_t t = 0; t < w.size(); ++t) w[t] = {v[2 * t], v[2 * t + 1]};
  return w;
}

// ---------------------------------------------------------------------------
// Losses

Eigen::VectorXd SoftTargets(const Waypoints& expert, const Vocabulary& vocab,
                            double temperature) {
  const int k = vocab.size();
  Eigen::VectorXd neg(k);
  for (int i = 0; i < k; ++i) {
    neg[i] = -SquaredDistance(vocab.prototypes[i], expert) / temperature;
  }
  return Softmax(neg);
}

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  const double m = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - m).exp().matrix();
  return e / e.sum();
}

double PlanLoss(const Eigen::VectorXd& logits, const Eigen::VectorXd& targets) {
  const double m = logits.maxCoeff();
  const double lse = m + std::log((logits.array() - m).exp().sum());
  return lse - targets.dot(logits);
}

Eigen::VectorXd PlanLossGradient(const Eigen::VectorXd& logits,
                                 const Eigen::VectorXd& targets) {
  return Softmax(logits) - targets;
}

double RefineLoss(const Waypoints& refined, const Waypoints& expert) {
  double sum = 0.0;
  for (size_t t = 0; t < refined.size(); ++t) {
    sum += std::hypot(refined[t].x - expert[t].x, refined[t].y - expert[t].y);
  }
  return sum / static_cast<double>(refined.size());
}

// ---------------------------------------------------------------------------
// Model

namespace {

Eigen::MatrixXd Glorot(int rows, int cols, std::mt19937_64& rng) {
  const double a = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> u(-a, a);
  Eigen::MatrixXd m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = u(rng);
  }
  return m;
}

Eigen::VectorXd Tanh(const Eigen::VectorXd& x) { return x.array().tanh().matrix(); }

}  // namespace

PlanHeadModel::PlanHeadModel(int feature_dim, int hidden_dim, Vocabulary vocab,
                             std::uint64_t seed)
    : feature_dim_(feature_dim), hidden_dim_(hidden_dim), vocab_(std::move(vocab)) {
  const int k = vocab_.size();
  const int two_t = 2 * vocab_.horizon_steps;
  prototypes_.resize(k, two_t);
  for (int i = 0; i < k; ++i) prototypes_.row(i) = Flatten(vocab_.prototypes[i]).transpose();
  std::mt19937_64 rng(seed);
  w1_ = Glorot(hidden_dim, feature_dim, rng);
  b1_ = Eigen::MatrixXd::Zero(hidden_dim, 1);
  w2_ = Glorot(hidden_dim, hidden_dim, rng);
  b2_ = Eigen::MatrixXd::Zero(hidden_dim, 1);
  wc_ = Glorot(k, hidden_dim, rng);
  bc_ = Eigen::MatrixXd::Zero(k, 1);
  r1_ = Glorot(hidden_dim, hidden_dim + two_t, rng);
  rb1_ = Eigen::MatrixXd::Zero(hidden_dim, 1);
  r2_ = Eigen::MatrixXd::Zero(two_t, hidden_dim);
  rb2_ = Eigen::MatrixXd::Zero(two_t, 1);
}

PlanHeadModel::Classification PlanHeadModel::Classify(const SceneFeatures& features) const {
  Classification out;
  const Eigen::VectorXd h1 = Tanh(w1_ * features + b1_);
  out.hidden = Tanh(w2_ * h1 + b2_);
  out.logits = wc_ * out.hidden + bc_;
  Eigen::Index best = 0;
  out.logits.maxCoeff(&best);
  out.best_index = static_cast<int>(best);
  out.coarse = vocab_.prototypes[best];
  return out;
}

Eigen::VectorXd PlanHeadModel::RefineOffsets(const Eigen::VectorXd& hidden,
                                             const Waypoints& coarse) const {
  Eigen::VectorXd z(hidden.size() + 2 * static_cast<Eigen::Index>(coarse.size()));
  z << hidden, Flatten(coarse);
  const Eigen::VectorXd u = Tanh(r1_ * z + rb1_);
  Eigen::VectorXd raw = r2_ * u + rb2_;
  return raw.cwiseMax(-kMaxRefineOffset).cwiseMin(kMaxRefineOffset);
}

Waypoints PlanHeadModel::Refine(const Eigen::VectorXd& hidden,
                                const Waypoints& coarse) const {
  return Unflatten(Flatten(coarse) + RefineOffsets(hidden, coarse));
}

std::vector<Eigen::MatrixXd*> PlanHeadModel::Parameters() {
  return {&w1_, &b1_, &w2_, &b2_, &wc_, &bc_, &r1_, &rb1_, &r2_, &rb2_};
}

std::vector<const Eigen::MatrixXd*> PlanHeadModel::Parameters() const {
  return {&w1_, &b1_, &w2_, &b2_, &wc_, &bc_, &r1_, &rb1_, &r2_, &rb2_};
}

double PlanHeadModel::Loss(const std::vector<TrainingSample>& samples,
                           std::vector<Eigen::MatrixXd>* gradients) const {
  const auto params = Parameters();
  if (gradients != nullptr) {
    gradients->clear();
    for (const Eigen::MatrixXd* p : params) {
      gradients->push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    }
  }
  const int two_t = 2 * vocab_.horizon_steps;
  const double t_steps = vocab_.horizon_steps;
  double total = 0.0;
  for (const TrainingSample& sample : samples) {
    const Eigen::VectorXd& x = sample.features;
    const Eigen::VectorXd h1 = Tanh(w1_ * x + b1_);
    const Eigen::VectorXd h = Tanh(w2_ * h1 + b2_);
    const Eigen::VectorXd s = wc_ * h + bc_;
    const Eigen::VectorXd y = SoftTargets(sample.expert, vocab_, temperature_);
    const double plan_loss = PlanLoss(s, y);

    Eigen::Index best = 0;
    s.maxCoeff(&best);
    const Eigen::VectorXd coarse = prototypes_.row(best).transpose();
    Eigen::VectorXd z(h.size() + two_t);
    z << h, coarse;
    const Eigen::VectorXd u = Tanh(r1_ * z + rb1_);
    const Eigen::VectorXd raw = r2_ * u + rb2_;
    const Eigen::VectorXd offsets = raw.cwiseMax(-kMaxRefineOffset).cwiseMin(kMaxRefineOffset);
    const Eigen::VectorXd refined = coarse + offsets;
    const Eigen::VectorXd expert = Flatten(sample.expert);
    double refine_loss = 0.0;
    Eigen::VectorXd d_refined = Eigen::VectorXd::Zero(two_t);
    for (int t = 0; t < vocab_.horizon_steps; ++t) {
      const double ex = refined[2 * t] - expert[2 * t];
      const double ey = refined[2 * t + 1] - expert[2 * t + 1];
      const double norm = std::hypot(ex, ey);
      refine_loss += norm;
      if (norm > 0.0) {
        d_refined[2 * t] = ex / (norm * t_steps);
        d_refined[2 * t + 1] = ey / (norm * t_steps);
      }
    }
    refine_loss /= t_steps;
    total += plan_loss + refine_loss;
    if (gradients == nullptr) continue;

    auto& g = *gradients;
    // Refiner branch; the clamp passes gradient only inside its range.
    Eigen::VectorXd d_raw = d_refined;
    for (int i = 0; i < two_t; ++i) {
      if (std::abs(raw[i]) > kMaxRefineOffset) d_raw[i] = 0.0;
    }
    g[8] += d_raw * u.transpose();
    g[9] += d_raw;
    const Eigen::VectorXd d_u_pre =
        ((r2_.transpose() * d_raw).array() * (1.0 - u.array().square())).matrix();
    g[6] += d_u_pre * z.transpose();
    g[7] += d_u_pre;
    Eigen::VectorXd d_h = (r1_.transpose() * d_u_pre).head(h.size());

    // Classifier branch.
    const Eigen::VectorXd d_s = PlanLossGradient(s, y);
    g[4] += d_s * h.transpose();
    g[5] += d_s;
    d_h += wc_.transpose() * d_s;

    const Eigen::VectorXd d_h_pre = (d_h.array() * (1.0 - h.array().square())).matrix();
    g[2] += d_h_pre * h1.transpose();
    g[3] += d_h_pre;
    const Eigen::VectorXd d_h1_pre =
        ((w2_.transpose() * d_h_pre).array() * (1.0 - h1.array().square())).matrix();
    g[0] += d_h1_pre * x.transpose();
    g[1] += d_h1_pre;
  }
  const double n = std::max<size_t>(samples.size(), 1);
  if (gradients != nullptr) {
    for (Eigen::MatrixXd& g : *gradients) g /= n;
  }
  return total / n;
}

bool PlanHeadModel::operator==(const PlanHeadModel& o) const {
  if (feature_dim_ != o.feature_dim_ || hidden_dim_ != o.hidden_dim_ ||
      temperature_ != o.temperature_ || !(vocab_ == o.vocab_)) {
    return false;
  }
  const auto a = Parameters();
  const auto b = o.Parameters();
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i]->rows() != b[i]->rows() || a[i]->cols() != b[i]->cols() || *a[i] != *b[i]) {
      return false;
    }
  }
  return true;
}

void PlanHeadModel::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write " + path.string());
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  out << kMagic << '\n';
  out << "D " << feature_dim_ << " H " << hidden_dim_ << " K " << vocab_size() << " T "
      << horizon_steps() << '\n';
  out << "dt ";
  put(vocab_.dt);
  out << " temperature ";
  put(temperature_);
  out << '\n';
  for (const Eigen::MatrixXd* p : Parameters()) {
    for (Eigen::Index c = 0; c < p->cols(); ++c) {
      for (Eigen::Index r = 0; r < p->rows(); ++r) {
        put((*p)(r, c));
        out << '\n';
      }
    }
  }
  for (const Waypoints& w : vocab_.prototypes) {
    for (const Vec2& v : w) {
      put(v.x);
      out << ' ';
      put(v.y);
      out << '\n';
    }
  }
  if (!out) throw IoError(kModule, "write failed for " + path.string());
}

PlanHeadModel PlanHeadModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(kModule, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw ParseError(kModule, path.string() + ": missing checkpoint header");
  }
  std::string d_key, h_key, k_key, t_key, dt_key, temp_key;
  int d = 0, h = 0, k = 0, t = 0;
  double dt = 0.0, temperature = 0.0;
  if (!(in >> d_key >> d >> h_key >> h >> k_key >> k >> t_key >> t) || d_key != "D" ||
      h_key != "H" || k_key != "K" || t_key != "T" || d < 1 || h < 1 || k < 1 || t < 1) {
    throw ParseError(kModule, path.string() + ": malformed dimension line");
  }
  if (!(in >> dt_key >> dt >> temp_key >> temperature) || dt_key != "dt" ||
      temp_key != "temperature") {
    throw ParseError(kModule, path.string() + ": malformed dt/temperature line");
  }
  Vocabulary vocab;
  vocab.horizon_steps = t;
  vocab.dt = dt;
  vocab.prototypes.assign(k, Waypoints(t));
  PlanHeadModel model(d, h, vocab, 0);
  model.temperature_ = temperature;
  for (Eigen::MatrixXd* p : model.Parameters()) {
    for (Eigen::Index c = 0; c < p->cols(); ++c) {
      for (Eigen::Index r = 0; r < p->rows(); ++r) {
        if (!(in >> (*p)(r, c))) {
          throw ParseError(kModule, path.string() + ": truncated parameter list");
        }
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < t; ++j) {
      Vec2& v = vocab.prototypes[i][j];
      if (!(in >> v.x >> v.y)) {
        throw ParseError(kModule, path.string() + ": truncated vocabulary");
      }
    }
  }
  double extra = 0.0;
  if (in >> extra) throw ParseError(kModule, path.string() + ": trailing data");
  model.vocab_ = vocab;
  for (int i = 0; i < k; ++i) {
    model.prototypes_.row(i) = Flatten(vocab.prototypes[i]).transpose();
  }
  return model;
}

// ---------------------------------------------------------------------------
// Training

TrainResult Train(PlanHeadModel& model, const std::vector<TrainingSample>& samples,
                  const TrainOptions& options) {
  TrainResult result;
  const auto start = std::chrono::steady_clock::now();
  std::vector<Eigen::MatrixXd> grads;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const double loss = model.Loss(samples, &grads);
    if (!std::isfinite(loss)) {
      throw DivergenceError(kModule, "loss became non-finite at epoch " +
                                         std::to_string(epoch));
    }
    result.loss_curve.push_back(loss);
    auto params = model.Parameters();
    for (size_t i = 0; i < params.size(); ++i) *params[i] -= options.lr * grads[i];
    if (options.time_budget_s > 0.0) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      if (elapsed.count() >= options.time_budget_s) break;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Anytime inference

AnytimeResult PlanAnytime(const PlanHeadModel& model, const SceneFeatures& features,
                          AnytimeBudget budget, const EgoState& ego,
                          std::stop_token interrupt,
                          const std::function<void()>& after_classify) {
  using Clock = std::chrono::steady_clock;
  AnytimeResult result;
  auto t0 = Clock::now();
  PlanHeadModel::Classification cls = model.Classify(features);
  auto t1 = Clock::now();
  result.timings.push_back({"classify", t1 - t0});
  result.best_index = cls.best_index;
  result.waypoints = std::move(cls.coarse);
  if (after_classify) after_classify();
  if (budget == AnytimeBudget::kClassifyAndRefine && !interrupt.stop_requested()) {
    Waypoints refined = model.Refine(cls.hidden, result.waypoints);
    auto t2 = Clock::now();
    result.timings.push_back({"refine", t2 - t1});
    result.waypoints = std::move(refined);
    result.refined = true;
  }
  result.trajectory =
      InstantiateVocabulary(result.waypoints, ego, model.vocabulary().dt);
  result.trajectory.tag = TrajectoryTag::kLearned;
  return result;
}

}  // namespace radstack
