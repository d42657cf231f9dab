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

#ifndef RADSTACK_PLANHEAD_H_
#define RADSTACK_PLANHEAD_H_

// Learned plan head: a small perceptron encoder stands in for the plan-token
// hidden state. The classifier scores the trajectory vocabulary and an
// optional refiner adds per-waypoint offsets to the selected prototype. The
// refiner's last layer starts at zero, so before training it returns the
// prototype unchanged.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <stop_token>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "radstack/scene.h"
#include "radstack/topology.h"
#include "radstack/vocabulary.h"

namespace radstack {

inline constexpr int kFeatureDim = 64;
inline constexpr int kFeatureAgentSlots = 8;
inline constexpr int kFeatureAgentWidth = 6;
inline constexpr int kFeatureAgentOffset = kFeatureDim - kFeatureAgentSlots * kFeatureAgentWidth;
inline constexpr double kMaxRefineOffset = 2.0;  // m per coordinate

using SceneFeatures = Eigen::VectorXd;

// Ego-frame scene summary of fixed length kFeatureDim.
SceneFeatures ExtractFeatures(const EgoState& ego, const std::vector<AgentState>& agents,
                              const ProposalPath& path, const Pose2& goal);

// Row-major (x0, y0, x1, y1, ...) flattening of T waypoints.
Eigen::VectorXd Flatten(const Waypoints& w);
Waypoints Unflatten(const Eigen::VectorXd& v);

// y_k proportional to exp(-||v_k - v*||^2 / temperature).
Eigen::VectorXd SoftTargets(const Waypoints& expert, const Vocabulary& vocab,
                            double temperature = 1.0);

// log-sum-exp(s) - <y, s>.
double PlanLoss(const Eigen::VectorXd& logits, const Eigen::VectorXd& targets);
// d PlanLoss / d logits = softmax(s) - y.
Eigen::VectorXd PlanLossGradient(const Eigen::VectorXd& logits,
                                 const Eigen::VectorXd& targets);
Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);

// Mean over waypoints of the Euclidean (unsquared) error.
double RefineLoss(const Waypoints& refined, const Waypoints& expert);

struct TrainingSample {
  SceneFeatures features;
  Waypoints expert;
};

class PlanHeadModel {
 public:
  PlanHeadModel() = default;
  PlanHeadModel(int feature_dim, int hidden_dim, Vocabulary vocab, std::uint64_t seed);

  int feature_dim() const { return feature_dim_; }
  int hidden_dim() const { return hidden_dim_; }
  int vocab_size() const { return vocab_.size(); }
  int horizon_steps() const { return vocab_.horizon_steps; }
  const Vocabulary& vocabulary() const { return vocab_; }
  double temperature() const { return temperature_; }
  void set_temperature(double t) { temperature_ = t; }

  struct Classification {
    Eigen::VectorXd hidden;  // encoder output
    Eigen::VectorXd logits;
    int best_index = 0;
    Waypoints coarse;
  };

  // One encoder + classifier pass.
  Classification Classify(const SceneFeatures& features) const;
  // Per-waypoint offsets for `coarse` given the encoder output, clamped to
  // +-kMaxRefineOffset.
  Eigen::VectorXd RefineOffsets(const Eigen::VectorXd& hidden,
                                const Waypoints& coarse) const;
  Waypoints Refine(const Eigen::VectorXd& hidden, const Waypoints& coarse) const;

  // Mean L_plan + L_refine over `samples`, optionally with gradients in the
  // same layout as Parameters().
  double Loss(const std::vector<TrainingSample>& samples,
              std::vector<Eigen::MatrixXd>* gradients) const;

  std::vector<Eigen::MatrixXd*> Parameters();
  std::vector<const Eigen::MatrixXd*> Parameters() const;

  void Save(const std::filesystem::path& path) const;
  static PlanHeadModel Load(const std::filesystem::path& path);

  bool operator==(const PlanHeadModel& o) const;

 private:
  int feature_dim_ = 0;
  int hidden_dim_ = 0;
  double temperature_ = 1.0;
  Vocabulary vocab_;
  Eigen::MatrixXd prototypes_;  // K x 2T
  // Encoder.
  Eigen::MatrixXd w1_, b1_, w2_, b2_;
  // Classifier.
  Eigen::MatrixXd wc_, bc_;
  // Refiner; r2 starts at zero.
  Eigen::MatrixXd r1_, rb1_, r2_, rb2_;
};

struct TrainOptions {
  int epochs = 200;
  double lr = 1e-2;
  std::uint64_t seed = 0;
  // Optional wall-clock budget; 0 disables.
  double time_budget_s = 0.0;
};

struct TrainResult {
  std::vector<double> loss_curve;  // loss before each epoch's update
};

// Full-batch gradient descent. Throws DivergenceError on a non-finite loss.
TrainResult Train(PlanHeadModel& model, const std::vector<TrainingSample>& samples,
                  const TrainOptions& options);

enum class AnytimeBudget { kClassifyOnly, kClassifyAndRefine };

struct StageTiming {
  std::string stage;
  std::chrono::nanoseconds elapsed{0};
};

struct AnytimeResult {
  Waypoints waypoints;  // ego frame
  Trajectory trajectory;  // world frame, tag learned
  int best_index = 0;
  bool refined = false;
  std::vector<StageTiming> timings;
};

// Always returns a complete plan: a stop request delivered after the
// classify stage yields the classify-only result. `after_classify` runs
// between the stages.
AnytimeResult PlanAnytime(const PlanHeadModel& model, const SceneFeatures& features,
                          AnytimeBudget budget, const EgoState& ego,
                          std::stop_token interrupt = {},
                          const std::function<void()>& after_classify = nullptr);

}  // namespace radstack

#endif  // RADSTACK_PLANHEAD_H_
