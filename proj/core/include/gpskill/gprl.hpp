// Copyright 2026 The gpskill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GPSKILL_GPRL_HPP_
#define GPSKILL_GPRL_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "gpskill/bc.hpp"
#include "gpskill/envs.hpp"
#include "gpskill/metrics.hpp"
#include "gpskill/nn.hpp"
#include "gpskill/skill.hpp"

namespace gpskill {

inline constexpr int kRlStateDim = 19;
inline constexpr int kRlStateSamples = 50;

struct RlState {
  Eigen::Vector3d d_o = Eigen::Vector3d::Zero();
  Eigen::Vector3d d_g = Eigen::Vector3d::Zero();
  double t_s = 0.0;  // decision time as a fraction of the duration
  Eigen::Matrix<double, 6, 1> v_bar = Eigen::Matrix<double, 6, 1>::Zero();
  Eigen::Matrix<double, 6, 1> a_bar = Eigen::Matrix<double, 6, 1>::Zero();
  Eigen::Matrix<double, kRlStateDim, 1> vector() const;
};

// v_bar and a_bar are per-axis means of the skill's first and second time
// derivatives at n_samples uniform times (positions then rotation vectors).
RlState build_rl_state(const Eigen::Vector3d& d_o, const Eigen::Vector3d& d_g, double t_s,
                       const SkillModel& skill, int n_samples = kRlStateSamples);
// Distances from the TC with the end effector at the start pose.
RlState build_rl_state(const TaskConfiguration& tc, const SkillModel& skill, double t_s = 0.0);

struct RewardWeights {
  double alpha = 1.0;  // similarity
  double beta = 0.5;   // spatial penalty
  double eta = 0.5;    // temporal penalty
};

struct RewardBreakdown {
  double r_tc = 0.0;
  double r_ss = 0.0;
  double r_sp = 0.0;
  double r_tp = 0.0;
  double total = 0.0;
  RewardWeights weights;
};

// total = r_tc + alpha r_ss - beta r_sp - eta r_tp.
double compose_reward(double r_tc, double r_ss, double r_sp, double r_tp, const RewardWeights& w);

// Position distance plus the rotation angle between the orientations.
double spatial_penalty(const Eigen::Vector3d& p_pi, const Eigen::Quaterniond& q_pi,
                       const Eigen::Vector3d& p_demo, const Eigen::Quaterniond& q_demo);

// T_demo minus the first sample time at which the path is closest to
// target. Times are measured from the first sample.
double temporal_penalty(const Eigen::VectorXd& times, const Matrix3Cols& positions,
                        const Eigen::Vector3d& target, double demo_duration);

// Caches the demonstration's velocity paths for similarity rewards.
class RewardModel {
 public:
  explicit RewardModel(const Environment& env, int n_samples = kDefaultMetricSamples);
  // Mean signature similarity of the linear and angular velocity paths.
  double similarity(const SkillModel& adapted) const;
  RewardBreakdown operator()(const EpisodeOutcome& outcome, const SkillModel& adapted,
                             const Trajectory& trajectory, const TaskConfiguration& tc,
                             const RewardWeights& weights) const;

 private:
  const Environment* env_;
  int n_samples_;
  Matrix3Cols demo_linear_;
  Matrix3Cols demo_angular_;
};

RewardBreakdown compute_reward(const Environment& env, const EpisodeOutcome& outcome,
                               const SkillModel& adapted, const TaskConfiguration& tc,
                               const RewardWeights& weights);

struct Transition {
  Eigen::VectorXf state;
  Eigen::VectorXf action;
  float reward = 0.0f;
  Eigen::VectorXf next_state;
  float done = 1.0f;
};

// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int state_dim, int action_dim);
  void add(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  // The i-th oldest stored transition.
  Transition at(std::size_t i) const;

  struct Batch {
    Eigen::MatrixXf states;  // one column per sample
    Eigen::MatrixXf actions;
    Eigen::RowVectorXf rewards;
    Eigen::MatrixXf next_states;
    Eigen::RowVectorXf dones;
  };
  // Uniform with replacement. Throws InvalidArgument when the buffer holds
  // fewer than batch_size transitions.
  Batch sample(int batch_size, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  Eigen::MatrixXf states_;
  Eigen::MatrixXf actions_;
  Eigen::RowVectorXf rewards_;
  Eigen::MatrixXf next_states_;
  Eigen::RowVectorXf dones_;
};

struct SacConfig {
  std::vector<int> hidden = {256, 256};
  double actor_lr = 3e-4;
  double critic_lr = 3e-4;
  double gamma = 0.99;
  double tau = 0.005;
  double initial_log_std = 0.0;  // bias of the log-std outputs at initialisation
  double output_init_scale = 1.0;  // scales the actor's final-layer weights
};

struct SacDiagnostics {
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double mean_log_std = 0.0;
  bool reverted = false;  // a non-finite loss undid the update
};

// Soft actor-critic with twin critics and tanh-squashed Gaussian actions.
// The entropy temperature is set externally.
class SacAgent {
 public:
  SacAgent(int state_dim, int action_dim, const SacConfig& config, std::mt19937_64& rng);

  int state_dim() const { return state_dim_; }
  int action_dim() const { return action_dim_; }
  const SacConfig& config() const { return config_; }
  double temperature() const { return temperature_; }
  void set_temperature(double t) { temperature_ = t; }

  const Network& actor() const { return actor_; }
  const Network& critic(int i) const { return critics_[i]; }
  const Network& target_critic(int i) const { return targets_[i]; }

  // Pre-tanh mean and clamped log-std for one state.
  void policy_head(const Eigen::VectorXf& state, Eigen::VectorXf& mean,
                   Eigen::VectorXf& log_std) const;
  SquashedGaussianSample sample_action(const Eigen::VectorXf& state, std::mt19937_64& rng) const;
  // tanh of the mean.
  Eigen::VectorXf mean_action(const Eigen::VectorXf& state) const;
  float q_value(int critic, const Eigen::VectorXf& state, const Eigen::VectorXf& action) const;

  SacDiagnostics update(const ReplayBuffer::Batch& batch, std::mt19937_64& rng);

 private:
  int state_dim_;
  int action_dim_;
  SacConfig config_;
  double temperature_ = 0.2;
  Network actor_;
  Network critics_[2];
  Network targets_[2];
  Adam actor_opt_;
  Adam critic_opt_[2];
};

SacDiagnostics sac_update(SacAgent& agent, const ReplayBuffer& buffer, int batch_size,
                          std::mt19937_64& rng);

struct SanityResult {
  double mean_action = 0.0;  // tanh of the policy mean
  double policy_std = 0.0;   // exp of the log-std output
  double final_critic_loss = 0.0;
};

// One-step task with a 1-d action, a constant state and reward
// -(action - optimum)^2, trained for `updates` SAC updates at a fixed
// temperature.
SanityResult sac_quadratic_sanity(double temperature, int updates, std::uint64_t seed,
                                  double optimum = 0.3, const SacConfig& config = {});

struct GprlConfig {
  int episodes = 30000;
  int warmup_episodes = 2000;
  int checkpoint_interval = 500;
  int best_window = 100;
  RewardWeights weights;
  double initial_temperature = 0.05;
  double temperature_decay = 0.999;
  double temperature_floor = 0.01;
  int batch_size = 256;
  std::size_t buffer_capacity = 100000;
  int updates_per_episode = 2;
  SacConfig sac = {{256, 256}, 3e-4, 3e-4, 0.99, 0.005, -1.0, 0.1};
  int normalisation_samples = 256;
  std::uint64_t seed = 0;
};

// Temperature used in episode e (0-based).
double annealed_temperature(const GprlConfig& config, int episode);

// Deterministic evaluation policy: state standardisation plus the actor.
struct GprlPolicy {
  Network actor;
  Eigen::VectorXd state_mean;
  Eigen::VectorXd state_scale;
  int n_via = kDefaultViaCount;

  // Clamped via-major shift from the actor's mean action.
  Eigen::VectorXd predict(const RlState& state) const;
};

struct EpisodeRecord {
  int episode = 0;
  RewardBreakdown reward;
  bool success = false;
  double temperature = 0.0;
  double trailing_mean = 0.0;
  // Best full-window trailing mean so far; -inf until the window fills.
  double best_score = 0.0;
  bool reloaded = false;
};

struct GprlTrainResult {
  GprlPolicy policy;  // best checkpoint
  std::vector<EpisodeRecord> curve;
  double best_score = 0.0;
  int best_episode = -1;
  int reverted_updates = 0;
};

using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

// Episodic training: each episode conditions the demonstration skill on a
// sampled TC, samples a shift, rolls out and stores a single-step
// transition. The best checkpoint is chosen by the trailing mean episode
// reward and reloaded every checkpoint_interval episodes after warm-up.
GprlTrainResult train_gprl(const Environment& env, const GprlConfig& config,
                           const EpisodeCallback& on_episode = {});

// Applies the policy's mean shift to the vanilla-conditioned skill.
SkillModel gprl_adapt(const GprlPolicy& policy, const RlState& state, const SkillModel& conditioned,
                      const std::vector<int>& frozen = {});

}  // namespace gpskill

#endif  // GPSKILL_GPRL_HPP_
