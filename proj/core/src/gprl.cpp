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

#include "gpskill/gprl.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <string>

#include "gpskill/adapt.hpp"
#include "gpskill/errors.hpp"
#include "gpskill/signature.hpp"
#include "gpskill/so3.hpp"

namespace gpskill {

Eigen::Matrix<double, kRlStateDim, 1> RlState::vector() const {
  Eigen::Matrix<double, kRlStateDim, 1> v;
  v << d_o, d_g, t_s, v_bar, a_bar;
  return v;
}

RlState build_rl_state(const Eigen::Vector3d& d_o, const Eigen::Vector3d& d_g, double t_s,
                       const SkillModel& skill, int n_samples) {
  if (n_samples < 2) throw InvalidArgument("build_rl_state: n_samples must be at least 2");
  RlState s;
  s.d_o = d_o;
  s.d_g = d_g;
  s.t_s = t_s;
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n_samples, skill.start_time(), skill.end_time());
  const Trajectory tr = TrajectorySampler(skill.via().times, skill.params(), t).sample(skill);
  s.v_bar << tr.linear_velocity.colwise().mean().transpose(), tr.rotvec_rate.colwise().mean().transpose();
  s.a_bar << tr.linear_accel.colwise().mean().transpose(), tr.rotvec_accel.colwise().mean().transpose();
  return s;
}

RlState build_rl_state(const TaskConfiguration& tc, const SkillModel& skill, double t_s) {
  return build_rl_state(tc.object_pose.position - tc.start_pose.position,
                        tc.goal_pose.position - tc.object_pose.position, t_s, skill);
}

double compose_reward(double r_tc, double r_ss, double r_sp, double r_tp, const RewardWeights& w) {
  return r_tc + w.alpha * r_ss - w.beta * r_sp - w.eta * r_tp;
}

double spatial_penalty(const Eigen::Vector3d& p_pi, const Eigen::Quaterniond& q_pi,
                       const Eigen::Vector3d& p_demo, const Eigen::Quaterniond& q_demo) {
  const double dot = std::clamp(std::abs(q_pi.coeffs().dot(q_demo.coeffs())), 0.0, 1.0);
  return (p_pi - p_demo).norm() + 2.0 * std::acos(dot);
}

double temporal_penalty(const Eigen::VectorXd& times, const Matrix3Cols& positions,
                        const Eigen::Vector3d& target, double demo_duration) {
  if (times.size() == 0 || times.size() != positions.rows()) {
    throw InvalidArgument("temporal_penalty: times and positions must be non-empty and aligned");
  }
  Eigen::Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    const double d = (positions.row(i).transpose() - target).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return demo_duration - (times[best] - times[0]);
}

RewardModel::RewardModel(const Environment& env, int n_samples) : env_(&env), n_samples_(n_samples) {
  if (n_samples < 10) throw InvalidArgument("RewardModel: n_samples must be at least 10");
  const SkillModel& demo = env.demo_skill();
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n_samples, demo.start_time(), demo.end_time());
  const Trajectory d = TrajectorySampler(demo.via().times, demo.params(), t).sample(demo);
  demo_linear_ = d.linear_velocity;
  demo_angular_ = angular_velocities(d.rotation_vectors, d.rotvec_rate);
}

double RewardModel::similarity(const SkillModel& adapted) const {
  const SkillModel& demo = env_->demo_skill();
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n_samples_, demo.start_time(), demo.end_time());
  const Trajectory a = TrajectorySampler(adapted.via().times, adapted.params(), t).sample(adapted);
  const double lin = gpskill::similarity(a.linear_velocity, demo_linear_).value;
  const double ang =
      gpskill::similarity(angular_velocities(a.rotation_vectors, a.rotvec_rate), demo_angular_).value;
  return 0.5 * (lin + ang);
}

RewardBreakdown RewardModel::operator()(const EpisodeOutcome& outcome, const SkillModel& adapted,
                                        const Trajectory& trajectory, const TaskConfiguration& tc,
                                        const RewardWeights& weights) const {
  if (weights.alpha < 0.0 || weights.beta < 0.0 || weights.eta < 0.0) {
    throw InvalidArgument("reward weights must be non-negative");
  }
  if (trajectory.size() == 0) throw InvalidArgument("empty trajectory");
  const Pose target = env_->final_pose_target(tc);
  const Eigen::Index last = trajectory.size() - 1;
  const Eigen::Vector3d p_pi = trajectory.positions.row(last).transpose();
  const Eigen::Quaterniond q_pi = rotvec_to_quaternion(trajectory.rotation_vectors.row(last).transpose());
  const SkillModel& demo = env_->demo_skill();
  RewardBreakdown r;
  r.weights = weights;
  r.r_tc = outcome.success ? 1.0 : 0.0;
  r.r_ss = similarity(adapted);
  r.r_sp = spatial_penalty(p_pi, q_pi, target.position, target.orientation);
  r.r_tp = temporal_penalty(trajectory.times, trajectory.positions, target.position,
                            demo.end_time() - demo.start_time());
  r.total = compose_reward(r.r_tc, r.r_ss, r.r_sp, r.r_tp, weights);
  return r;
}

RewardBreakdown compute_reward(const Environment& env, const EpisodeOutcome& outcome,
                               const SkillModel& adapted, const TaskConfiguration& tc,
                               const RewardWeights& weights) {
  return RewardModel(env)(outcome, adapted, env.sample(adapted), tc, weights);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim)
    : capacity_(capacity) {
  if (capacity == 0 || state_dim <= 0 || action_dim <= 0) {
    throw InvalidArgument("replay buffer needs positive capacity and dimensions");
  }
  const auto cap = static_cast<Eigen::Index>(capacity);
  states_.resize(state_dim, cap);
  actions_.resize(action_dim, cap);
  rewards_.resize(cap);
  next_states_.resize(state_dim, cap);
  dones_.resize(cap);
}

void ReplayBuffer::add(const Transition& t) {
  if (t.state.size() != states_.rows() || t.next_state.size() != states_.rows() ||
      t.action.size() != actions_.rows()) {
    throw InvalidArgument("transition dimensions do not match the replay buffer");
  }
  const auto i = static_cast<Eigen::Index>(head_);
  states_.col(i) = t.state;
  actions_.col(i) = t.action;
  rewards_[i] = t.reward;
  next_states_.col(i) = t.next_state;
  dones_[i] = t.done;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw InvalidArgument("replay buffer index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : head_;
  const auto k = static_cast<Eigen::Index>((oldest + i) % capacity_);
  return {states_.col(k), actions_.col(k), rewards_[k], next_states_.col(k), dones_[k]};
}

ReplayBuffer::Batch ReplayBuffer::sample(int batch_size, std::mt19937_64& rng) const {
  if (batch_size <= 0 || static_cast<std::size_t>(batch_size) > size_) {
    throw InvalidArgument("replay buffer holds fewer transitions than the batch size");
  }
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  Batch b;
  b.states.resize(states_.rows(), batch_size);
  b.actions.resize(actions_.rows(), batch_size);
  b.rewards.resize(batch_size);
  b.next_states.resize(states_.rows(), batch_size);
  b.dones.resize(batch_size);
  for (int j = 0; j < batch_size; ++j) {
    const auto k = static_cast<Eigen::Index>(pick(rng));
    b.states.col(j) = states_.col(k);
    b.actions.col(j) = actions_.col(k);
    b.rewards[j] = rewards_[k];
    b.next_states.col(j) = next_states_.col(k);
    b.dones[j] = dones_[k];
  }
  return b;
}

namespace {

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> s = {in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  s.push_back(out);
  return s;
}

void polyak(Network& target, const Network& source, double tau) {
  const float t = static_cast<float>(tau);
  target.set_flat_parameters((1.0f - t) * target.flat_parameters() + t * source.flat_parameters());
}

constexpr float kActionBound = 1.0f - 1e-6f;

}  // namespace

SacAgent::SacAgent(int state_dim, int action_dim, const SacConfig& config, std::mt19937_64& rng)
    : state_dim_(state_dim), action_dim_(action_dim), config_(config) {
  if (state_dim <= 0 || action_dim <= 0) throw InvalidArgument("SAC dimensions must be positive");
  actor_ = Network(layer_sizes(state_dim, config.hidden, 2 * action_dim), Activation::kRelu,
                   Activation::kLinear, rng);
  auto& last = actor_.mutable_layers().back();
  last.weights *= static_cast<float>(config.output_init_scale);
  last.bias.head(action_dim) *= static_cast<float>(config.output_init_scale);
  last.bias.tail(action_dim).setConstant(static_cast<float>(config.initial_log_std));
  for (int i = 0; i < 2; ++i) {
    critics_[i] = Network(layer_sizes(state_dim + action_dim, config.hidden, 1), Activation::kRelu,
                          Activation::kLinear, rng);
    targets_[i] = critics_[i];
    critic_opt_[i] = Adam(critics_[i], config.critic_lr);
  }
  actor_opt_ = Adam(actor_, config.actor_lr);
}

void SacAgent::policy_head(const Eigen::VectorXf& state, Eigen::VectorXf& mean,
                           Eigen::VectorXf& log_std) const {
  const Eigen::VectorXf out = actor_.forward(state);
  mean = out.head(action_dim_);
  log_std = out.tail(action_dim_).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

SquashedGaussianSample SacAgent::sample_action(const Eigen::VectorXf& state,
                                               std::mt19937_64& rng) const {
  Eigen::VectorXf mean;
  Eigen::VectorXf log_std;
  policy_head(state, mean, log_std);
  return gaussian_policy_sample(mean, log_std, rng);
}

Eigen::VectorXf SacAgent::mean_action(const Eigen::VectorXf& state) const {
  const Eigen::VectorXf out = actor_.forward(state);
  return out.head(action_dim_).array().tanh().min(kActionBound).max(-kActionBound).matrix();
}

float SacAgent::q_value(int critic, const Eigen::VectorXf& state, const Eigen::VectorXf& action) const {
  Eigen::VectorXf x(state_dim_ + action_dim_);
  x << state, action;
  return critics_[critic].forward(x)[0];
}

SacDiagnostics SacAgent::update(const ReplayBuffer::Batch& batch, std::mt19937_64& rng) {
  const Eigen::Index n = batch.states.cols();
  const int s_dim = state_dim_;
  const int a_dim = action_dim_;
  if (n == 0 || batch.states.rows() != s_dim || batch.actions.rows() != a_dim) {
    throw InvalidArgument("SAC batch does not match the agent dimensions");
  }
  const SacAgent snapshot = *this;
  const float alpha = static_cast<float>(temperature_);
  const float inv_n = 1.0f / static_cast<float>(n);
  std::normal_distribution<float> normal(0.0f, 1.0f);
  SacDiagnostics diag;

  // Critic targets from the next-state policy and the target critics.
  Eigen::RowVectorXf y = batch.rewards;
  if ((batch.dones.array() < 1.0f).any()) {
    const Eigen::MatrixXf out = actor_.forward_batch(batch.next_states);
    Eigen::MatrixXf next_in(s_dim + a_dim, n);
    next_in.topRows(s_dim) = batch.next_states;
    Eigen::RowVectorXf next_logp(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::VectorXf mean = out.col(j).head(a_dim);
      const Eigen::VectorXf ls = out.col(j).tail(a_dim).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
      const SquashedGaussianSample s = gaussian_policy_sample(mean, ls, rng);
      next_in.col(j).tail(a_dim) = s.action;
      next_logp[j] = s.log_prob;
    }
    const Eigen::RowVectorXf q1 = targets_[0].forward_batch(next_in);
    const Eigen::RowVectorXf q2 = targets_[1].forward_batch(next_in);
    const Eigen::RowVectorXf soft = q1.cwiseMin(q2) - alpha * next_logp;
    const float gamma = static_cast<float>(config_.gamma);
    y = batch.rewards + (gamma * (1.0f - batch.dones.array()) * soft.array()).matrix();
  }

  Eigen::MatrixXf in(s_dim + a_dim, n);
  in.topRows(s_dim) = batch.states;
  in.bottomRows(a_dim) = batch.actions;
  double critic_loss = 0.0;
  for (int i = 0; i < 2; ++i) {
    Network::Cache cache;
    const Eigen::MatrixXf q = critics_[i].forward_batch(in, cache);
    const Eigen::MatrixXf diff = q - y;
    critic_loss += 0.5 * static_cast<double>(diff.squaredNorm() * inv_n);
    const Eigen::MatrixXf d_out = 2.0f * inv_n * diff;
    critic_opt_[i].step(critics_[i], critics_[i].backward(cache, d_out));
  }
  diag.critic_loss = critic_loss;

  // Reparameterised actor update against the minimum of the two critics.
  Network::Cache actor_cache;
  const Eigen::MatrixXf out = actor_.forward_batch(batch.states, actor_cache);
  Eigen::MatrixXf eps(a_dim, n);
  Eigen::MatrixXf act(a_dim, n);
  Eigen::MatrixXf sigma(a_dim, n);
  Eigen::RowVectorXf logp(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double lp = 0.0;
    for (int k = 0; k < a_dim; ++k) {
      const float ls = std::clamp(out(a_dim + k, j), kLogStdMin, kLogStdMax);
      const float e = normal(rng);
      const float sd = std::exp(ls);
      const float u = out(k, j) + sd * e;
      eps(k, j) = e;
      sigma(k, j) = sd;
      act(k, j) = std::clamp(std::tanh(u), -kActionBound, kActionBound);
      lp += -0.5 * static_cast<double>(e) * e - ls - 0.5 * std::log(2.0 * std::numbers::pi) -
            log1m_tanh_sq(static_cast<double>(u));
    }
    logp[j] = static_cast<float>(lp);
  }
  in.bottomRows(a_dim) = act;
  Network::Cache c_cache[2];
  const Eigen::RowVectorXf q1 = critics_[0].forward_batch(in, c_cache[0]);
  const Eigen::RowVectorXf q2 = critics_[1].forward_batch(in, c_cache[1]);
  Eigen::MatrixXf d_q[2] = {Eigen::MatrixXf::Zero(1, n), Eigen::MatrixXf::Zero(1, n)};
  for (Eigen::Index j = 0; j < n; ++j) d_q[q1[j] <= q2[j] ? 0 : 1](0, j) = 1.0f;
  Eigen::MatrixXf dq_da = Eigen::MatrixXf::Zero(a_dim, n);
  for (int i = 0; i < 2; ++i) {
    Eigen::MatrixXf d_in;
    critics_[i].backward(c_cache[i], d_q[i], &d_in);
    dq_da += d_in.bottomRows(a_dim);
  }
  const Eigen::RowVectorXf min_q = q1.cwiseMin(q2);
  diag.actor_loss = static_cast<double>((alpha * logp - min_q).mean());
  Eigen::MatrixXf d_out(2 * a_dim, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int k = 0; k < a_dim; ++k) {
      const float a = act(k, j);
      const float d_u = (-dq_da(k, j) * (1.0f - a * a) + alpha * 2.0f * a) * inv_n;
      d_out(k, j) = d_u;
      const float raw = out(a_dim + k, j);
      const bool clamped = raw < kLogStdMin || raw > kLogStdMax;
      d_out(a_dim + k, j) = clamped ? 0.0f : d_u * sigma(k, j) * eps(k, j) - alpha * inv_n;
    }
  }
  actor_opt_.step(actor_, actor_.backward(actor_cache, d_out));
  diag.mean_log_std =
      static_cast<double>(out.bottomRows(a_dim).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax).mean());

  for (int i = 0; i < 2; ++i) polyak(targets_[i], critics_[i], config_.tau);

  if (!std::isfinite(diag.critic_loss) || !std::isfinite(diag.actor_loss) ||
      !actor_.flat_parameters().allFinite()) {
    *this = snapshot;
    diag.reverted = true;
  }
  return diag;
}

SacDiagnostics sac_update(SacAgent& agent, const ReplayBuffer& buffer, int batch_size,
                          std::mt19937_64& rng) {
  return agent.update(buffer.sample(batch_size, rng), rng);
}

SanityResult sac_quadratic_sanity(double temperature, int updates, std::uint64_t seed,
                                  double optimum, const SacConfig& config) {
  constexpr int kBatch = 128;
  std::mt19937_64 rng(seed);
  SacAgent agent(1, 1, config, rng);
  agent.set_temperature(temperature);
  ReplayBuffer buffer(static_cast<std::size_t>(updates) + kBatch, 1, 1);
  const Eigen::VectorXf state = Eigen::VectorXf::Ones(1);
  SanityResult result;
  auto collect = [&] {
    const SquashedGaussianSample s = agent.sample_action(state, rng);
    const float r = -static_cast<float>(std::pow(s.action[0] - optimum, 2));
    buffer.add({state, s.action, r, state, 1.0f});
  };
  for (int i = 0; i < kBatch; ++i) collect();
  for (int u = 0; u < updates; ++u) {
    collect();
    result.final_critic_loss = sac_update(agent, buffer, kBatch, rng).critic_loss;
  }
  Eigen::VectorXf mean;
  Eigen::VectorXf log_std;
  agent.policy_head(state, mean, log_std);
  result.mean_action = std::tanh(static_cast<double>(mean[0]));
  result.policy_std = std::exp(static_cast<double>(log_std[0]));
  return result;
}

double annealed_temperature(const GprlConfig& config, int episode) {
  return std::max(config.temperature_floor,
                  config.initial_temperature * std::pow(config.temperature_decay, episode));
}

Eigen::VectorXd GprlPolicy::predict(const RlState& state) const {
  const Eigen::VectorXd x = (state.vector() - state_mean).cwiseQuotient(state_scale);
  const Eigen::VectorXf out = actor.forward(x.cast<float>());
  const int dim = position_action_dim(n_via);
  if (out.size() != 2 * dim) throw InvalidArgument("actor output does not match the via count");
  const Eigen::VectorXd a = out.head(dim).cast<double>().array().tanh().matrix();
  return clamp_via_shift(kMaxViaShift * a);
}

namespace {

Eigen::VectorXf normalise(const RlState& s, const Eigen::VectorXd& mean, const Eigen::VectorXd& scale) {
  return (s.vector() - mean).cwiseQuotient(scale).cast<float>();
}

}  // namespace

GprlTrainResult train_gprl(const Environment& env, const GprlConfig& config,
                           const EpisodeCallback& on_episode) {
  if (config.episodes <= 0 || config.checkpoint_interval <= 0 || config.best_window <= 0 ||
      config.batch_size <= 0 || config.warmup_episodes < 0 || config.normalisation_samples < 2) {
    throw InvalidArgument("invalid GPRL training configuration");
  }
  if (config.temperature_decay <= 0.0 || config.temperature_decay > 1.0 ||
      config.temperature_floor < 0.0 || config.initial_temperature < 0.0) {
    throw InvalidArgument("temperature schedule must be non-increasing and non-negative");
  }
  const SkillModel& demo = env.demo_skill();
  const int n_via = demo.via().size();
  const int a_dim = position_action_dim(n_via);
  const double duration = demo.end_time() - demo.start_time();

  std::mt19937_64 seeder(config.seed);
  std::mt19937_64 norm_rng(seeder());
  std::mt19937_64 env_rng(seeder());
  std::mt19937_64 agent_rng(seeder());

  GprlPolicy policy;
  policy.n_via = n_via;
  {
    Eigen::MatrixXd states(kRlStateDim, config.normalisation_samples);
    for (int i = 0; i < config.normalisation_samples; ++i) {
      const TaskConfiguration tc = env.sample_tc(norm_rng);
      states.col(i) = build_rl_state(tc, condition_on_tc(demo, tc)).vector();
    }
    policy.state_mean = states.rowwise().mean();
    policy.state_scale =
        ((states.colwise() - policy.state_mean).cwiseAbs2().rowwise().mean()).cwiseSqrt().cwiseMax(1e-6);
  }

  SacAgent agent(kRlStateDim, a_dim, config.sac, agent_rng);
  SacAgent best_agent = agent;
  ReplayBuffer buffer(config.buffer_capacity, kRlStateDim, a_dim);
  const RewardModel reward_model(env);
  GprlTrainResult result;
  result.best_score = -std::numeric_limits<double>::infinity();
  std::deque<double> window;
  double window_sum = 0.0;

  for (int e = 0; e < config.episodes; ++e) {
    EpisodeRecord rec;
    rec.episode = e;
    rec.temperature = annealed_temperature(config, e);
    if (e > config.warmup_episodes && (e - config.warmup_episodes) % config.checkpoint_interval == 0 &&
        result.best_episode >= 0) {
      agent = best_agent;
      rec.reloaded = true;
    }
    agent.set_temperature(rec.temperature);

    const TaskConfiguration tc = env.sample_tc(env_rng);
    const SkillModel vanilla = condition_on_tc(demo, tc);
    const std::vector<int> frozen = select_anchors(demo, tc).indices;
    const Eigen::VectorXf x = normalise(build_rl_state(tc, vanilla), policy.state_mean, policy.state_scale);
    const SquashedGaussianSample sample = agent.sample_action(x, agent_rng);
    const Eigen::VectorXd delta = kMaxViaShift * sample.action.cast<double>();
    const SkillModel adapted(apply_via_shift(vanilla.via(), delta, frozen), vanilla.params());
    const Trajectory traj = env.sample(adapted);

    ReplanFn replan;
    if (env.kind() == EnvKind::kDCpt) {
      replan = [&](const TaskConfiguration& moved, double t_now) {
        const SkillModel base = condition_on_tc(demo, moved);
        const PoseTwistAccel here = adapted.query(std::clamp(t_now, demo.start_time(), demo.end_time()));
        const RlState s = build_rl_state(moved.object_pose.position - here.position,
                                         moved.goal_pose.position - moved.object_pose.position,
                                         (t_now - demo.start_time()) / duration, base);
        const Eigen::VectorXd d =
            kMaxViaShift * agent.mean_action(normalise(s, policy.state_mean, policy.state_scale)).cast<double>();
        return env.sample(SkillModel(apply_via_shift(base.via(), d, select_anchors(demo, moved).indices),
                                     base.params()));
      };
    }
    const EpisodeOutcome outcome = env.rollout(traj, tc, replan);
    rec.reward = reward_model(outcome, adapted, traj, tc, config.weights);
    rec.success = outcome.success;
    buffer.add({x, sample.action, static_cast<float>(rec.reward.total), x, 1.0f});

    if (buffer.size() >= static_cast<std::size_t>(config.batch_size)) {
      for (int u = 0; u < config.updates_per_episode; ++u) {
        if (sac_update(agent, buffer, config.batch_size, agent_rng).reverted) ++result.reverted_updates;
      }
    }

    window.push_back(rec.reward.total);
    window_sum += rec.reward.total;
    if (static_cast<int>(window.size()) > config.best_window) {
      window_sum -= window.front();
      window.pop_front();
    }
    rec.trailing_mean = window_sum / static_cast<double>(window.size());
    if (static_cast<int>(window.size()) == config.best_window && rec.trailing_mean > result.best_score) {
      result.best_score = rec.trailing_mean;
      result.best_episode = e;
      best_agent = agent;
    }
    rec.best_score = result.best_score;
    result.curve.push_back(rec);
    if (on_episode) on_episode(rec);
  }
  if (result.best_episode < 0) {
    best_agent = agent;
    result.best_score = window_sum / static_cast<double>(window.size());
  }
  policy.actor = best_agent.actor();
  result.policy = std::move(policy);
  return result;
}

SkillModel gprl_adapt(const GprlPolicy& policy, const RlState& state, const SkillModel& conditioned,
                      const std::vector<int>& frozen) {
  if (policy.n_via != conditioned.via().size()) {
    throw InvalidArgument("policy via count does not match the skill");
  }
  return SkillModel(apply_via_shift(conditioned.via(), policy.predict(state), frozen),
                    conditioned.params());
}

}  // namespace gpskill
