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

#ifndef GPSKILL_ENVS_HPP_
#define GPSKILL_ENVS_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "gpskill/skill.hpp"
#include "gpskill/task.hpp"

namespace gpskill {

// Simulator calibration constants. Defaults are tuned so the canonical
// demonstration of each task succeeds at zero offset.
struct EnvConfig {
  double control_step = 0.01;  // seconds
  double max_offset = 0.20;    // metres

  // Keypoint via indices of the demonstration (contact and goal roles).
  int contact_via = -1;
  int goal_via = -1;

  // Cube pushing.
  Eigen::Vector2d cube_position{0.55, -0.05};
  double cube_half_size = 0.025;
  double contact_radius = 0.03;
  double contact_height = 0.05;
  double goal_tolerance = 0.05;
  Eigen::Vector2d obstacle_center{0.74, 0.32};
  double obstacle_radius = 0.04;
  double obstacle_height = 0.12;

  // Dynamic cube pushing perturbations.
  double jitter = 0.002;
  int max_jumps = 2;
  double jump_distance = 0.05;
  double jump_window_begin = 0.1;  // fraction of the duration
  double jump_window_end = 0.5;

  // Drawer opening. The drawer opens along -x.
  Eigen::Vector3d handle_position{0.62, 0.0, 0.15};
  Eigen::Vector3d handle_half_extents{0.03, 0.04, 0.03};
  double drawer_success_travel = 0.12;
  double drawer_max_travel = 0.25;

  // Bar removal. Bars lie along x on a conveyor; offsets move along y.
  Eigen::Vector2d bar_position{0.55, 0.0};
  double grasp_height = 0.05;
  Eigen::Vector3d grasp_half_extents{0.04, 0.02, 0.03};
  double bar_body_center_z = 0.02;
  Eigen::Vector3d bar_body_half_extents{0.15, 0.015, 0.02};
  double second_bar_separation = 0.10;
  double second_bar_center_z = 0.03;
  Eigen::Vector3d second_bar_half_extents{0.15, 0.025, 0.04};
  double alignment_tolerance_deg = 15.0;
  double lift_clearance = 0.10;
};

EnvConfig default_env_config(EnvKind kind);

enum class FailureReason { kNone, kCollision, kGoalMissed, kTimeout };
std::string_view to_string(FailureReason reason);

struct EpisodeOutcome {
  bool success = false;
  FailureReason failure_reason = FailureReason::kGoalMissed;
  std::string detail;
  Matrix3Cols executed_path;
  Matrix3Cols executed_rotation;
  Pose object_final_pose;
  int replans = 0;
};

// Called by dynamic environments when the object jumps. Receives the
// updated task configuration and the current time; returns a replacement
// trajectory sampled at the same times.
using ReplanFn = std::function<Trajectory(const TaskConfiguration& tc, double t_now)>;

class Environment {
 public:
  Environment(EnvKind kind, SkillModel demo_skill, EnvConfig config);
  Environment(EnvKind kind, SkillModel demo_skill);

  EnvKind kind() const { return kind_; }
  const EnvConfig& config() const { return config_; }
  const SkillModel& demo_skill() const { return demo_skill_; }
  int contact_via() const { return contact_via_; }
  int goal_via() const { return goal_via_; }
  // Calibrated cube goal for the pushing tasks (cube position at the end of
  // the demonstration replay).
  const Eigen::Vector2d& cube_goal() const { return cube_goal_; }

  // Task configuration displaced by `offset` in the task subspace. For BMT
  // only offset.y() is used; second_bar_side (+1 or -1) places the
  // neighbouring bar.
  TaskConfiguration make_tc(const Eigen::Vector2d& offset, std::uint64_t perturbation_seed = 0,
                            int second_bar_side = 1) const;
  TaskConfiguration nominal_tc() const { return make_tc(Eigen::Vector2d::Zero()); }

  // Uniform offset: a disc of radius max_offset in the xy-plane for the
  // pushing and drawer tasks, an interval along the conveyor width for BMT.
  TaskConfiguration sample_tc(std::mt19937_64& rng, double max_offset) const;
  TaskConfiguration sample_tc(std::mt19937_64& rng) const {
    return sample_tc(rng, config_.max_offset);
  }

  // Reference end pose for spatial and temporal penalties: the
  // demonstration's final pose. The simulated tasks end at a retreat pose
  // that does not move with the task configuration.
  Pose final_pose_target(const TaskConfiguration& tc) const;

  // Uniform sample times used by rollout.
  const Eigen::VectorXd& control_times() const { return sampler_.basis().query_times(); }
  const TrajectorySampler& sampler() const { return sampler_; }
  Trajectory sample(const SkillModel& skill) const;

  // Executes a trajectory sampled at control_times().
  EpisodeOutcome rollout(const Trajectory& trajectory, const TaskConfiguration& tc,
                         const ReplanFn& replan = {}) const;

 private:
  EpisodeOutcome rollout_cpt(const Trajectory& trajectory, const TaskConfiguration& tc,
                             const ReplanFn& replan, bool calibration) const;
  EpisodeOutcome rollout_dot(const Trajectory& trajectory, const TaskConfiguration& tc) const;
  EpisodeOutcome rollout_bmt(const Trajectory& trajectory, const TaskConfiguration& tc) const;
  std::vector<Observation> observations_for(const Eigen::Vector3d& contact_shift,
                                            const Eigen::Vector3d& goal_shift) const;

  EnvKind kind_;
  SkillModel demo_skill_;
  EnvConfig config_;
  TrajectorySampler sampler_;
  Matrix6Cols via_means_;
  int contact_via_ = 0;
  int goal_via_ = 0;
  Eigen::Vector2d cube_goal_ = Eigen::Vector2d::Zero();
};

TaskConfiguration sample_tc(const Environment& env, std::mt19937_64& rng, double max_offset);

}  // namespace gpskill

#endif  // GPSKILL_ENVS_HPP_
