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

#include "gpskill/envs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "gpskill/errors.hpp"
#include "gpskill/so3.hpp"

namespace gpskill {
namespace {

bool in_box(const Eigen::Vector3d& p, const Eigen::Vector3d& center, const Eigen::Vector3d& half) {
  return ((p - center).cwiseAbs().array() <= half.array()).all();
}

// Distance in the plane from a point to an axis-aligned square.
double distance_to_square(const Eigen::Vector2d& p, const Eigen::Vector2d& center, double half) {
  const double dx = std::max(std::abs(p.x() - center.x()) - half, 0.0);
  const double dy = std::max(std::abs(p.y() - center.y()) - half, 0.0);
  return std::hypot(dx, dy);
}

std::string fmt_vec2(const Eigen::Vector2d& v) {
  std::ostringstream s;
  s.precision(3);
  s << std::fixed << '(' << v.x() << ", " << v.y() << ')';
  return s.str();
}

}  // namespace

EnvConfig default_env_config(EnvKind kind) {
  EnvConfig c;
  switch (kind) {
    case EnvKind::kDot:
      c.contact_via = 7;
      c.goal_via = 12;
      break;
    case EnvKind::kSCpt:
      c.contact_via = 10;
      c.goal_via = 12;
      break;
    case EnvKind::kDCpt:
      c.contact_via = 10;
      c.goal_via = 12;
      break;
    case EnvKind::kBmt:
      c.contact_via = 8;
      c.goal_via = 10;
      break;
  }
  return c;
}

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::kNone:
      return "none";
    case FailureReason::kCollision:
      return "collision";
    case FailureReason::kGoalMissed:
      return "goal_missed";
    case FailureReason::kTimeout:
      return "timeout";
  }
  return "unknown";
}

Environment::Environment(EnvKind kind, SkillModel demo_skill)
    : Environment(kind, std::move(demo_skill), default_env_config(kind)) {}

Environment::Environment(EnvKind kind, SkillModel demo_skill, EnvConfig config)
    : kind_(kind),
      demo_skill_(std::move(demo_skill)),
      config_(std::move(config)),
      sampler_(demo_skill_, config_.control_step),
      via_means_(demo_skill_.via_means()) {
  const int n = demo_skill_.via().size();
  const EnvConfig defaults = default_env_config(kind);
  contact_via_ = config_.contact_via >= 0 ? config_.contact_via : defaults.contact_via;
  goal_via_ = config_.goal_via >= 0 ? config_.goal_via : defaults.goal_via;
  if (contact_via_ >= n || goal_via_ >= n || contact_via_ == goal_via_ || contact_via_ == 0 ||
      goal_via_ == 0) {
    throw InvalidArgument("environment keypoint via indices are invalid for this skill");
  }
  if (config_.max_offset <= 0.0 || config_.max_offset > 0.3) {
    throw InvalidArgument("max_offset must lie in (0, 0.3]");
  }
  if (kind_ == EnvKind::kSCpt || kind_ == EnvKind::kDCpt) {
    TaskConfiguration tc = make_tc(Eigen::Vector2d::Zero());
    const EpisodeOutcome replay = rollout_cpt(sample(demo_skill_), tc, {}, true);
    cube_goal_ = replay.object_final_pose.position.head<2>();
  }
  // The dynamic variant shares the static geometry; its perturbed replay is
  // not expected to succeed without replanning.
  if (kind_ == EnvKind::kDCpt) return;
  const EpisodeOutcome check = rollout(sample(demo_skill_), nominal_tc());
  if (!check.success) {
    warn("demonstration replay fails in " + std::string(to_string(kind_)) + ": " + check.detail);
  }
}

Trajectory Environment::sample(const SkillModel& skill) const { return sampler_.sample(skill); }

std::vector<Observation> Environment::observations_for(const Eigen::Vector3d& contact_shift,
                                                       const Eigen::Vector3d& goal_shift) const {
  std::vector<Observation> obs(3);
  obs[0].role = Role::kStart;
  obs[0].position = via_means_.row(0).head<3>().transpose();
  obs[1].role = Role::kContact;
  obs[1].position = via_means_.row(contact_via_).head<3>().transpose() + contact_shift;
  obs[2].role = Role::kGoal;
  obs[2].position = via_means_.row(goal_via_).head<3>().transpose() + goal_shift;
  return obs;
}

TaskConfiguration Environment::make_tc(const Eigen::Vector2d& offset,
                                       std::uint64_t perturbation_seed,
                                       int second_bar_side) const {
  if (!offset.allFinite()) throw InvalidArgument("non-finite offset");
  TaskConfiguration tc;
  tc.env = kind_;
  tc.perturbation_seed = perturbation_seed;
  const PoseTwistAccel start = demo_skill_.query(demo_skill_.start_time());
  tc.start_pose.position = start.position;
  tc.start_pose.orientation = rotvec_to_quaternion(start.rotation_vector);
  const Eigen::Vector3d planar(offset.x(), offset.y(), 0.0);
  switch (kind_) {
    case EnvKind::kSCpt:
    case EnvKind::kDCpt: {
      tc.offset = offset;
      tc.object_pose.position << config_.cube_position + offset, config_.cube_half_size;
      tc.goal_pose.position << cube_goal_, config_.cube_half_size;
      Pose obstacle;
      obstacle.position << config_.obstacle_center, 0.0;
      tc.obstacles.push_back(obstacle);
      tc.observations = observations_for(planar, Eigen::Vector3d::Zero());
      break;
    }
    case EnvKind::kDot: {
      tc.offset = offset;
      tc.object_pose.position = config_.handle_position + planar;
      tc.goal_pose.position =
          tc.object_pose.position - Eigen::Vector3d(config_.drawer_success_travel, 0.0, 0.0);
      tc.observations = observations_for(planar, planar);
      break;
    }
    case EnvKind::kBmt: {
      tc.offset = Eigen::Vector2d(0.0, offset.y());
      const Eigen::Vector3d shift(0.0, offset.y(), 0.0);
      tc.object_pose.position << config_.bar_position.x(), config_.bar_position.y() + offset.y(),
          config_.grasp_height;
      tc.goal_pose.position = tc.object_pose.position + Eigen::Vector3d(0.0, 0.0, config_.lift_clearance);
      Pose second;
      const double side = second_bar_side >= 0 ? 1.0 : -1.0;
      second.position << config_.bar_position.x(),
          tc.object_pose.position.y() + side * config_.second_bar_separation,
          config_.second_bar_center_z;
      tc.obstacles.push_back(second);
      tc.observations = observations_for(shift, shift);
      break;
    }
  }
  return tc;
}

TaskConfiguration Environment::sample_tc(std::mt19937_64& rng, double max_offset) const {
  if (!(max_offset > 0.0) || max_offset > 0.3) throw InvalidArgument("max_offset must lie in (0, 0.3]");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (kind_ == EnvKind::kBmt) {
    const double y = max_offset * (2.0 * unit(rng) - 1.0);
    const int side = unit(rng) < 0.5 ? -1 : 1;
    return make_tc(Eigen::Vector2d(0.0, y), 0, side);
  }
  const double r = max_offset * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  Eigen::Vector2d offset(r * std::cos(theta), r * std::sin(theta));
  // Guard the disc against rounding just outside the bound.
  offset = offset.cwiseMax(-max_offset).cwiseMin(max_offset);
  const std::uint64_t seed = kind_ == EnvKind::kDCpt ? rng() : 0;
  return make_tc(offset, seed);
}

TaskConfiguration sample_tc(const Environment& env, std::mt19937_64& rng, double max_offset) {
  return env.sample_tc(rng, max_offset);
}

Pose Environment::final_pose_target(const TaskConfiguration& /*tc*/) const {
  const PoseTwistAccel end = demo_skill_.query(demo_skill_.end_time());
  Pose pose;
  pose.position = end.position;
  pose.orientation = rotvec_to_quaternion(end.rotation_vector);
  return pose;
}

EpisodeOutcome Environment::rollout(const Trajectory& trajectory, const TaskConfiguration& tc,
                                    const ReplanFn& replan) const {
  if (trajectory.size() != control_times().size()) {
    throw InvalidArgument("trajectory is not sampled at the environment's control times");
  }
  if (!trajectory.positions.allFinite() || !trajectory.rotation_vectors.allFinite()) {
    throw InvalidArgument("trajectory contains non-finite samples");
  }
  switch (kind_) {
    case EnvKind::kSCpt:
    case EnvKind::kDCpt:
      return rollout_cpt(trajectory, tc, replan, false);
    case EnvKind::kDot:
      return rollout_dot(trajectory, tc);
    case EnvKind::kBmt:
      return rollout_bmt(trajectory, tc);
  }
  throw InvalidArgument("unknown environment");
}

EpisodeOutcome Environment::rollout_cpt(const Trajectory& trajectory, const TaskConfiguration& tc,
                                        const ReplanFn& replan, bool calibration) const {
  const EnvConfig& c = config_;
  const Eigen::Index n = trajectory.size();
  EpisodeOutcome out;
  out.executed_path.resize(n, 3);
  out.executed_rotation.resize(n, 3);
  Eigen::Index executed = 0;
  const Trajectory* current = &trajectory;
  Trajectory replanned;

  Eigen::Vector2d base = tc.object_pose.position.head<2>();
  const Eigen::Vector2d obstacle =
      tc.obstacles.empty() ? c.obstacle_center : Eigen::Vector2d(tc.obstacles[0].position.head<2>());

  const bool dynamic = kind_ == EnvKind::kDCpt && !calibration;
  std::mt19937_64 rng(tc.perturbation_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<Eigen::Index, Eigen::Vector2d>> jumps;
  if (dynamic && c.max_jumps > 0 && c.jump_distance > 0.0) {
    std::uniform_int_distribution<int> count(1, c.max_jumps);
    const int k = count(rng);
    for (int j = 0; j < k; ++j) {
      const double u = c.jump_window_begin + (c.jump_window_end - c.jump_window_begin) * unit(rng);
      const auto step = static_cast<Eigen::Index>(std::llround(u * static_cast<double>(n - 1)));
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      jumps.emplace_back(std::clamp<Eigen::Index>(step, 1, n - 1),
                         c.jump_distance * Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    }
    std::stable_sort(jumps.begin(), jumps.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  std::size_t next_jump = 0;
  TaskConfiguration live = tc;

  auto finish = [&](bool success, FailureReason reason, std::string detail) {
    out.success = success;
    out.failure_reason = success ? FailureReason::kNone : reason;
    out.detail = std::move(detail);
    out.executed_path.conservativeResize(executed, 3);
    out.executed_rotation.conservativeResize(executed, 3);
    out.object_final_pose.position << base, c.cube_half_size;
    return out;
  };

  Eigen::Vector3d prev = Eigen::Vector3d::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    while (next_jump < jumps.size() && jumps[next_jump].first == i) {
      base += jumps[next_jump].second;
      ++next_jump;
      live.object_pose.position.head<2>() = base;
      for (auto& obs : live.observations) {
        if (obs.role == Role::kContact) {
          obs.position = via_means_.row(contact_via_).head<3>().transpose();
          obs.position.head<2>() += base - c.cube_position;
        }
      }
      live.offset = base - c.cube_position;
      if (replan) {
        replanned = replan(live, trajectory.times[i]);
        if (replanned.size() != n || !replanned.positions.allFinite()) {
          throw InvalidArgument("replanned trajectory has the wrong shape or is non-finite");
        }
        current = &replanned;
        ++out.replans;
      }
    }
    Eigen::Vector2d cube = base;
    if (dynamic && c.jitter > 0.0) {
      cube += c.jitter * Eigen::Vector2d(2.0 * unit(rng) - 1.0, 2.0 * unit(rng) - 1.0);
    }
    const Eigen::Vector3d p = current->positions.row(i).transpose();
    out.executed_path.row(executed) = p.transpose();
    out.executed_rotation.row(executed) = current->rotation_vectors.row(i);
    ++executed;
    if (p.z() < 0.0) return finish(false, FailureReason::kCollision, "tool below the table plane");
    if (i > 0) {
      const Eigen::Vector3d dp = p - prev;
      const Eigen::Vector2d toward = cube - p.head<2>();
      if (distance_to_square(p.head<2>(), cube, c.cube_half_size) <= c.contact_radius &&
          p.z() <= c.contact_height && dp.head<2>().dot(toward) > 0.0) {
        base += dp.head<2>();
        cube += dp.head<2>();
      }
    }
    prev = p;
    if ((p.head<2>() - obstacle).norm() < c.obstacle_radius && p.z() < c.obstacle_height) {
      return finish(false, FailureReason::kCollision, "tool hit the obstacle");
    }
    if ((cube - obstacle).norm() < c.obstacle_radius + c.cube_half_size) {
      return finish(false, FailureReason::kCollision, "cube hit the obstacle");
    }
  }
  if (calibration) return finish(true, FailureReason::kNone, "replay");
  const Eigen::Vector2d goal = tc.goal_pose.position.head<2>();
  const double err = (base - goal).norm();
  if (err <= c.goal_tolerance) return finish(true, FailureReason::kNone, "cube reached the goal");
  return finish(false, FailureReason::kGoalMissed,
                "cube stopped at " + fmt_vec2(base) + ", goal " + fmt_vec2(goal));
}

EpisodeOutcome Environment::rollout_dot(const Trajectory& trajectory,
                                        const TaskConfiguration& tc) const {
  const EnvConfig& c = config_;
  const Eigen::Index n = trajectory.size();
  EpisodeOutcome out;
  out.executed_path = trajectory.positions;
  out.executed_rotation = trajectory.rotation_vectors;
  const Eigen::Vector3d handle = tc.object_pose.position;
  double travel = 0.0;
  auto finish = [&](bool success, FailureReason reason, std::string detail, Eigen::Index upto) {
    out.success = success;
    out.failure_reason = success ? FailureReason::kNone : reason;
    out.detail = std::move(detail);
    out.executed_path.conservativeResize(upto, 3);
    out.executed_rotation.conservativeResize(upto, 3);
    out.object_final_pose.position = handle - Eigen::Vector3d(travel, 0.0, 0.0);
    return out;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d p = trajectory.positions.row(i).transpose();
    if (p.z() < 0.0) return finish(false, FailureReason::kCollision, "tool below the table plane", i + 1);
    if (i == 0) continue;
    const double dx = p.x() - trajectory.positions(i - 1, 0);
    const Eigen::Vector3d current_handle = handle - Eigen::Vector3d(travel, 0.0, 0.0);
    if (dx < 0.0 && in_box(p, current_handle, c.handle_half_extents)) {
      travel = std::min(travel - dx, c.drawer_max_travel);
    }
  }
  std::ostringstream detail;
  detail.precision(3);
  detail << std::fixed << "drawer opened " << travel << " m";
  if (travel >= c.drawer_success_travel) return finish(true, FailureReason::kNone, detail.str(), n);
  return finish(false, FailureReason::kGoalMissed, detail.str(), n);
}

EpisodeOutcome Environment::rollout_bmt(const Trajectory& trajectory,
                                        const TaskConfiguration& tc) const {
  const EnvConfig& c = config_;
  const Eigen::Index n = trajectory.size();
  EpisodeOutcome out;
  out.executed_path = trajectory.positions;
  out.executed_rotation = trajectory.rotation_vectors;
  const Eigen::Vector3d bar = tc.object_pose.position;
  const Eigen::Vector3d grasp_center(bar.x(), bar.y(), c.grasp_height);
  const Eigen::Vector3d body_center(bar.x(), bar.y(), c.bar_body_center_z);
  Eigen::Vector3d second_center(bar.x(), bar.y() + c.second_bar_separation, c.second_bar_center_z);
  if (!tc.obstacles.empty()) second_center = tc.obstacles[0].position;
  const double cos_tol = std::cos(c.alignment_tolerance_deg * std::numbers::pi / 180.0);
  bool grasped = false;
  double grasp_z = 0.0;
  Eigen::Vector3d held = bar;
  auto finish = [&](bool success, FailureReason reason, std::string detail, Eigen::Index upto) {
    out.success = success;
    out.failure_reason = success ? FailureReason::kNone : reason;
    out.detail = std::move(detail);
    out.executed_path.conservativeResize(upto, 3);
    out.executed_rotation.conservativeResize(upto, 3);
    out.object_final_pose.position = held;
    return out;
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d p = trajectory.positions.row(i).transpose();
    if (p.z() < 0.0) return finish(false, FailureReason::kCollision, "tool below the conveyor plane", i + 1);
    if (in_box(p, second_center, c.second_bar_half_extents)) {
      return finish(false, FailureReason::kCollision, "hit the neighbouring bar", i + 1);
    }
    if (!grasped && in_box(p, body_center, c.bar_body_half_extents)) {
      return finish(false, FailureReason::kCollision, "hit the target bar", i + 1);
    }
    if (!grasped && in_box(p, grasp_center, c.grasp_half_extents)) {
      const Eigen::Vector3d r = trajectory.rotation_vectors.row(i).transpose();
      const Eigen::Vector3d approach = rotvec_to_quaternion(r) * Eigen::Vector3d(0.0, 0.0, -1.0);
      if (-approach.z() < cos_tol) {
        std::ostringstream detail;
        detail.precision(1);
        detail << std::fixed << "approach misaligned by "
               << std::acos(std::clamp(-approach.z(), -1.0, 1.0)) * 180.0 / std::numbers::pi
               << " deg";
        return finish(false, FailureReason::kGoalMissed, detail.str(), i + 1);
      }
      grasped = true;
      grasp_z = p.z();
    }
    if (grasped) {
      held = Eigen::Vector3d(bar.x(), bar.y(), bar.z() + (p.z() - grasp_z));
      if (p.z() >= grasp_z + c.lift_clearance) {
        return finish(true, FailureReason::kNone, "bar removed", i + 1);
      }
    }
  }
  return finish(false, FailureReason::kGoalMissed, grasped ? "bar not lifted clear" : "bar not grasped",
                n);
}

}  // namespace gpskill
