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

#ifndef GPSKILL_TASK_HPP_
#define GPSKILL_TASK_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gpskill {

enum class EnvKind { kDot, kSCpt, kDCpt, kBmt };

// "dot", "s-cpt", "d-cpt", "bmt".
std::string_view to_string(EnvKind kind);
// Throws InvalidArgument on an unknown name.
EnvKind parse_env_kind(std::string_view name);

struct Pose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
};

enum class Role { kStart, kContact, kGoal };

std::string_view to_string(Role role);
Role parse_role(std::string_view name);

// An end-effector location the adapted skill must pass through.
struct Observation {
  Role role = Role::kStart;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  std::optional<Eigen::Vector3d> rotation_vector;
};

struct TaskConfiguration {
  EnvKind env = EnvKind::kSCpt;
  Pose start_pose;
  Pose object_pose;
  Pose goal_pose;
  // Deviation from the demonstrated configuration in the task subspace.
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();
  // Static obstacles (CPT obstacle disc centre, BMT second bar).
  std::vector<Pose> obstacles;
  // Seeds in-episode perturbations of dynamic environments.
  std::uint64_t perturbation_seed = 0;
  std::vector<Observation> observations;
};

}  // namespace gpskill

#endif  // GPSKILL_TASK_HPP_
