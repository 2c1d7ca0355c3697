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

#ifndef GPSKILL_SO3_HPP_
#define GPSKILL_SO3_HPP_

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace gpskill {

// Below this rotation angle the series expansions are used.
inline constexpr double kSmallAngle = 1e-6;

// Skew-symmetric matrix [r]x such that [r]x v = r x v.
Eigen::Matrix3d hat(const Eigen::Vector3d& r);

// Exponential map from a rotation vector to a unit quaternion.
Eigen::Quaterniond rotvec_to_quaternion(const Eigen::Vector3d& r);

// Logarithm of a unit quaternion, angle in [0, pi].
Eigen::Vector3d quaternion_to_rotvec(const Eigen::Quaterniond& q);

// Left Jacobian of SO(3): J_l(r) = I + ((1 - cos p)/p^2)[r]x + ((p - sin p)/p^3)[r]x^2.
Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& r);

// Angular velocity of R(t) = exp([r(t)]x) given r and its time derivative.
Eigen::Vector3d rotvec_rate_to_angular_velocity(const Eigen::Vector3d& r,
                                                const Eigen::Vector3d& r_dot);

// Log map of each quaternion, choosing among the 2*pi-periodic
// representatives along the rotation axis the one nearest to the previous
// sample so that the series is continuous. Throws InvalidArgument on a
// zero-norm quaternion.
std::vector<Eigen::Vector3d> to_rotation_vectors(const std::vector<Eigen::Quaterniond>& quats);

}  // namespace gpskill

#endif  // GPSKILL_SO3_HPP_
