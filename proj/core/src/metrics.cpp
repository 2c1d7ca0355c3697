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

#include "gpskill/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gpskill/errors.hpp"
#include "gpskill/so3.hpp"

namespace gpskill {

double guarded_cosine(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double na = a.norm();
  const double nb = b.norm();
  const bool za = na < kZeroVelocityNorm;
  const bool zb = nb < kZeroVelocityNorm;
  if (za && zb) return 1.0;
  if (za || zb) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

SimilarityProfile compare_velocity_series(const Matrix3Cols& adapted, const Matrix3Cols& demo) {
  if (adapted.rows() != demo.rows()) throw InvalidArgument("velocity series differ in length");
  SimilarityProfile p;
  const Eigen::Index n = adapted.rows();
  p.cosine.resize(static_cast<std::size_t>(n));
  p.magnitude_error.resize(static_cast<std::size_t>(n));
  double sum_c = 0.0;
  double sum_e = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d a = adapted.row(i).transpose();
    const Eigen::Vector3d d = demo.row(i).transpose();
    const double c = guarded_cosine(a, d);
    const double e = std::abs(a.norm() - d.norm());
    p.cosine[static_cast<std::size_t>(i)] = c;
    p.magnitude_error[static_cast<std::size_t>(i)] = e;
    sum_c += c;
    sum_e += e;
  }
  if (n > 0) {
    p.mean_cosine = sum_c / static_cast<double>(n);
    p.mean_abs_magnitude_error = sum_e / static_cast<double>(n);
  }
  return p;
}

Matrix3Cols angular_velocities(const Matrix3Cols& rotation_vectors, const Matrix3Cols& rotvec_rate) {
  Matrix3Cols w(rotation_vectors.rows(), 3);
  for (Eigen::Index i = 0; i < rotation_vectors.rows(); ++i) {
    w.row(i) = rotvec_rate_to_angular_velocity(rotation_vectors.row(i).transpose(),
                                               rotvec_rate.row(i).transpose())
                   .transpose();
  }
  return w;
}

KinematicComparison compare_kinematics(const SkillModel& adapted, const SkillModel& demo_skill,
                                       int n_samples) {
  if (n_samples < 10) throw InvalidArgument("compare_kinematics: n_samples must be at least 10");
  const Eigen::VectorXd t =
      Eigen::VectorXd::LinSpaced(n_samples, demo_skill.start_time(), demo_skill.end_time());
  const Trajectory a = TrajectorySampler(adapted.via().times, adapted.params(), t).sample(adapted);
  const Trajectory d =
      TrajectorySampler(demo_skill.via().times, demo_skill.params(), t).sample(demo_skill);
  KinematicComparison out;
  out.linear = compare_velocity_series(a.linear_velocity, d.linear_velocity);
  out.angular = compare_velocity_series(angular_velocities(a.rotation_vectors, a.rotvec_rate),
                                        angular_velocities(d.rotation_vectors, d.rotvec_rate));
  return out;
}

}  // namespace gpskill
