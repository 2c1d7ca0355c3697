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

#ifndef GPSKILL_METRICS_HPP_
#define GPSKILL_METRICS_HPP_

#include <vector>

#include "gpskill/skill.hpp"

namespace gpskill {

inline constexpr int kDefaultMetricSamples = 200;
// Below this norm a velocity counts as zero for the cosine guard.
inline constexpr double kZeroVelocityNorm = 1e-9;

struct SimilarityProfile {
  std::vector<double> cosine;
  double mean_cosine = 0.0;
  std::vector<double> magnitude_error;
  double mean_abs_magnitude_error = 0.0;
};

struct KinematicComparison {
  SimilarityProfile linear;
  SimilarityProfile angular;
};

// Cosine with the zero-vector guard: 1 when both norms are below
// kZeroVelocityNorm, 0 when exactly one is.
double guarded_cosine(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

// Per-sample cosine and speed error between two velocity series.
SimilarityProfile compare_velocity_series(const Matrix3Cols& adapted, const Matrix3Cols& demo);

// Angular velocities (left Jacobian applied to rotation-vector rates).
Matrix3Cols angular_velocities(const Matrix3Cols& rotation_vectors, const Matrix3Cols& rotvec_rate);

// Samples both skills at n_samples uniform times over the demonstration
// skill's range and compares linear and angular velocities.
KinematicComparison compare_kinematics(const SkillModel& adapted, const SkillModel& demo_skill,
                                       int n_samples = kDefaultMetricSamples);

}  // namespace gpskill

#endif  // GPSKILL_METRICS_HPP_
