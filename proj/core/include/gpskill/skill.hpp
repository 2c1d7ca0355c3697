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

#ifndef GPSKILL_SKILL_HPP_
#define GPSKILL_SKILL_HPP_

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "gpskill/gp.hpp"
#include "gpskill/lsq.hpp"
#include "gpskill/task.hpp"

namespace gpskill {

inline constexpr int kNumAxes = 6;
inline constexpr std::array<std::string_view, kNumAxes> kAxisNames = {"px", "py", "pz",
                                                                      "rx", "ry", "rz"};
inline constexpr int kDefaultViaCount = 15;
inline constexpr std::size_t kMinDemoSamples = 20;
inline constexpr double kQuaternionNormTolerance = 1e-6;

using Matrix6Cols = Eigen::Matrix<double, Eigen::Dynamic, kNumAxes>;
using Matrix3Cols = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// A single timestamped 6-DoF demonstration. Timestamps are seconds measured
// from the first sample.
struct Demonstration {
  Eigen::VectorXd timestamps;
  Matrix3Cols positions;
  std::vector<Eigen::Quaterniond> orientations;
  Matrix3Cols rotation_vectors;

  std::size_t size() const { return static_cast<std::size_t>(timestamps.size()); }
  double duration() const { return timestamps[timestamps.size() - 1]; }
  // Positions followed by rotation vectors.
  Matrix6Cols columns() const;
};

// Validates and assembles a demonstration. Timestamps are shifted to start
// at zero, quaternion signs are made continuous and rotation vectors are
// derived. Throws InvalidArgument on fewer than kMinDemoSamples samples,
// non-increasing time, non-unit quaternions or non-finite data.
Demonstration make_demonstration(const Eigen::VectorXd& timestamps, const Matrix3Cols& positions,
                                 const std::vector<Eigen::Quaterniond>& orientations);

// Reads the CSV layout `t,px,py,pz,qw,qx,qy,qz`. Throws ParseError with the
// offending line on malformed input.
Demonstration load_demonstration(std::istream& in);
Demonstration load_demonstration_file(const std::string& path);
// Writes the same layout with round-trip precision.
void save_demonstration(std::ostream& out, const Demonstration& demo);
void save_demonstration_file(const std::string& path, const Demonstration& demo);

struct ViaPointSet {
  Eigen::VectorXd times;
  Matrix6Cols values;

  int size() const { return static_cast<int>(times.size()); }
  // Throws InvalidArgument on shape mismatch, non-finite values or
  // non-increasing times.
  void validate() const;
};

// n linearly spaced times on [t0, t1].
Eigen::VectorXd linear_via_times(double t0, double t1, int n);

// Linear maps from via-point values to the posterior mean and its first two
// time derivatives at fixed query times: mean = value() * column.
class ViaBasis {
 public:
  ViaBasis(const Eigen::VectorXd& via_times, const KernelParams& params,
           const Eigen::VectorXd& query_times);

  const Eigen::VectorXd& query_times() const { return query_times_; }
  const Eigen::MatrixXd& value() const { return value_; }
  const Eigen::MatrixXd& first() const { return first_; }
  const Eigen::MatrixXd& second() const { return second_; }

 private:
  Eigen::VectorXd query_times_;
  Eigen::MatrixXd value_;
  Eigen::MatrixXd first_;
  Eigen::MatrixXd second_;
};

struct ViaFitResult {
  ViaPointSet via;
  std::array<std::vector<double>, kNumAxes> objective_history;
  bool converged = false;
  int iterations = 0;
};

// Per-axis least squares over via-point values on n_via linearly spaced
// times spanning the demonstration, minimising the squared error between
// the GP mean and every demonstration sample.
ViaFitResult fit_via_points(const Demonstration& demo, int n_via = kDefaultViaCount,
                            const KernelParams& params = {}, const LmOptions& options = {});

struct PoseTwistAccel {
  Eigen::Vector3d position;
  Eigen::Vector3d rotation_vector;
  Eigen::Vector3d linear_velocity;
  Eigen::Vector3d rotvec_rate;
  Eigen::Vector3d linear_accel;
  Eigen::Vector3d rotvec_accel;
};

// Six GPs over a shared via-point time grid. A pure function of the via
// points and kernel parameters.
class SkillModel {
 public:
  SkillModel(ViaPointSet via, KernelParams params = {});

  const ViaPointSet& via() const { return via_; }
  const KernelParams& params() const { return params_; }
  const GpModel& gp(int axis) const { return gps_[static_cast<std::size_t>(axis)]; }
  double start_time() const { return via_.times[0]; }
  double end_time() const { return via_.times[via_.times.size() - 1]; }

  PoseTwistAccel query(double t) const;
  // Posterior means at the via times, one row per via point.
  Matrix6Cols via_means() const;

 private:
  ViaPointSet via_;
  KernelParams params_;
  std::vector<GpModel> gps_;
};

inline SkillModel build_skill(const ViaPointSet& via, const KernelParams& params = {}) {
  return SkillModel(via, params);
}
// Warns when t lies outside the via time range.
PoseTwistAccel query_skill(const SkillModel& skill, double t);

// Densely sampled skill: one row per sample time.
struct Trajectory {
  Eigen::VectorXd times;
  Matrix3Cols positions;
  Matrix3Cols rotation_vectors;
  Matrix3Cols linear_velocity;
  Matrix3Cols rotvec_rate;
  Matrix3Cols linear_accel;
  Matrix3Cols rotvec_accel;

  Eigen::Index size() const { return times.size(); }
};

// Samples skills with a cached basis. All skills passed to sample() must
// share the via times and kernel parameters given at construction.
class TrajectorySampler {
 public:
  TrajectorySampler(const Eigen::VectorXd& via_times, const KernelParams& params,
                    const Eigen::VectorXd& query_times);
  // Uniform samples at step dt from the first to the last via time.
  TrajectorySampler(const SkillModel& skill, double dt);

  Trajectory sample(const ViaPointSet& via) const;
  Trajectory sample(const SkillModel& skill) const { return sample(skill.via()); }
  const ViaBasis& basis() const { return basis_; }

 private:
  Eigen::VectorXd via_times_;
  ViaBasis basis_;
};

inline constexpr double kDefaultControlStep = 0.01;

Trajectory sample_trajectory(const SkillModel& skill, double dt = kDefaultControlStep);

// Via indices nearest (by queried position) to each point, processed in
// order. A point whose nearest index is already claimed takes the next
// nearest unclaimed index; distance ties go to the lower index. Throws
// InvalidArgument when there are more points than via points.
std::vector<int> nearest_via_indices(const SkillModel& skill,
                                     const std::vector<Eigen::Vector3d>& points);

// Vanilla conditioning: each observation moves its nearest via point by the
// displacement between the observation and the current mean at that via
// time, so the mean passes near the observation. Rotation columns move only
// when the observation carries a rotation vector.
SkillModel condition_on_tc(const SkillModel& skill, const TaskConfiguration& tc);

}  // namespace gpskill

#endif  // GPSKILL_SKILL_HPP_
