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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gpskill/adapt.hpp"
#include "gpskill/demo_gen.hpp"
#include "gpskill/errors.hpp"
#include "gpskill/metrics.hpp"
#include "test_support.hpp"

namespace gpskill {
namespace {

Matrix3Cols random_series(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Matrix3Cols v(n, 3);
  for (int i = 0; i < n; ++i) v.row(i) << g(rng), g(rng), g(rng);
  return v;
}

TEST(GuardedCosine, ZeroGuards) {
  Eigen::Vector3d z = Eigen::Vector3d::Zero(), a(1, 0, 0);
  EXPECT_EQ(guarded_cosine(z, z), 1.0);
  EXPECT_EQ(guarded_cosine(z, a), 0.0);
  EXPECT_EQ(guarded_cosine(a, z), 0.0);
  EXPECT_NEAR(guarded_cosine(a, Eigen::Vector3d(0, 2, 0)), 0.0, 1e-15);
  EXPECT_NEAR(guarded_cosine(a, Eigen::Vector3d(-3, 0, 0)), -1.0, 1e-15);
}

TEST(CompareKinematics, SelfComparisonIsPerfect) {
  SkillModel s(fit_via_points(generate_demo(DemoKind::kLiftAndCarry)).via);
  KinematicComparison c = compare_kinematics(s, s);
  ASSERT_EQ(c.linear.cosine.size(), static_cast<std::size_t>(kDefaultMetricSamples));
  for (double v : c.linear.cosine) EXPECT_NEAR(v, 1.0, 1e-12);
  for (double v : c.angular.cosine) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_EQ(c.linear.mean_abs_magnitude_error, 0.0);
  EXPECT_EQ(c.angular.mean_abs_magnitude_error, 0.0);
}

TEST(CompareVelocity, DoubledVelocities) {
  std::mt19937_64 rng(1);
  Matrix3Cols demo = random_series(rng, 100);
  SimilarityProfile p = compare_velocity_series(2.0 * demo, demo);
  double mean_speed = demo.rowwise().norm().mean();
  for (double c : p.cosine) EXPECT_NEAR(c, 1.0, 1e-12);
  EXPECT_NEAR(p.mean_abs_magnitude_error, mean_speed, 1e-12);
}

TEST(CompareVelocity, CosineScaleInvariance) {
  std::mt19937_64 rng(2);
  Matrix3Cols a = random_series(rng, 80), b = random_series(rng, 80);
  SimilarityProfile base = compare_velocity_series(a, b);
  for (double c : {1e-3, 0.5, 7.0, 1e4}) {
    SimilarityProfile scaled = compare_velocity_series(c * a, b);
    for (std::size_t i = 0; i < base.cosine.size(); ++i) {
      EXPECT_NEAR(scaled.cosine[i], base.cosine[i], 1e-12);
    }
  }
}

TEST(CompareVelocity, CosineSymmetry) {
  std::mt19937_64 rng(3);
  Matrix3Cols a = random_series(rng, 50), b = random_series(rng, 50);
  SimilarityProfile ab = compare_velocity_series(a, b), ba = compare_velocity_series(b, a);
  for (std::size_t i = 0; i < ab.cosine.size(); ++i) EXPECT_EQ(ab.cosine[i], ba.cosine[i]);
  EXPECT_EQ(ab.mean_abs_magnitude_error, ba.mean_abs_magnitude_error);
}

TEST(CompareVelocity, ShapeMismatchRejected) {
  Matrix3Cols a = Matrix3Cols::Zero(5, 3), b = Matrix3Cols::Zero(6, 3);
  EXPECT_THROW(compare_velocity_series(a, b), InvalidArgument);
}

TEST(AngularVelocities, ZeroRotationPassesRatesThrough) {
  std::mt19937_64 rng(4);
  Matrix3Cols rate = random_series(rng, 10);
  Matrix3Cols r = Matrix3Cols::Zero(10, 3);
  EXPECT_EQ(angular_velocities(r, rate), rate);
}

TEST(CompareKinematics, SkillGpTenCentimetreOffset) {
  SkillModel s(fit_via_points(generate_demo(DemoKind::kPushSweep)).via);
  Matrix6Cols m = s.via_means();
  TaskConfiguration tc;
  Eigen::Vector3d shift(0.10, 0.0, 0.0);
  tc.observations = {{Role::kStart, m.row(0).head<3>().transpose(), std::nullopt},
                     {Role::kContact, m.row(7).head<3>().transpose() + shift, std::nullopt},
                     {Role::kGoal, m.row(12).head<3>().transpose() + shift, std::nullopt}};
  SkillModel adapted(SkillGpAdapter(s).adapt(tc).via, s.params());
  KinematicComparison c = compare_kinematics(adapted, s);
  EXPECT_GE(c.linear.mean_cosine, 0.95);
  EXPECT_GE(c.angular.mean_cosine, 0.95);
}

}  // namespace
}  // namespace gpskill
