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
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gpskill/errors.hpp"
#include "gpskill/lsq.hpp"
#include "gpskill/so3.hpp"

namespace gpskill {
namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  return {0.5 * (m(2, 1) - m(1, 2)), 0.5 * (m(0, 2) - m(2, 0)), 0.5 * (m(1, 0) - m(0, 1))};
}

Eigen::Matrix3d rot(const Eigen::Vector3d& r) { return rotvec_to_quaternion(r).toRotationMatrix(); }

TEST(So3, IdentityLogIsZero) {
  EXPECT_EQ(quaternion_to_rotvec(Eigen::Quaterniond::Identity()), Eigen::Vector3d::Zero());
}

TEST(So3, QuarterTurnAboutZ) {
  Eigen::Quaterniond q(Eigen::AngleAxisd(kPi / 2, Eigen::Vector3d::UnitZ()));
  Eigen::Vector3d r = quaternion_to_rotvec(q);
  EXPECT_NEAR((r - Eigen::Vector3d(0, 0, kPi / 2)).norm(), 0.0, 1e-12);
}

TEST(So3, ExpLogRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    Eigen::Vector3d r(u(rng), u(rng), u(rng));
    r *= 3.0 / std::max(1.0, r.norm());
    Eigen::Vector3d back = quaternion_to_rotvec(rotvec_to_quaternion(r));
    EXPECT_LT((back - r).norm(), 1e-10);
  }
  EXPECT_LT((quaternion_to_rotvec(rotvec_to_quaternion(Eigen::Vector3d(1e-9, 0, 0))) -
             Eigen::Vector3d(1e-9, 0, 0)).norm(), 1e-20);
}

TEST(So3, SignFlipGivesSameRotationVector) {
  Eigen::Quaterniond q(Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()));
  Eigen::Quaterniond nq(-q.w(), -q.x(), -q.y(), -q.z());
  EXPECT_LT((quaternion_to_rotvec(q) - quaternion_to_rotvec(nq)).norm(), 1e-12);
}

TEST(So3, SlowSpinIsContinuous) {
  std::vector<Eigen::Quaterniond> qs;
  const int n = 400;
  const double total = 370.0 * kPi / 180.0;
  for (int i = 0; i < n; ++i) {
    qs.emplace_back(Eigen::AngleAxisd(total * i / (n - 1), Eigen::Vector3d::UnitX()));
  }
  std::vector<Eigen::Vector3d> r = to_rotation_vectors(qs);
  double max_step = 0.0;
  for (int i = 1; i < n; ++i) max_step = std::max(max_step, (r[i] - r[i - 1]).norm());
  EXPECT_LT(max_step, 0.2);
  EXPECT_NEAR(r.back().x(), total, 1e-9);
  for (int i = 0; i < n; ++i) {
    EXPECT_TRUE(rotvec_to_quaternion(r[i]).isApprox(qs[i], 1e-9) ||
                rotvec_to_quaternion(r[i]).coeffs().isApprox(-qs[i].coeffs(), 1e-9));
  }
}

TEST(So3, ZeroNormQuaternionRejected) {
  std::vector<Eigen::Quaterniond> qs = {Eigen::Quaterniond(0, 0, 0, 0)};
  EXPECT_THROW(to_rotation_vectors(qs), InvalidArgument);
}

TEST(LeftJacobian, IdentityAtZero) {
  Eigen::Vector3d rd(0.3, -0.2, 0.9);
  EXPECT_EQ(rotvec_rate_to_angular_velocity(Eigen::Vector3d::Zero(), rd), rd);
}

TEST(LeftJacobian, AxisIsInvariant) {
  Eigen::Vector3d r = Eigen::Vector3d(1, -2, 0.5).normalized() * 1.1;
  Eigen::Vector3d rd = 0.4 * r;
  EXPECT_LT((rotvec_rate_to_angular_velocity(r, rd) - rd).norm(), 1e-14);
}

TEST(LeftJacobian, MatchesNumericalExpMapDerivative) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector3d r(g(rng), g(rng), g(rng));
    r = r.normalized() * 1.2;
    Eigen::Vector3d rd(g(rng), g(rng), g(rng));
    Eigen::Matrix3d dr = (rot(r + h * rd) - rot(r - h * rd)) / (2 * h);
    Eigen::Vector3d omega = vee(dr * rot(r).transpose());
    EXPECT_LT((rotvec_rate_to_angular_velocity(r, rd) - omega).norm(), 1e-6);
  }
}

TEST(LeftJacobian, ContinuousAcrossSmallAngleSwitch) {
  Eigen::Vector3d axis = Eigen::Vector3d(0.2, 0.5, -1).normalized();
  Eigen::Matrix3d below = left_jacobian(axis * kSmallAngle * (1 - 1e-9));
  Eigen::Matrix3d above = left_jacobian(axis * kSmallAngle * (1 + 1e-9));
  EXPECT_LT((below - above).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Hat, CrossProduct) {
  Eigen::Vector3d a(1, 2, 3), b(-0.5, 0.1, 2);
  EXPECT_LT((hat(a) * b - a.cross(b)).norm(), 1e-15);
}

TEST(Lm, LinearProblemMatchesNormalEquations) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::MatrixXd j(20, 4);
  Eigen::VectorXd b(20);
  for (int i = 0; i < 20; ++i) {
    for (int k = 0; k < 4; ++k) j(i, k) = g(rng);
    b[i] = g(rng);
  }
  LmResult res = levenberg_marquardt_linear(j, b, Eigen::VectorXd::Zero(4));
  Eigen::VectorXd oracle = (j.transpose() * j).ldlt().solve(j.transpose() * b);
  EXPECT_TRUE(res.converged);
  EXPECT_LT((res.x - oracle).norm(), 1e-8);
}

TEST(Lm, RosenbrockObjectiveNonIncreasing) {
  ResidualFn r = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(2);
    out << 10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0];
    return out;
  };
  JacobianFn jac = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd out(2, 2);
    out << -20.0 * x[0], 10.0, -1.0, 0.0;
    return out;
  };
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  LmResult res = levenberg_marquardt(r, jac, x0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 1.0, 1e-6);
  EXPECT_NEAR(res.x[1], 1.0, 1e-6);
  for (std::size_t i = 1; i < res.objective_history.size(); ++i) {
    EXPECT_LE(res.objective_history[i], res.objective_history[i - 1]);
  }
}

TEST(Lm, IterationCapReportsNotConverged) {
  ResidualFn r = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd out(2);
    out << 10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0];
    return out;
  };
  JacobianFn jac = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd out(2, 2);
    out << -20.0 * x[0], 10.0, -1.0, 0.0;
    return out;
  };
  LmOptions opt;
  opt.max_iterations = 2;
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  LmResult res = levenberg_marquardt(r, jac, x0, opt);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.iterations, 2);
  EXPECT_LT(res.objective_history.back(), res.objective_history.front());
}

TEST(Lm, StartAtMinimumStaysThere) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  LmResult res = levenberg_marquardt_linear(j, b, b);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.x, b);
  EXPECT_EQ(res.objective_history.front(), 0.0);
}

}  // namespace
}  // namespace gpskill
