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
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gpskill/adapt.hpp"
#include "gpskill/demo_gen.hpp"
#include "gpskill/errors.hpp"
#include "gpskill/metrics.hpp"
#include "test_support.hpp"

namespace gpskill {
namespace {

using testing::max_abs;

SkillModel fitted(DemoKind kind) { return SkillModel(fit_via_points(generate_demo(kind)).via); }

Observation obs_at(const SkillModel& s, int via, Role role,
                   const Eigen::Vector3d& shift = Eigen::Vector3d::Zero()) {
  return {role, s.via_means().row(via).head<3>().transpose() + shift, std::nullopt};
}

TaskConfiguration tc_with(const std::vector<Observation>& obs) {
  TaskConfiguration tc;
  tc.observations = obs;
  return tc;
}

TEST(SelectAnchors, SingleGoal) {
  SkillModel s = fitted(DemoKind::kSineArc);
  AnchorSet a = select_anchors(s, tc_with({obs_at(s, 13, Role::kGoal)}));
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a.indices[0], 13);
  EXPECT_LT((a.values.row(0) - s.via().values.row(13)).norm(), 1e-12);
}

TEST(SelectAnchors, StartContactGoalAreDistinct) {
  SkillModel s = fitted(DemoKind::kPushSweep);
  AnchorSet a = select_anchors(
      s, tc_with({obs_at(s, 0, Role::kStart), obs_at(s, 7, Role::kContact), obs_at(s, 12, Role::kGoal)}));
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a.indices, (std::vector<int>{0, 7, 12}));
  for (const auto& m : a.axis_mask) {
    EXPECT_TRUE(m[0] && m[1] && m[2]);
    EXPECT_FALSE(m[3] || m[4] || m[5]);
  }
}

TEST(SelectAnchors, EquidistantTieGoesToLowerIndex) {
  ViaPointSet via;
  via.times = linear_via_times(0.0, 10.0, 9);
  via.values = Matrix6Cols::Zero(9, kNumAxes);
  for (int i = 0; i < 9; ++i) via.values(i, 1) = 0.2 * i;
  SkillModel s(via);
  Matrix6Cols m = s.via_means();
  Eigen::Vector3d mid = 0.5 * (m.row(4).head<3>() + m.row(5).head<3>()).transpose();
  AnchorSet a = select_anchors(s, tc_with({{Role::kGoal, mid, std::nullopt}}));
  EXPECT_EQ(a.indices[0], 4);
}

TEST(SelectAnchors, TooManyObservationsRejected) {
  std::mt19937_64 rng(1);
  SkillModel s(testing::random_via(rng, 3));
  std::vector<Observation> obs(4, Observation{});
  EXPECT_THROW(select_anchors(s, tc_with(obs)), InvalidArgument);
}

TEST(SkillGpAdapt, ZeroOffsetIsIdempotent) {
  for (DemoKind kind : {DemoKind::kSineArc, DemoKind::kPushSweep, DemoKind::kLiftAndCarry,
                        DemoKind::kDrawerPull}) {
    SkillModel s = fitted(kind);
    SkillGpAdapter adapter(s);
    AnchorSet a = select_anchors(
        s, tc_with({obs_at(s, 0, Role::kStart), obs_at(s, 7, Role::kContact), obs_at(s, 12, Role::kGoal)}));
    AdaptResult r = adapter.adapt(s, a);
    EXPECT_LT(max_abs(r.via.values - s.via().values), 1e-6) << to_string(kind);
    EXPECT_LT(r.objective_history.front(), 1e-12) << to_string(kind);
  }
}

// Dense least squares over all free via values with the derivative
// operators obtained by finite differencing rebuilt skills.
ViaPointSet dense_oracle(const SkillModel& skill, const AnchorSet& anchors,
                         const SkillModel& demo, const Eigen::VectorXd& times, double lambda) {
  const int n = skill.via().size();
  const Eigen::Index nq = times.size();
  ViaPointSet out = skill.via();
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (int a = 0; a < kNumAxes; ++a) {
      if (anchors.axis_mask[i][static_cast<std::size_t>(a)]) {
        out.values(anchors.indices[i], a) = anchors.values(static_cast<Eigen::Index>(i), a);
      }
    }
  }
  // The mean is linear in the via values: unit responses give the operator.
  Eigen::MatrixXd d1(nq, n), d2(nq, n);
  for (int j = 0; j < n; ++j) {
    ViaPointSet unit;
    unit.times = skill.via().times;
    unit.values = Matrix6Cols::Zero(n, kNumAxes);
    unit.values(j, 0) = 1.0;
    SkillModel u(unit, skill.params());
    for (Eigen::Index q = 0; q < nq; ++q) {
      PoseTwistAccel p = u.query(times[q]);
      d1(q, j) = p.linear_velocity.x();
      d2(q, j) = p.linear_accel.x();
    }
  }
  for (int a = 0; a < kNumAxes; ++a) {
    Eigen::VectorXd v(nq), acc(nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
      PoseTwistAccel p = demo.query(times[q]);
      v[q] = a < 3 ? p.linear_velocity[a] : p.rotvec_rate[a - 3];
      acc[q] = a < 3 ? p.linear_accel[a] : p.rotvec_accel[a - 3];
    }
    std::vector<int> free;
    Eigen::VectorXd rv = v, ra = acc;
    for (int j = 0; j < n; ++j) {
      bool fixed = false;
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        fixed = fixed || (anchors.indices[i] == j && anchors.axis_mask[i][static_cast<std::size_t>(a)]);
      }
      if (fixed) {
        rv -= d1.col(j) * out.values(j, a);
        ra -= d2.col(j) * out.values(j, a);
      } else {
        free.push_back(j);
      }
    }
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd m(2 * nq, nf);
    Eigen::VectorXd rhs(2 * nq);
    for (Eigen::Index k = 0; k < nf; ++k) {
      m.col(k).head(nq) = d1.col(free[static_cast<std::size_t>(k)]);
      m.col(k).tail(nq) = std::sqrt(lambda) * d2.col(free[static_cast<std::size_t>(k)]);
    }
    rhs.head(nq) = rv;
    rhs.tail(nq) = std::sqrt(lambda) * ra;
    Eigen::VectorXd x = m.colPivHouseholderQr().solve(rhs);
    for (Eigen::Index k = 0; k < nf; ++k) out.values(free[static_cast<std::size_t>(k)], a) = x[k];
  }
  return out;
}

TEST(SkillGpAdapt, GoalOffsetMatchesDenseOracleAndKeepsVelocityProfile) {
  SkillModel s = fitted(DemoKind::kSineArc);
  AnchorSet a = select_anchors(
      s, tc_with({obs_at(s, 0, Role::kStart), obs_at(s, 12, Role::kGoal, Eigen::Vector3d(0.10, 0, 0))}));
  Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(201, s.start_time(), s.end_time());
  AdaptResult r = skill_gp_adapt(s, a, s, times);
  ViaPointSet oracle = dense_oracle(s, a, s, times, ObjectiveWeights{}.lambda_accel);
  EXPECT_LT(max_abs(r.via.values - oracle.values), 1e-6);

  SkillModel adapted(r.via, s.params());
  KinematicComparison cmp = compare_kinematics(adapted, s);
  EXPECT_GE(cmp.linear.mean_cosine, 0.98);
}

TEST(SkillGpAdapt, AnchorsAreBitIdenticalAndHonoured) {
  SkillModel s = fitted(DemoKind::kPushSweep);
  Eigen::Vector3d shift(0.06, -0.12, 0.0);
  AnchorSet a = select_anchors(
      s, tc_with({obs_at(s, 0, Role::kStart), obs_at(s, 7, Role::kContact, shift),
                  obs_at(s, 12, Role::kGoal, shift)}));
  SkillGpAdapter adapter(s);
  AdaptResult r = adapter.adapt(s, a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int ax = 0; ax < 3; ++ax) {
      EXPECT_EQ(r.via.values(a.indices[i], ax), a.values(static_cast<Eigen::Index>(i), ax));
    }
  }
  // Shifted observations snap to the nearest via, not necessarily 7 and 12.
  SkillModel adapted(r.via, s.params());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Eigen::Vector3d want = a.values.row(static_cast<Eigen::Index>(i)).head<3>().transpose();
    EXPECT_LT((adapted.query(s.via().times[a.indices[i]]).position - want).norm(), 0.02)
        << "via " << a.indices[i];
  }
}

TEST(SkillGpAdapt, ObjectiveNonIncreasing) {
  SkillModel s = fitted(DemoKind::kLiftAndCarry);
  AnchorSet a = select_anchors(
      s, tc_with({obs_at(s, 0, Role::kStart), obs_at(s, 8, Role::kContact, Eigen::Vector3d(0, 0.15, 0)),
                  obs_at(s, 12, Role::kGoal, Eigen::Vector3d(0, 0.15, 0))}));
  AdaptResult r = SkillGpAdapter(s).adapt(s, a);
  EXPECT_TRUE(r.converged);
  for (const auto& h : r.axis_objective_history) {
    for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1]);
  }
  for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
    EXPECT_LE(r.objective_history[i], r.objective_history[i - 1] + 1e-15);
  }
}

TEST(SkillGpAdapt, RejectsNegativeLambda) {
  SkillModel s = fitted(DemoKind::kSineArc);
  AnchorSet a = select_anchors(s, tc_with({obs_at(s, 0, Role::kStart)}));
  ObjectiveWeights w;
  w.lambda_accel = -1.0;
  Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(11, 0.0, 10.0);
  EXPECT_THROW(skill_gp_adapt(s, a, s, times, w), InvalidArgument);
}

TEST(SkillGpAdapt, CachedAdapterMatchesFreeFunction) {
  SkillModel s = fitted(DemoKind::kSineArc);
  AnchorSet a = select_anchors(
      s, tc_with({obs_at(s, 0, Role::kStart), obs_at(s, 12, Role::kGoal, Eigen::Vector3d(0, 0.05, 0))}));
  Eigen::VectorXd times = Eigen::VectorXd::LinSpaced(201, s.start_time(), s.end_time());
  AdaptResult direct = skill_gp_adapt(s, a, s, times);
  AdaptResult cached = SkillGpAdapter(s, times).adapt(s, a);
  EXPECT_LT(max_abs(direct.via.values - cached.via.values), 1e-12);
}

}  // namespace
}  // namespace gpskill
