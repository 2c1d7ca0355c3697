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


#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "gpskill/errors.hpp"
#include "gpskill/gp.hpp"

namespace gpskill {
namespace {

constexpr double kPi = 3.14159265358979323846;

KernelParams noise_free() {
  KernelParams p;
  p.noise_variance = 0.0;
  return p;
}

TEST(Kernel, ZeroLag) {
  KernelValue v = kernel_eval(0.0, 0.0, {});
  EXPECT_DOUBLE_EQ(v.k, 1.0);
  EXPECT_DOUBLE_EQ(v.dk_dt, 0.0);
  EXPECT_NEAR(v.d2k_dt2, -1.0 / (0.66 * 0.66), 1e-12);
  EXPECT_NEAR(v.d2k_dt2, -2.2957, 1e-4);
}

TEST(Kernel, OneLengthscaleLag) {
  KernelValue v = kernel_eval(0.66, 0.0, {});
  EXPECT_NEAR(v.k, std::exp(-0.5), 1e-15);
  const double h = 1e-6;
  double fd = (kernel_eval(0.66 + h, 0.0, {}).k - kernel_eval(0.66 - h, 0.0, {}).k) / (2 * h);
  EXPECT_NEAR(v.dk_dt, fd, 1e-8);
}

TEST(Kernel, SymmetryAndAntisymmetry) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng);
    EXPECT_EQ(kernel_eval(a, b, {}).k, kernel_eval(b, a, {}).k);
    EXPECT_EQ(kernel_eval(a, b, {}).dk_dt, -kernel_eval(b, a, {}).dk_dt);
  }
}

TEST(Kernel, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  KernelParams p;
  p.signal_variance = 1.7;
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    double a = u(rng), b = u(rng);
    KernelValue v = kernel_eval(a, b, p);
    double k_plus = kernel_eval(a + h, b, p).k, k_minus = kernel_eval(a - h, b, p).k;
    EXPECT_NEAR(v.dk_dt, (k_plus - k_minus) / (2 * h), 1e-8);
    EXPECT_NEAR(v.d2k_dt2, (k_plus - 2 * v.k + k_minus) / (h * h), 1e-4);
  }
}

TEST(Kernel, RejectsBadParameters) {
  KernelParams p;
  p.lengthscale = 0.0;
  EXPECT_THROW(kernel_eval(0.0, 1.0, p), InvalidArgument);
  p = {};
  p.noise_variance = -1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p = {};
  p.signal_variance = std::numeric_limits<double>::infinity();
  EXPECT_THROW(p.validate(), InvalidArgument);
  EXPECT_THROW(kernel_eval(std::nan(""), 0.0, {}), InvalidArgument);
}

TEST(CrossCovariance, DerivativeMatricesMatchKernel) {
  Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(7, -1.0, 2.0);
  Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(5, 0.0, 1.5);
  Eigen::MatrixXd d1, d2;
  Eigen::MatrixXd k = cross_covariance(q, s, {}, &d1, &d2);
  for (int i = 0; i < q.size(); ++i) {
    for (int j = 0; j < s.size(); ++j) {
      KernelValue v = kernel_eval(q[i], s[j], {});
      EXPECT_DOUBLE_EQ(k(i, j), v.k);
      EXPECT_DOUBLE_EQ(d1(i, j), v.dk_dt);
      EXPECT_DOUBLE_EQ(d2(i, j), v.d2k_dt2);
    }
  }
}

TEST(Gram, PositiveDefiniteWithJitter) {
  // Coincident-looking support still factorizes thanks to the jitter.
  Eigen::VectorXd t(3);
  t << 0.0, 1e-4, 2e-4;
  Eigen::MatrixXd g = noisy_gram(t, noise_free());
  EXPECT_NO_THROW(factorize_spd(g));
  EXPECT_NEAR(g(0, 0), 1.0 + kGramJitter, 1e-15);
}

TEST(Gram, NonSpdMatrixRaisesNumericFailure) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(factorize_spd(a), NumericFailure);
}

TEST(Gram, CheckedSolveResidual) {
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(15, 0.0, 10.0);
  Eigen::MatrixXd g = noisy_gram(t, {});
  auto llt = factorize_spd(g);
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(15, 3);
  Eigen::MatrixXd x = checked_solve(llt, g, b);
  EXPECT_LE((g * x - b).norm() / (g.norm() * x.norm() + b.norm()), kSolveResidualTolerance);
}

TEST(Fit, NoiseFreeInterpolation) {
  Eigen::VectorXd t(2), y(2);
  t << 0.0, 1.0;
  y << 0.3, -0.7;
  GpModel m = GpModel::fit(t, y, noise_free());
  EXPECT_NEAR(m.query(0.0).mean, 0.3, 1e-6);
  EXPECT_NEAR(m.query(1.0).mean, -0.7, 1e-6);
}

TEST(Fit, SineSamplesMatchDenseOracle) {
  const int n = 15;
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
  Eigen::VectorXd y = (2.0 * kPi * t.array()).sin().matrix();
  KernelParams p;
  GpModel m = GpModel::fit(t, y, p);

  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k(i, j) = std::exp(-0.5 * std::pow((t[i] - t[j]) / 0.66, 2));
  }
  Eigen::MatrixXd a = k + (p.noise_variance + kGramJitter) * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd alpha = a.fullPivLu().solve(y);
  for (int i = 0; i < n; ++i) {
    double oracle = k.row(i).dot(alpha);
    EXPECT_NEAR(m.query(t[i]).mean, oracle, 1e-9);
    EXPECT_LE(std::abs(m.query(t[i]).mean - y[i]), 3.0 * std::sqrt(0.005));
  }
}

TEST(Fit, RejectsBadInput) {
  Eigen::VectorXd t(3), y(2);
  t << 0.0, 1.0, 2.0;
  y << 1.0, 2.0;
  EXPECT_THROW(GpModel::fit(t, y, {}), InvalidArgument);
  Eigen::VectorXd t2(2), y2(2);
  t2 << 1.0, 0.5;
  y2 << 1.0, 2.0;
  EXPECT_THROW(GpModel::fit(t2, y2, {}), InvalidArgument);
  t2 << 0.0, 1.0;
  y2 << 1.0, std::nan("");
  EXPECT_THROW(GpModel::fit(t2, y2, {}), InvalidArgument);
  Eigen::VectorXd t1(1), y1(1);
  t1 << 0.0;
  y1 << 1.0;
  EXPECT_THROW(GpModel::fit(t1, y1, {}), InvalidArgument);
}

TEST(Query, PriorReversionFarFromSupport) {
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(10, 0.0, 5.0);
  Eigen::VectorXd y = Eigen::VectorXd::Constant(10, 2.0);
  GpModel m = GpModel::fit(t, y, {});
  QueryResult r = m.query(5.0 + 20 * 0.66);
  EXPECT_NEAR(r.mean, 0.0, 1e-6);
  EXPECT_NEAR(r.first_deriv, 0.0, 1e-6);
}

TEST(Query, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ut(0.0, 10.0);
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(15, 0.0, 10.0);
  for (int s = 0; s < 20; ++s) {
    Eigen::VectorXd y(15);
    for (auto& v : y) v = u(rng);
    GpModel m = GpModel::fit(t, y, {});
    const double h = 1e-4;
    for (int i = 0; i < 20; ++i) {
      double tq = ut(rng);
      QueryResult r = m.query(tq), rp = m.query(tq + h), rm = m.query(tq - h);
      EXPECT_NEAR(r.first_deriv, (rp.mean - rm.mean) / (2 * h), 1e-5);
      EXPECT_NEAR(r.second_deriv, (rp.first_deriv - rm.first_deriv) / (2 * h), 1e-5);
    }
  }
}

TEST(Condition, OnCurrentMeanIsNoOp) {
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(8, 0.0, 4.0);
  Eigen::VectorXd y = (t.array() * 1.3).cos().matrix();
  GpModel m = GpModel::fit(t, y, {});
  // Fresh times; a support time is replaced instead (see DuplicateTimeReplaces).
  for (double t_o : {1.7, 0.3, 3.9}) {
    GpModel c = m.condition(t_o, m.query(t_o).mean);
    for (double tq = -1.0; tq <= 5.0; tq += 0.1) {
      EXPECT_NEAR(c.query(tq).mean, m.query(tq).mean, 1e-6) << "t_o=" << t_o;
    }
  }
}

TEST(Condition, DisplacedValueMatchesDenseRefit) {
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(8, 0.0, 4.0);
  Eigen::VectorXd y = (t.array() * 1.3).sin().matrix();
  GpModel m = GpModel::fit(t, y, {});
  const double t_o = 2.0, y_o = m.query(t_o).mean + 0.3;
  GpModel c = m.condition(t_o, y_o);
  EXPECT_LE(std::abs(c.query(t_o).mean - y_o), 3.0 * std::sqrt(0.005));

  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(t[i], y[i]);
  pts.emplace_back(t_o, y_o);
  std::sort(pts.begin(), pts.end());
  Eigen::VectorXd t2(9), y2(9);
  for (int i = 0; i < 9; ++i) {
    t2[i] = pts[i].first;
    y2[i] = pts[i].second;
  }
  GpModel oracle = GpModel::fit(t2, y2, {});
  for (double tq = 0.0; tq <= 4.0; tq += 0.25) {
    EXPECT_NEAR(c.query(tq).mean, oracle.query(tq).mean, 1e-9);
  }
}

TEST(Condition, DuplicateTimeReplaces) {
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(5, 0.0, 2.0);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(5);
  GpModel m = GpModel::fit(t, y, {});
  GpModel c = m.condition(1.0, 0.8);
  ASSERT_EQ(c.support_times().size(), 5);
  EXPECT_EQ(c.support_values()[2], 0.8);
  GpModel c2 = m.condition(1.0 + 0.5 * kDuplicateTimeTolerance, 0.8);
  EXPECT_EQ(c2.support_times().size(), 5);
  GpModel c3 = m.condition(2.5, 0.8);
  EXPECT_EQ(c3.support_times().size(), 6);
  EXPECT_THROW(m.condition(std::nan(""), 0.0), InvalidArgument);
}

TEST(Condition, QueryWithinThreeSigmaProperty) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5), ut(0.0, 10.0);
  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(15, 0.0, 10.0);
  for (int s = 0; s < 100; ++s) {
    Eigen::VectorXd y(15);
    for (auto& v : y) v = u(rng);
    GpModel m = GpModel::fit(t, y, {});
    double t_o = ut(rng), y_o = m.query(t_o).mean + 0.1 * u(rng);
    EXPECT_LE(std::abs(m.condition(t_o, y_o).query(t_o).mean - y_o), 3.0 * std::sqrt(0.005));
  }
}

}  // namespace
}  // namespace gpskill
