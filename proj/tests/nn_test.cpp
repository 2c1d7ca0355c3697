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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gpskill/errors.hpp"
#include "gpskill/nn.hpp"

namespace gpskill {
namespace {

using MatD = NetworkD::Mat;
using MatF = Network::Mat;

// Relative error with a floor so that tiny gradients compare absolutely.
double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

TEST(Activation, NamesRoundTrip) {
  for (Activation a : {Activation::kRelu, Activation::kTanh, Activation::kLinear}) {
    EXPECT_EQ(parse_activation(to_string(a)), a);
  }
  EXPECT_THROW(parse_activation("gelu"), InvalidArgument);
}

TEST(Network, ZeroParametersGiveZeroOutput) {
  std::mt19937_64 rng(1);
  for (Activation h : {Activation::kRelu, Activation::kLinear, Activation::kTanh}) {
    Network net({4, 8, 3}, h, Activation::kLinear, rng);
    net.set_flat_parameters(Network::Vec::Zero(static_cast<Eigen::Index>(net.parameter_count())));
    Network::Vec y = net.forward(Network::Vec::Random(4));
    EXPECT_EQ(y, Network::Vec::Zero(3));
  }
}

TEST(Network, IdentityLinearLayer) {
  Network::Layer l{MatF::Identity(5, 5), Network::Vec::Zero(5), Activation::kLinear};
  Network net({l});
  Network::Vec x = Network::Vec::Random(5);
  EXPECT_EQ(net.forward(x), x);
}

TEST(Network, ShapeChecks) {
  Network::Layer a{MatF::Zero(3, 2), Network::Vec::Zero(3), Activation::kRelu};
  Network::Layer b{MatF::Zero(1, 4), Network::Vec::Zero(1), Activation::kLinear};
  EXPECT_THROW(Network({a, b}), InvalidArgument);
  std::mt19937_64 rng(2);
  Network net({2, 4, 1}, Activation::kRelu, Activation::kLinear, rng);
  EXPECT_THROW(net.forward(Network::Vec::Zero(3)), InvalidArgument);
  EXPECT_THROW(net.set_flat_parameters(Network::Vec::Zero(3)), InvalidArgument);
}

TEST(Network, BatchMatchesSingle) {
  std::mt19937_64 rng(3);
  Network net({3, 16, 16, 2}, Activation::kTanh, Activation::kLinear, rng);
  MatF x = MatF::Random(3, 7);
  MatF y = net.forward_batch(x);
  for (int j = 0; j < 7; ++j) EXPECT_LT((y.col(j) - net.forward(x.col(j))).norm(), 1e-6f);
}

TEST(Network, FlatParametersRoundTrip) {
  std::mt19937_64 rng(4);
  Network net({3, 5, 2}, Activation::kRelu, Activation::kLinear, rng);
  Network::Vec p = net.flat_parameters();
  EXPECT_EQ(static_cast<std::size_t>(p.size()), net.parameter_count());
  EXPECT_EQ(p.size(), 3 * 5 + 5 + 5 * 2 + 2);
  Network other({3, 5, 2}, Activation::kRelu, Activation::kLinear, rng);
  other.set_flat_parameters(p);
  EXPECT_EQ(other.flat_parameters(), p);
}

// Central finite differences of L = 0.5 sum(w .* y) against backward().
TEST(Network, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> width(1, 6), depth(0, 2), act(0, 2);
  const Activation acts[] = {Activation::kRelu, Activation::kTanh, Activation::kLinear};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> sizes = {width(rng)};
    for (int d = depth(rng); d >= 0; --d) sizes.push_back(width(rng));
    sizes.push_back(width(rng));
    NetworkD net(sizes, acts[act(rng)], acts[act(rng)], rng);
    const int batch = 3;
    MatD x = MatD::Random(sizes.front(), batch);
    MatD w = MatD::Random(sizes.back(), batch);
    NetworkD::Cache cache;
    net.forward_batch(x, cache);
    MatD d_input;
    NetworkD::Vec g = net.flatten(net.backward(cache, w, &d_input));

    auto loss = [&](const NetworkD& n, const MatD& in) { return n.forward_batch(in).cwiseProduct(w).sum(); };
    const double h = 1e-6;
    NetworkD::Vec p = net.flat_parameters();
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      NetworkD np = net, nm = net;
      NetworkD::Vec pp = p, pm = p;
      pp[k] += h;
      pm[k] -= h;
      np.set_flat_parameters(pp);
      nm.set_flat_parameters(pm);
      double fd = (loss(np, x) - loss(nm, x)) / (2 * h);
      EXPECT_LT(rel_err(g[k], fd), 1e-4) << "trial " << trial << " param " << k;
    }
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      MatD xp = x, xm = x;
      xp(k) += h;
      xm(k) -= h;
      double fd = (loss(net, xp) - loss(net, xm)) / (2 * h);
      EXPECT_LT(rel_err(d_input(k), fd), 1e-4) << "trial " << trial << " input " << k;
    }
  }
}

TEST(TrainStep, ZeroLossLeavesParametersUnchanged) {
  std::mt19937_64 rng(6);
  Network net({2, 8, 2}, Activation::kRelu, Activation::kLinear, rng);
  MatF x = MatF::Random(2, 16);
  MatF y = net.forward_batch(x);
  Network::Vec before = net.flat_parameters();
  Adam opt(net, 1e-2);
  float loss = train_step(net, x, y, opt);
  EXPECT_EQ(loss, 0.0f);
  EXPECT_EQ(net.flat_parameters(), before);
}

TEST(TrainStep, LinearRegressionSlope) {
  std::mt19937_64 rng(7);
  Network net({1, 1}, Activation::kLinear, Activation::kLinear, rng);
  Adam opt(net, 1e-2);
  MatF x = MatF::Zero(1, 32);
  for (int j = 0; j < 32; ++j) x(0, j) = -1.0f + 2.0f * static_cast<float>(j) / 31.0f;
  MatF y = 3.0f * x;
  for (int step = 0; step < 2000; ++step) train_step(net, x, y, opt);
  EXPECT_NEAR(net.layers()[0].weights(0, 0), 3.0, 0.01);
  EXPECT_NEAR(net.layers()[0].bias[0], 0.0, 0.01);
}

TEST(TrainStep, FixedSeedIsBitIdentical) {
  auto run = [] {
    std::mt19937_64 rng(8);
    Network net({3, 16, 2}, Activation::kRelu, Activation::kLinear, rng);
    Adam opt(net, 1e-3);
    std::normal_distribution<float> g;
    for (int step = 0; step < 50; ++step) {
      MatF x(3, 8), y(2, 8);
      for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = g(rng);
      for (Eigen::Index k = 0; k < y.size(); ++k) y(k) = g(rng);
      train_step(net, x, y, opt);
    }
    return net.flat_parameters();
  };
  EXPECT_EQ(run(), run());
}

TEST(TrainStep, NonFiniteLossRaises) {
  std::mt19937_64 rng(9);
  Network net({1, 1}, Activation::kLinear, Activation::kLinear, rng);
  Adam opt(net, 1e-3);
  MatF x = MatF::Ones(1, 2);
  MatF y = MatF::Constant(1, 2, std::numeric_limits<float>::quiet_NaN());
  EXPECT_THROW(train_step(net, x, y, opt), NumericFailure);
}

TEST(TrainStep, ShapeMismatchRaises) {
  std::mt19937_64 rng(10);
  Network net({2, 1}, Activation::kLinear, Activation::kLinear, rng);
  Adam opt(net, 1e-3);
  EXPECT_THROW(train_step(net, MatF::Ones(2, 4), MatF::Ones(1, 3), opt), InvalidArgument);
}

TEST(Log1mTanhSq, StableForLargeInputs) {
  for (double u : {-3.0, -0.5, 0.0, 0.2, 4.0}) {
    double t = std::tanh(u);
    EXPECT_NEAR(log1m_tanh_sq(u), std::log(1 - t * t), 1e-10);
  }
  EXPECT_NEAR(log1m_tanh_sq(50.0), std::log(4.0) - 100.0, 1e-9);
  EXPECT_TRUE(std::isfinite(log1m_tanh_sq(400.0f)));
}

TEST(GaussianPolicy, NearDeterministicFollowsMean) {
  std::mt19937_64 rng(11);
  Eigen::VectorXf mean(3), log_std = Eigen::VectorXf::Constant(3, -5.0f);
  mean << 0.3f, -1.2f, 2.0f;
  for (int i = 0; i < 100; ++i) {
    SquashedGaussianSample s = gaussian_policy_sample(mean, log_std, rng);
    // std e^-5 times a tanh slope of at most 1, with a seven sigma margin.
    EXPECT_LT((s.action - mean.array().tanh().matrix()).cwiseAbs().maxCoeff(), 0.05f);
  }
}

TEST(GaussianPolicy, ActionsStrictlyInsideBounds) {
  std::mt19937_64 rng(12);
  Eigen::VectorXf mean = Eigen::VectorXf::Constant(2, 20.0f);
  Eigen::VectorXf log_std = Eigen::VectorXf::Constant(2, 2.0f);
  for (int i = 0; i < 1000; ++i) {
    SquashedGaussianSample s = gaussian_policy_sample(mean, log_std, rng);
    EXPECT_LT(s.action.cwiseAbs().maxCoeff(), 1.0f);
    EXPECT_TRUE(std::isfinite(s.log_prob));
  }
}

TEST(GaussianPolicy, LogProbConsistentWithSample) {
  std::mt19937_64 rng(13);
  Eigen::VectorXf mean(2), log_std(2);
  mean << 0.1f, -0.4f;
  log_std << -0.3f, 0.2f;
  SquashedGaussianSample s = gaussian_policy_sample(mean, log_std, rng);
  EXPECT_NEAR(s.log_prob, squashed_log_prob(mean, log_std, s.pre_tanh), 1e-5f);
  Eigen::VectorXf u = mean + (log_std.array().exp() * s.noise.array()).matrix();
  EXPECT_LT((u - s.pre_tanh).norm(), 1e-6f);
}

// The fraction of samples in an interval matches the integral of the
// squashed density.
TEST(GaussianPolicy, MonteCarloMatchesDensity) {
  std::mt19937_64 rng(14);
  Eigen::VectorXf mean(1), log_std(1);
  mean << 0.4f;
  log_std << -0.2f;
  const double a0 = -0.2, a1 = 0.6;
  const int n = 200000;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    float a = gaussian_policy_sample(mean, log_std, rng).action[0];
    inside += (a >= a0 && a <= a1);
  }
  const int steps = 4000;
  double integral = 0.0;
  for (int k = 0; k < steps; ++k) {
    double a = a0 + (a1 - a0) * (k + 0.5) / steps;
    Eigen::VectorXf u(1);
    u << static_cast<float>(std::atanh(a));
    integral += std::exp(static_cast<double>(squashed_log_prob(mean, log_std, u))) * (a1 - a0) / steps;
  }
  EXPECT_NEAR(static_cast<double>(inside) / n, integral, 5e-3);
}

TEST(Adam, BiasCorrectedFirstStep) {
  Network::Layer l{MatF::Zero(1, 1), Network::Vec::Zero(1), Activation::kLinear};
  Network net({l});
  Adam opt(net, 0.1);
  Network::Gradients g = net.zero_gradients();
  g.d_weights[0](0, 0) = 5.0f;
  g.d_bias[0](0) = -0.01f;
  opt.step(net, g);
  // The first bias-corrected Adam step has magnitude lr regardless of scale.
  EXPECT_NEAR(net.layers()[0].weights(0, 0), -0.1f, 1e-5f);
  EXPECT_NEAR(net.layers()[0].bias(0), 0.1f, 1e-4f);
  EXPECT_EQ(opt.step_count(), 1);
}

}  // namespace
}  // namespace gpskill
