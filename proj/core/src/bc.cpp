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

#include "gpskill/bc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "gpskill/errors.hpp"
#include "parallel.hpp"

namespace gpskill {

Eigen::VectorXd clamp_via_shift(const Eigen::VectorXd& delta) {
  return delta.cwiseMax(-kMaxViaShift).cwiseMin(kMaxViaShift);
}

ViaPointSet apply_via_shift(const ViaPointSet& via, const Eigen::VectorXd& delta,
                            const std::vector<int>& frozen) {
  if (delta.size() != position_action_dim(via.size())) {
    throw InvalidArgument("via shift has " + std::to_string(delta.size()) + " components, expected " +
                          std::to_string(position_action_dim(via.size())));
  }
  if (!delta.allFinite()) throw InvalidArgument("via shift is not finite");
  const Eigen::VectorXd clamped = clamp_via_shift(delta);
  ViaPointSet out = via;
  for (int j = 0; j < via.size(); ++j) {
    if (std::find(frozen.begin(), frozen.end(), j) != frozen.end()) continue;
    for (int a = 0; a < 3; ++a) out.values(j, a) += clamped[3 * j + a];
  }
  return out;
}

Eigen::Matrix<double, 6, 1> BcState::vector() const {
  Eigen::Matrix<double, 6, 1> v;
  v << d_o, d_g;
  return v;
}

BcState make_bc_state(const TaskConfiguration& tc) {
  BcState s;
  s.d_o = tc.object_pose.position - tc.start_pose.position;
  s.d_g = tc.goal_pose.position - tc.object_pose.position;
  return s;
}

BcDataset generate_expert_dataset(const Environment& env, const SkillGpAdapter& adapter,
                                  int n_pairs, std::mt19937_64& rng,
                                  const ExpertDatasetOptions& options) {
  if (n_pairs < 100) throw InvalidArgument("expert dataset needs at least 100 pairs");
  const SkillModel& demo = env.demo_skill();
  const int n_via = demo.via().size();
  const int dim = position_action_dim(n_via);
  std::vector<TaskConfiguration> tcs;
  tcs.reserve(static_cast<std::size_t>(n_pairs));
  for (int i = 0; i < n_pairs; ++i) {
    tcs.push_back(i == 0 && options.include_zero_offset ? env.nominal_tc() : env.sample_tc(rng));
  }
  std::vector<Eigen::VectorXd> actions(tcs.size());
  std::vector<char> ok(tcs.size(), 0);
  detail::parallel_for(tcs.size(), options.threads, [&](std::size_t i) {
    const SkillModel vanilla = condition_on_tc(demo, tcs[i]);
    const AdaptResult res = adapter.adapt(tcs[i]);
    if (!res.converged) return;
    Eigen::VectorXd a(dim);
    for (int j = 0; j < n_via; ++j) {
      for (int k = 0; k < 3; ++k) a[3 * j + k] = res.via.values(j, k) - vanilla.via().values(j, k);
    }
    actions[i] = clamp_via_shift(a);
    ok[i] = 1;
  });
  BcDataset ds;
  ds.n_via = n_via;
  ds.requested = n_pairs;
  const int kept = static_cast<int>(std::count(ok.begin(), ok.end(), 1));
  ds.skipped = n_pairs - kept;
  ds.states.resize(kept, 6);
  ds.actions.resize(kept, dim);
  int row = 0;
  for (std::size_t i = 0; i < tcs.size(); ++i) {
    if (!ok[i]) continue;
    ds.states.row(row) = make_bc_state(tcs[i]).vector().transpose();
    ds.actions.row(row) = actions[i].transpose();
    ++row;
  }
  if (ds.skipped > 0) {
    warn(std::to_string(ds.skipped) + " expert runs did not converge and were skipped");
  }
  return ds;
}

void save_dataset_csv(const std::string& path, const BcDataset& ds) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open '" + path + "' for writing");
  out.precision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < 6; ++i) out << (i ? "," : "") << 's' << i + 1;
  for (Eigen::Index k = 0; k < ds.actions.cols(); ++k) out << ",dg" << k + 1;
  out << '\n';
  for (int r = 0; r < ds.size(); ++r) {
    for (int i = 0; i < 6; ++i) out << (i ? "," : "") << ds.states(r, i);
    for (Eigen::Index k = 0; k < ds.actions.cols(); ++k) out << ',' << ds.actions(r, k);
    out << '\n';
  }
  if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

BcDataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset file", 1);
  const auto n_cols = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  const int dim = n_cols - 6;
  if (dim <= 0 || dim % 3 != 0 || line.rfind("s1,", 0) != 0) {
    throw ParseError("dataset header must be s1..s6 followed by dg1..dgK with K a multiple of 3", 1);
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, comma, v);
      if (ec != std::errc() || ptr != comma) throw ParseError("malformed number", line_no);
      row.push_back(v);
      p = comma + 1;
    }
    if (static_cast<int>(row.size()) != n_cols) throw ParseError("wrong column count", line_no);
    rows.push_back(std::move(row));
  }
  BcDataset ds;
  ds.n_via = dim / 3;
  ds.requested = static_cast<int>(rows.size());
  ds.states.resize(static_cast<Eigen::Index>(rows.size()), 6);
  ds.actions.resize(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < 6; ++c) ds.states(static_cast<Eigen::Index>(r), c) = rows[r][c];
    for (int c = 0; c < dim; ++c) ds.actions(static_cast<Eigen::Index>(r), c) = rows[r][6 + c];
  }
  return ds;
}

Eigen::VectorXd BcPolicy::predict(const BcState& state) const {
  const Eigen::VectorXd x = (state.vector() - state_mean).cwiseQuotient(state_scale);
  const Eigen::VectorXf y = net.forward(x.cast<float>());
  const Eigen::VectorXd a = y.cast<double>().cwiseProduct(action_scale) + action_mean;
  return clamp_via_shift(a);
}

namespace {

constexpr double kStateScaleFloor = 1e-6;
constexpr double kActionScaleFloor = 1e-3;

void column_stats(const Eigen::MatrixXd& m, const std::vector<int>& rows, double floor,
                  Eigen::VectorXd& mean, Eigen::VectorXd& scale) {
  mean = Eigen::VectorXd::Zero(m.cols());
  for (int r : rows) mean += m.row(r).transpose();
  mean /= static_cast<double>(rows.size());
  Eigen::VectorXd var = Eigen::VectorXd::Zero(m.cols());
  for (int r : rows) var += (m.row(r).transpose() - mean).cwiseAbs2();
  var /= static_cast<double>(rows.size());
  scale = var.cwiseSqrt().cwiseMax(floor);
}

double split_mse(const BcPolicy& policy, const BcDataset& ds, const std::vector<int>& rows) {
  double sum = 0.0;
  for (int r : rows) {
    BcState s;
    s.d_o = ds.states.row(r).head<3>().transpose();
    s.d_g = ds.states.row(r).tail<3>().transpose();
    sum += (policy.predict(s) - ds.actions.row(r).transpose()).squaredNorm();
  }
  return sum / (static_cast<double>(rows.size()) * static_cast<double>(ds.actions.cols()));
}

}  // namespace

BcTrainResult train_clone(const BcDataset& ds, const BcTrainConfig& config, std::mt19937_64& rng) {
  const int n = ds.size();
  if (n < 2) throw InvalidArgument("dataset needs at least two pairs");
  if (ds.actions.cols() != position_action_dim(ds.n_via)) {
    throw InvalidArgument("dataset action width does not match its via count");
  }
  if (config.epochs <= 0 || config.batch_size <= 0) {
    throw InvalidArgument("epochs and batch size must be positive");
  }
  if (!(config.heldout_fraction > 0.0 && config.heldout_fraction < 1.0)) {
    throw InvalidArgument("held-out fraction must lie in (0, 1)");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const int n_held = std::clamp(static_cast<int>(std::lround(config.heldout_fraction * n)), 1, n - 1);
  std::vector<int> held(order.begin(), order.begin() + n_held);
  std::vector<int> train(order.begin() + n_held, order.end());

  BcTrainResult result;
  BcPolicy& policy = result.policy;
  policy.n_via = ds.n_via;
  column_stats(ds.states, train, kStateScaleFloor, policy.state_mean, policy.state_scale);
  column_stats(ds.actions, train, kActionScaleFloor, policy.action_mean, policy.action_scale);

  const int dim = static_cast<int>(ds.actions.cols());
  std::vector<int> sizes = {6};
  sizes.insert(sizes.end(), config.hidden.begin(), config.hidden.end());
  sizes.push_back(dim);
  policy.net = Network(sizes, Activation::kRelu, Activation::kLinear, rng);
  Adam opt(policy.net, config.learning_rate);

  Eigen::MatrixXf xs(6, n);
  Eigen::MatrixXf ys(dim, n);
  for (int r = 0; r < n; ++r) {
    xs.col(r) = ((ds.states.row(r).transpose() - policy.state_mean).cwiseQuotient(policy.state_scale))
                    .cast<float>();
    ys.col(r) = ((ds.actions.row(r).transpose() - policy.action_mean).cwiseQuotient(policy.action_scale))
                    .cast<float>();
  }

  Eigen::MatrixXf bx;
  Eigen::MatrixXf by;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(train.begin(), train.end(), rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < train.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t count = std::min(train.size() - start, static_cast<std::size_t>(config.batch_size));
      bx.resize(6, static_cast<Eigen::Index>(count));
      by.resize(dim, static_cast<Eigen::Index>(count));
      for (std::size_t k = 0; k < count; ++k) {
        bx.col(static_cast<Eigen::Index>(k)) = xs.col(train[start + k]);
        by.col(static_cast<Eigen::Index>(k)) = ys.col(train[start + k]);
      }
      loss_sum += static_cast<double>(train_step(policy.net, bx, by, opt)) * static_cast<double>(count);
    }
    const double epoch_loss = loss_sum / static_cast<double>(train.size());
    result.epoch_loss.push_back(epoch_loss);
    if (epoch_loss > 10.0 * result.epoch_loss.front()) {
      throw NumericFailure("behaviour cloning diverged at epoch " + std::to_string(epoch));
    }
  }
  result.train_size = static_cast<int>(train.size());
  result.heldout_size = n_held;
  result.train_mse = split_mse(policy, ds, train);
  result.heldout_mse = split_mse(policy, ds, held);
  return result;
}

SkillModel clone_adapt(const BcPolicy& policy, const BcState& state, const SkillModel& conditioned,
                       const std::vector<int>& frozen) {
  if (policy.n_via != conditioned.via().size()) {
    throw InvalidArgument("policy via count does not match the skill");
  }
  return SkillModel(apply_via_shift(conditioned.via(), policy.predict(state), frozen),
                    conditioned.params());
}

}  // namespace gpskill
