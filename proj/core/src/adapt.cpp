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

#include "gpskill/adapt.hpp"

#include <algorithm>
#include <cmath>

#include "gpskill/errors.hpp"

namespace gpskill {

AnchorSet select_anchors(const SkillModel& skill, const TaskConfiguration& tc) {
  if (tc.observations.empty()) throw InvalidArgument("select_anchors: no observations");
  std::vector<Eigen::Vector3d> points;
  points.reserve(tc.observations.size());
  for (const auto& obs : tc.observations) points.push_back(obs.position);
  AnchorSet anchors;
  anchors.indices = nearest_via_indices(skill, points);
  const Matrix6Cols means = skill.via_means();
  anchors.values.resize(static_cast<Eigen::Index>(anchors.indices.size()), kNumAxes);
  for (std::size_t i = 0; i < anchors.indices.size(); ++i) {
    const int j = anchors.indices[i];
    const auto row = static_cast<Eigen::Index>(i);
    const auto& obs = tc.observations[i];
    std::array<bool, kNumAxes> mask{};
    anchors.values.row(row) = skill.via().values.row(j);
    for (int a = 0; a < 3; ++a) {
      anchors.values(row, a) += obs.position[a] - means(j, a);
      mask[static_cast<std::size_t>(a)] = true;
    }
    if (obs.rotation_vector) {
      for (int a = 0; a < 3; ++a) {
        anchors.values(row, 3 + a) += (*obs.rotation_vector)[a] - means(j, 3 + a);
        mask[static_cast<std::size_t>(3 + a)] = true;
      }
    }
    anchors.axis_mask.push_back(mask);
  }
  return anchors;
}

namespace {

AdaptResult run_adapt(const SkillModel& skill, const AnchorSet& anchors, const ViaBasis& basis,
                      const Matrix6Cols& vel_targets, const Matrix6Cols& acc_targets,
                      const ObjectiveWeights& weights, const LmOptions& options) {
  if (weights.lambda_accel < 0.0 || !std::isfinite(weights.lambda_accel)) {
    throw InvalidArgument("lambda_accel must be finite and non-negative");
  }
  const int n = skill.via().size();
  if (anchors.values.rows() != static_cast<Eigen::Index>(anchors.indices.size()) ||
      anchors.axis_mask.size() != anchors.indices.size()) {
    throw InvalidArgument("anchor set is inconsistent");
  }
  for (std::size_t i = 0; i < anchors.indices.size(); ++i) {
    const int j = anchors.indices[i];
    if (j < 0 || j >= n) throw InvalidArgument("anchor index out of range");
    for (std::size_t k = 0; k < i; ++k) {
      if (anchors.indices[k] == j) throw InvalidArgument("anchor indices must be unique");
    }
  }
  const Eigen::Index nq = basis.first().rows();
  const double s = std::sqrt(weights.lambda_accel);
  Eigen::MatrixXd d(2 * nq, n);
  d.topRows(nq) = basis.first();
  d.bottomRows(nq) = s * basis.second();

  AdaptResult result;
  result.via = skill.via();
  result.converged = true;
  for (int axis = 0; axis < kNumAxes; ++axis) {
    std::vector<bool> fixed(static_cast<std::size_t>(n), false);
    for (std::size_t i = 0; i < anchors.indices.size(); ++i) {
      if (anchors.axis_mask[i][static_cast<std::size_t>(axis)]) {
        const int j = anchors.indices[i];
        fixed[static_cast<std::size_t>(j)] = true;
        result.via.values(j, axis) = anchors.values(static_cast<Eigen::Index>(i), axis);
      }
    }
    std::vector<int> free_idx;
    for (int j = 0; j < n; ++j) {
      if (!fixed[static_cast<std::size_t>(j)]) free_idx.push_back(j);
    }
    Eigen::VectorXd target(2 * nq);
    target.head(nq) = vel_targets.col(axis);
    target.tail(nq) = s * acc_targets.col(axis);
    Eigen::VectorXd rhs = target;
    for (int j = 0; j < n; ++j) {
      if (fixed[static_cast<std::size_t>(j)]) rhs -= d.col(j) * result.via.values(j, axis);
    }
    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    Eigen::MatrixXd jf(2 * nq, nf);
    Eigen::VectorXd x0(nf);
    for (Eigen::Index k = 0; k < nf; ++k) {
      jf.col(k) = d.col(free_idx[static_cast<std::size_t>(k)]);
      x0[k] = result.via.values(free_idx[static_cast<std::size_t>(k)], axis);
    }
    const LmResult lm = levenberg_marquardt_linear(jf, rhs, x0, options);
    for (Eigen::Index k = 0; k < nf; ++k) {
      result.via.values(free_idx[static_cast<std::size_t>(k)], axis) = lm.x[k];
    }
    result.axis_objective_history[static_cast<std::size_t>(axis)] = lm.objective_history;
    result.converged = result.converged && lm.converged;
    result.iterations = std::max(result.iterations, lm.iterations);
  }
  std::size_t len = 0;
  for (const auto& h : result.axis_objective_history) len = std::max(len, h.size());
  result.objective_history.assign(len, 0.0);
  for (const auto& h : result.axis_objective_history) {
    for (std::size_t i = 0; i < len; ++i) {
      result.objective_history[i] += h.empty() ? 0.0 : h[std::min(i, h.size() - 1)];
    }
  }
  return result;
}

}  // namespace

AdaptResult skill_gp_adapt(const SkillModel& skill, const AnchorSet& anchors,
                           const SkillModel& demo_skill, const Eigen::VectorXd& target_times,
                           const ObjectiveWeights& weights, const LmOptions& options) {
  const ViaBasis basis(skill.via().times, skill.params(), target_times);
  const ViaBasis demo_basis(demo_skill.via().times, demo_skill.params(), target_times);
  const Matrix6Cols vel = demo_basis.first() * demo_skill.via().values;
  const Matrix6Cols acc = demo_basis.second() * demo_skill.via().values;
  return run_adapt(skill, anchors, basis, vel, acc, weights, options);
}

SkillGpAdapter::SkillGpAdapter(const SkillModel& demo_skill, const Eigen::VectorXd& target_times,
                               ObjectiveWeights weights, LmOptions options)
    : demo_skill_(demo_skill),
      basis_(demo_skill.via().times, demo_skill.params(), target_times),
      weights_(weights),
      options_(options) {
  vel_targets_ = basis_.first() * demo_skill_.via().values;
  acc_targets_ = basis_.second() * demo_skill_.via().values;
}

SkillGpAdapter::SkillGpAdapter(const SkillModel& demo_skill, int n_targets,
                               ObjectiveWeights weights, LmOptions options)
    : SkillGpAdapter(demo_skill,
                     Eigen::VectorXd::LinSpaced(n_targets, demo_skill.start_time(),
                                                demo_skill.end_time()),
                     weights, options) {}

AdaptResult SkillGpAdapter::adapt(const SkillModel& skill, const AnchorSet& anchors) const {
  const auto& t = skill.via().times;
  const auto& t_demo = demo_skill_.via().times;
  const bool same_grid = t.size() == t_demo.size() && t == t_demo;
  if (!same_grid || !(skill.params() == demo_skill_.params())) {
    return skill_gp_adapt(skill, anchors, demo_skill_, basis_.query_times(), weights_, options_);
  }
  return run_adapt(skill, anchors, basis_, vel_targets_, acc_targets_, weights_, options_);
}

AdaptResult SkillGpAdapter::adapt(const TaskConfiguration& tc) const {
  return adapt(demo_skill_, select_anchors(demo_skill_, tc));
}

}  // namespace gpskill
