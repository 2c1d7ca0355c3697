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

#ifndef GPSKILL_ADAPT_HPP_
#define GPSKILL_ADAPT_HPP_

#include <array>
#include <vector>

#include <Eigen/Core>

#include "gpskill/lsq.hpp"
#include "gpskill/skill.hpp"
#include "gpskill/task.hpp"

namespace gpskill {

// Via points pinned to observed task-configuration locations.
struct AnchorSet {
  std::vector<int> indices;
  // One row per anchor, six columns (positions then rotation vectors).
  Matrix6Cols values;
  // axis_mask[i][a] is true when anchor i pins axis a.
  std::vector<std::array<bool, kNumAxes>> axis_mask;

  std::size_t size() const { return indices.size(); }
};

struct ObjectiveWeights {
  double lambda_accel = 0.1;
};

struct AdaptResult {
  ViaPointSet via;
  // Sum over axes of the per-axis objectives, one entry per iteration.
  std::vector<double> objective_history;
  std::array<std::vector<double>, kNumAxes> axis_objective_history;
  bool converged = false;
  int iterations = 0;
};

// Nearest via point per observation (see nearest_via_indices). Anchored
// values displace the via point by the offset between the observation and
// the skill's current mean at that via time. Rotation axes are pinned only
// when the observation carries a rotation vector.
AnchorSet select_anchors(const SkillModel& skill, const TaskConfiguration& tc);

// Optimises the free via points of each axis to match the demonstration
// skill's first and second derivatives at target_times, holding anchors
// fixed. The start point is the skill's via set with anchors applied.
AdaptResult skill_gp_adapt(const SkillModel& skill, const AnchorSet& anchors,
                           const SkillModel& demo_skill, const Eigen::VectorXd& target_times,
                           const ObjectiveWeights& weights = {}, const LmOptions& options = {});

// Derivative targets at the demonstration's own timestamps.
inline AdaptResult skill_gp_adapt(const SkillModel& skill, const AnchorSet& anchors,
                                  const Demonstration& demo, const SkillModel& demo_skill,
                                  const ObjectiveWeights& weights = {},
                                  const LmOptions& options = {}) {
  return skill_gp_adapt(skill, anchors, demo_skill, demo.timestamps, weights, options);
}

// Caches the derivative bases for repeated adaptations of one skill.
class SkillGpAdapter {
 public:
  SkillGpAdapter(const SkillModel& demo_skill, const Eigen::VectorXd& target_times,
                 ObjectiveWeights weights = {}, LmOptions options = {});
  // Uniformly spaced target times (n_targets samples over the skill's range).
  SkillGpAdapter(const SkillModel& demo_skill, int n_targets = 201, ObjectiveWeights weights = {},
                 LmOptions options = {});

  AdaptResult adapt(const SkillModel& skill, const AnchorSet& anchors) const;
  AdaptResult adapt(const TaskConfiguration& tc) const;

  const SkillModel& demo_skill() const { return demo_skill_; }

 private:
  SkillModel demo_skill_;
  ViaBasis basis_;
  ObjectiveWeights weights_;
  LmOptions options_;
  Matrix6Cols vel_targets_;
  Matrix6Cols acc_targets_;
};

}  // namespace gpskill

#endif  // GPSKILL_ADAPT_HPP_
