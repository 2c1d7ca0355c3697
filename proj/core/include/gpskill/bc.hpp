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

#ifndef GPSKILL_BC_HPP_
#define GPSKILL_BC_HPP_

#include <random>
#include <vector>

#include <Eigen/Core>

#include "gpskill/adapt.hpp"
#include "gpskill/envs.hpp"
#include "gpskill/nn.hpp"
#include "gpskill/skill.hpp"

namespace gpskill {

// Largest via-point shift a learned policy may apply, per component.
inline constexpr double kMaxViaShift = 0.04;

// Policies shift the position columns of every via point, so a 15-point
// skill has 45 action components ordered via-major: (px, py, pz) of via 0,
// then via 1, and so on.
inline int position_action_dim(int n_via) { return 3 * n_via; }

// Clamps each component to [-kMaxViaShift, kMaxViaShift].
Eigen::VectorXd clamp_via_shift(const Eigen::VectorXd& delta);

// Adds a via-major position shift to the via points. Components at
// `frozen` via indices are ignored. The shift is clamped first.
ViaPointSet apply_via_shift(const ViaPointSet& via, const Eigen::VectorXd& delta,
                            const std::vector<int>& frozen = {});

struct BcState {
  Eigen::Vector3d d_o = Eigen::Vector3d::Zero();  // end effector to object
  Eigen::Vector3d d_g = Eigen::Vector3d::Zero();  // object to goal
  Eigen::Matrix<double, 6, 1> vector() const;
};

// The end effector is taken at the task's start pose.
BcState make_bc_state(const TaskConfiguration& tc);

// One row per pair. Actions are via-major position shifts relative to the
// vanilla-conditioned via points.
struct BcDataset {
  Eigen::MatrixXd states;   // n x 6
  Eigen::MatrixXd actions;  // n x 3 n_via
  int n_via = kDefaultViaCount;
  int requested = 0;
  int skipped = 0;  // Skill-GP runs that did not converge
  int size() const { return static_cast<int>(states.rows()); }
};

inline constexpr int kDeskScalePairs = 2000;
inline constexpr int kFullScalePairs = 30000;

struct ExpertDatasetOptions {
  bool include_zero_offset = true;  // first pair uses the nominal TC
  int threads = 0;                  // 0 selects the hardware concurrency
};

// Samples TCs from the environment, runs Skill-GP on each and records the
// clamped difference to vanilla conditioning. Throws InvalidArgument when
// n_pairs < 100.
BcDataset generate_expert_dataset(const Environment& env, const SkillGpAdapter& adapter,
                                  int n_pairs, std::mt19937_64& rng,
                                  const ExpertDatasetOptions& options = {});

// CSV with header s1..s6, dg1..dgK.
void save_dataset_csv(const std::string& path, const BcDataset& ds);
BcDataset load_dataset_csv(const std::string& path);

struct BcTrainConfig {
  int epochs = 200;
  int batch_size = 256;
  double learning_rate = 3e-4;
  std::vector<int> hidden = {256, 256};
  double heldout_fraction = 0.1;
};

// Regression policy from BC states to via shifts. Inputs and outputs are
// standardised with dataset statistics.
struct BcPolicy {
  Network net;
  Eigen::VectorXd state_mean;
  Eigen::VectorXd state_scale;
  Eigen::VectorXd action_mean;
  Eigen::VectorXd action_scale;
  int n_via = kDefaultViaCount;

  // Clamped via-major shift for one state.
  Eigen::VectorXd predict(const BcState& state) const;
};

struct BcTrainResult {
  BcPolicy policy;
  std::vector<double> epoch_loss;  // mean standardised training loss per epoch
  double train_mse = 0.0;          // metres^2, whole training split
  double heldout_mse = 0.0;        // metres^2, held-out split
  int train_size = 0;
  int heldout_size = 0;
};

// Splits 90/10 by the rng, trains with Adam on minibatches. Throws
// NumericFailure when an epoch loss exceeds 10 times the first.
BcTrainResult train_clone(const BcDataset& ds, const BcTrainConfig& config, std::mt19937_64& rng);

// Applies the policy's shift to the vanilla-conditioned skill. Anchor via
// points listed in `frozen` keep their values.
SkillModel clone_adapt(const BcPolicy& policy, const BcState& state, const SkillModel& conditioned,
                       const std::vector<int>& frozen = {});

}  // namespace gpskill

#endif  // GPSKILL_BC_HPP_
