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

#ifndef GPSKILL_LSQ_HPP_
#define GPSKILL_LSQ_HPP_

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace gpskill {

struct LmOptions {
  int max_iterations = 200;
  double step_tolerance = 1e-8;
  double initial_damping = 1e-3;
  double min_damping = 1e-9;
  double max_damping = 1e12;
};

struct LmResult {
  Eigen::VectorXd x;
  // Objective ||r(x)||^2 at the start point and after every accepted step.
  std::vector<double> objective_history;
  bool converged = false;
  int iterations = 0;
};

// Residual r(x) and its Jacobian dr/dx.
using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Levenberg-Marquardt minimisation of ||r(x)||^2 with Marquardt diagonal
// scaling. A step is accepted only when it lowers the objective. Stops when
// the accepted step norm drops below step_tolerance (converged), when no
// damping level yields a decrease (converged, stationary to precision), or
// after max_iterations (not converged).
LmResult levenberg_marquardt(const ResidualFn& residual, const JacobianFn& jacobian,
                             const Eigen::VectorXd& x0, const LmOptions& options = {});

// Convenience form for residuals affine in x: r(x) = J x - b.
LmResult levenberg_marquardt_linear(const Eigen::MatrixXd& j, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& x0,
                                    const LmOptions& options = {});

}  // namespace gpskill

#endif  // GPSKILL_LSQ_HPP_
