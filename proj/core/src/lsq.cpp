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

#include "gpskill/lsq.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Cholesky>

#include "gpskill/errors.hpp"

namespace gpskill {

LmResult levenberg_marquardt(const ResidualFn& residual, const JacobianFn& jacobian,
                             const Eigen::VectorXd& x0, const LmOptions& options) {
  LmResult result;
  result.x = x0;
  Eigen::VectorXd r = residual(result.x);
  double fx = r.squaredNorm();
  if (!std::isfinite(fx)) throw NumericFailure("non-finite initial objective");
  result.objective_history.push_back(fx);
  double mu = options.initial_damping;
  const Eigen::Index n = x0.size();
  if (n == 0) {
    result.converged = true;
    return result;
  }
  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    const Eigen::MatrixXd jm = jacobian(result.x);
    const Eigen::VectorXd g = jm.transpose() * r;
    const Eigen::MatrixXd h = jm.transpose() * jm;
    const Eigen::VectorXd hd = h.diagonal();
    bool accepted = false;
    Eigen::VectorXd step;
    while (true) {
      Eigen::MatrixXd damped = h;
      damped.diagonal().array() += mu * (hd.array() + 1e-12);
      step = -damped.ldlt().solve(g);
      const Eigen::VectorXd candidate = result.x + step;
      const Eigen::VectorXd rc = residual(candidate);
      const double fc = rc.squaredNorm();
      if (std::isfinite(fc) && fc < fx) {
        result.x = candidate;
        r = rc;
        fx = fc;
        mu = std::max(mu / 3.0, options.min_damping);
        accepted = true;
        break;
      }
      mu *= 4.0;
      if (mu > options.max_damping) break;
    }
    if (!accepted) {
      result.converged = true;
      return result;
    }
    result.objective_history.push_back(fx);
    if (step.norm() < options.step_tolerance) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

LmResult levenberg_marquardt_linear(const Eigen::MatrixXd& j, const Eigen::VectorXd& b,
                                    const Eigen::VectorXd& x0, const LmOptions& options) {
  return levenberg_marquardt([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return j * x - b; },
                             [&](const Eigen::VectorXd&) -> Eigen::MatrixXd { return j; }, x0,
                             options);
}

}  // namespace gpskill
