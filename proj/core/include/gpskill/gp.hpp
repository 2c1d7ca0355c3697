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

#ifndef GPSKILL_GP_HPP_
#define GPSKILL_GP_HPP_

#include <Eigen/Core>
#include <Eigen/Cholesky>

namespace gpskill {

// Diagonal jitter added to every Gram matrix before factorization.
inline constexpr double kGramJitter = 1e-9;
// Conditioning times closer than this to a support time replace its value.
inline constexpr double kDuplicateTimeTolerance = 1e-9;
// Bound on the normwise backward error of every cached solve.
inline constexpr double kSolveResidualTolerance = 1e-10;

struct KernelParams {
  double lengthscale = 0.66;       // seconds
  double noise_variance = 0.005;   // squared output units
  double signal_variance = 1.0;    // squared output units

  // Throws InvalidArgument unless lengthscale > 0, noise_variance >= 0 and
  // signal_variance > 0, all finite.
  void validate() const;

  friend bool operator==(const KernelParams&, const KernelParams&) = default;
};

// Squared-exponential covariance and its derivatives with respect to t.
struct KernelValue {
  double k;
  double dk_dt;
  double d2k_dt2;
};

KernelValue kernel_eval(double t, double t_prime, const KernelParams& params);

// Cross-covariance rows between query times and support times.
// Returns k (rows = queries), and optionally its first and second
// derivatives with respect to the query time.
Eigen::MatrixXd cross_covariance(const Eigen::VectorXd& query_times,
                                 const Eigen::VectorXd& support_times,
                                 const KernelParams& params,
                                 Eigen::MatrixXd* first_deriv = nullptr,
                                 Eigen::MatrixXd* second_deriv = nullptr);

// K(t, t) + (noise_variance + jitter) I.
Eigen::MatrixXd noisy_gram(const Eigen::VectorXd& support_times,
                           const KernelParams& params);

struct QueryResult {
  double mean;
  double first_deriv;
  double second_deriv;
};

// Zero-mean GP posterior mean over scalar time. Immutable after construction.
class GpModel {
 public:
  // Fits a model to (times, values). Times must be strictly increasing and
  // finite; at least two samples are required.
  static GpModel fit(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                     const KernelParams& params);

  QueryResult query(double t) const;

  // Returns a new model whose support additionally contains (t_o, y_o).
  // A support time within kDuplicateTimeTolerance of t_o has its value
  // replaced instead.
  GpModel condition(double t_o, double y_o) const;

  const Eigen::VectorXd& support_times() const { return times_; }
  const Eigen::VectorXd& support_values() const { return values_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const KernelParams& params() const { return params_; }

 private:
  GpModel() = default;

  Eigen::VectorXd times_;
  Eigen::VectorXd values_;
  Eigen::VectorXd alpha_;
  KernelParams params_;
};

inline GpModel fit_gp(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                      const KernelParams& params) {
  return GpModel::fit(times, values, params);
}
inline QueryResult query(const GpModel& model, double t) { return model.query(t); }
inline GpModel condition(const GpModel& model, double t_o, double y_o) {
  return model.condition(t_o, y_o);
}

// Factorizes a symmetric positive definite matrix, throwing NumericFailure
// when the factorization fails.
Eigen::LLT<Eigen::MatrixXd> factorize_spd(const Eigen::MatrixXd& a);

// Solves a x = b with a cached factorization and checks the normwise
// backward error against kSolveResidualTolerance.
Eigen::MatrixXd checked_solve(const Eigen::LLT<Eigen::MatrixXd>& llt,
                              const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace gpskill

#endif  // GPSKILL_GP_HPP_
