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

#include "gpskill/gp.hpp"

#include <cmath>
#include <sstream>

#include "gpskill/errors.hpp"

namespace gpskill {

void KernelParams::validate() const {
  if (!std::isfinite(lengthscale) || lengthscale <= 0.0) {
    throw InvalidArgument("lengthscale must be finite and positive");
  }
  if (!std::isfinite(noise_variance) || noise_variance < 0.0) {
    throw InvalidArgument("noise_variance must be finite and non-negative");
  }
  if (!std::isfinite(signal_variance) || signal_variance <= 0.0) {
    throw InvalidArgument("signal_variance must be finite and positive");
  }
}

KernelValue kernel_eval(double t, double t_prime, const KernelParams& params) {
  if (!std::isfinite(t) || !std::isfinite(t_prime)) {
    throw InvalidArgument("kernel_eval: non-finite time");
  }
  params.validate();
  const double l2 = params.lengthscale * params.lengthscale;
  const double d = t - t_prime;
  const double k = params.signal_variance * std::exp(-d * d / (2.0 * l2));
  return {k, -(d / l2) * k, (d * d / (l2 * l2) - 1.0 / l2) * k};
}

Eigen::MatrixXd cross_covariance(const Eigen::VectorXd& query_times,
                                 const Eigen::VectorXd& support_times,
                                 const KernelParams& params,
                                 Eigen::MatrixXd* first_deriv,
                                 Eigen::MatrixXd* second_deriv) {
  const Eigen::Index nq = query_times.size();
  const Eigen::Index ns = support_times.size();
  const double l2 = params.lengthscale * params.lengthscale;
  Eigen::MatrixXd k(nq, ns);
  if (first_deriv) first_deriv->resize(nq, ns);
  if (second_deriv) second_deriv->resize(nq, ns);
  for (Eigen::Index i = 0; i < nq; ++i) {
    for (Eigen::Index j = 0; j < ns; ++j) {
      const double d = query_times[i] - support_times[j];
      const double v = params.signal_variance * std::exp(-d * d / (2.0 * l2));
      k(i, j) = v;
      if (first_deriv) (*first_deriv)(i, j) = -(d / l2) * v;
      if (second_deriv) (*second_deriv)(i, j) = (d * d / (l2 * l2) - 1.0 / l2) * v;
    }
  }
  return k;
}

Eigen::MatrixXd noisy_gram(const Eigen::VectorXd& support_times,
                           const KernelParams& params) {
  Eigen::MatrixXd a = cross_covariance(support_times, support_times, params);
  a.diagonal().array() += params.noise_variance + kGramJitter;
  return a;
}

Eigen::LLT<Eigen::MatrixXd> factorize_spd(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw NumericFailure("Gram matrix is not positive definite after jitter");
  }
  return llt;
}

Eigen::MatrixXd checked_solve(const Eigen::LLT<Eigen::MatrixXd>& llt,
                              const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd x = llt.solve(b);
  if (!x.allFinite()) throw NumericFailure("non-finite solution");
  const double residual = (a * x - b).norm();
  const double scale = a.norm() * x.norm() + b.norm();
  if (scale > 0.0 && residual > kSolveResidualTolerance * scale) {
    std::ostringstream msg;
    msg << "solve residual " << residual / scale << " exceeds tolerance";
    throw NumericFailure(msg.str());
  }
  return x;
}

GpModel GpModel::fit(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                     const KernelParams& params) {
  params.validate();
  if (times.size() != values.size()) {
    throw InvalidArgument("fit_gp: times and values differ in length");
  }
  if (times.size() < 2) throw InvalidArgument("fit_gp: need at least two samples");
  if (!times.allFinite() || !values.allFinite()) {
    throw InvalidArgument("fit_gp: non-finite input");
  }
  for (Eigen::Index i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw InvalidArgument("fit_gp: times must be strictly increasing");
    }
  }
  GpModel model;
  model.times_ = times;
  model.values_ = values;
  model.params_ = params;
  const Eigen::MatrixXd a = noisy_gram(times, params);
  const auto llt = factorize_spd(a);
  model.alpha_ = checked_solve(llt, a, values);
  return model;
}

QueryResult GpModel::query(double t) const {
  if (!std::isfinite(t)) throw InvalidArgument("query: non-finite time");
  const double l2 = params_.lengthscale * params_.lengthscale;
  double mean = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  for (Eigen::Index j = 0; j < times_.size(); ++j) {
    const double d = t - times_[j];
    const double k = params_.signal_variance * std::exp(-d * d / (2.0 * l2));
    mean += k * alpha_[j];
    d1 += -(d / l2) * k * alpha_[j];
    d2 += (d * d / (l2 * l2) - 1.0 / l2) * k * alpha_[j];
  }
  return {mean, d1, d2};
}

GpModel GpModel::condition(double t_o, double y_o) const {
  if (!std::isfinite(t_o) || !std::isfinite(y_o)) {
    throw InvalidArgument("condition: non-finite observation");
  }
  const double lo = times_[0] - params_.lengthscale;
  const double hi = times_[times_.size() - 1] + params_.lengthscale;
  if (t_o < lo || t_o > hi) {
    std::ostringstream msg;
    msg << "conditioning time " << t_o << " lies outside the support range";
    warn(msg.str());
  }
  const Eigen::Index n = times_.size();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(times_[j] - t_o) <= kDuplicateTimeTolerance) {
      Eigen::VectorXd values = values_;
      values[j] = y_o;
      return fit(times_, values, params_);
    }
  }
  Eigen::VectorXd times(n + 1);
  Eigen::VectorXd values(n + 1);
  Eigen::Index out = 0;
  bool inserted = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!inserted && t_o < times_[j]) {
      times[out] = t_o;
      values[out] = y_o;
      ++out;
      inserted = true;
    }
    times[out] = times_[j];
    values[out] = values_[j];
    ++out;
  }
  if (!inserted) {
    times[out] = t_o;
    values[out] = y_o;
  }
  return fit(times, values, params_);
}

}  // namespace gpskill
