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

#include "gpskill/skill.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gpskill/errors.hpp"
#include "gpskill/so3.hpp"

namespace gpskill {
namespace {

constexpr std::string_view kDemoHeader = "t,px,py,pz,qw,qx,qy,qz";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("cannot parse number '" + std::string(field) + "'", line);
  }
  return v;
}

// Linear interpolation of a sampled column, clamped at the ends.
double interpolate(const Eigen::VectorXd& t, const Eigen::VectorXd& y, double x) {
  const Eigen::Index n = t.size();
  if (x <= t[0]) return y[0];
  if (x >= t[n - 1]) return y[n - 1];
  const auto* it = std::upper_bound(t.data(), t.data() + n, x);
  const Eigen::Index hi = it - t.data();
  const Eigen::Index lo = hi - 1;
  const double w = (x - t[lo]) / (t[hi] - t[lo]);
  return (1.0 - w) * y[lo] + w * y[hi];
}

}  // namespace

Matrix6Cols Demonstration::columns() const {
  Matrix6Cols c(timestamps.size(), kNumAxes);
  c.leftCols<3>() = positions;
  c.rightCols<3>() = rotation_vectors;
  return c;
}

Demonstration make_demonstration(const Eigen::VectorXd& timestamps, const Matrix3Cols& positions,
                                 const std::vector<Eigen::Quaterniond>& orientations) {
  const auto n = static_cast<std::size_t>(timestamps.size());
  if (static_cast<std::size_t>(positions.rows()) != n || orientations.size() != n) {
    throw InvalidArgument("demonstration columns differ in length");
  }
  if (n < kMinDemoSamples) {
    throw InvalidArgument("demonstration needs at least " + std::to_string(kMinDemoSamples) +
                          " samples, got " + std::to_string(n));
  }
  if (!timestamps.allFinite() || !positions.allFinite()) {
    throw InvalidArgument("demonstration contains non-finite values");
  }
  for (std::size_t i = 1; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (!(timestamps[ii] > timestamps[ii - 1])) {
      throw InvalidArgument("demonstration timestamps must be strictly increasing (sample " +
                            std::to_string(i) + ")");
    }
  }
  Demonstration demo;
  demo.timestamps = timestamps.array() - timestamps[0];
  demo.positions = positions;
  demo.orientations.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Quaterniond q = orientations[i];
    const double norm = q.coeffs().norm();
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kQuaternionNormTolerance) {
      throw InvalidArgument("quaternion at sample " + std::to_string(i) + " is not unit-norm");
    }
    if (!demo.orientations.empty() && demo.orientations.back().coeffs().dot(q.coeffs()) < 0.0) {
      q.coeffs() = -q.coeffs();
    }
    demo.orientations.push_back(q);
  }
  const auto rv = to_rotation_vectors(demo.orientations);
  demo.rotation_vectors.resize(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    demo.rotation_vectors.row(ii) = rv[i].transpose();
    if (i > 0 && (rv[i] - rv[i - 1]).norm() >= std::numbers::pi) {
      throw InvalidArgument("rotation changes by more than pi between samples " +
                            std::to_string(i - 1) + " and " + std::to_string(i));
    }
  }
  return demo;
}

Demonstration load_demonstration(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<double> t;
  std::vector<Eigen::Vector3d> p;
  std::vector<Eigen::Quaterniond> q;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") {
      view.remove_prefix(3);
    }
    view = trim(view);
    if (view.empty()) continue;
    if (!have_header) {
      std::string compact;
      for (char c : view) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != kDemoHeader) {
        throw ParseError("expected header '" + std::string(kDemoHeader) + "'", line_no);
      }
      have_header = true;
      continue;
    }
    std::array<double, 8> v{};
    std::size_t field = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view token =
          view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      if (field >= v.size()) throw ParseError("too many fields", line_no);
      v[field++] = parse_double(token, line_no);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != v.size()) {
      throw ParseError("expected 8 fields, got " + std::to_string(field), line_no);
    }
    for (double x : v) {
      if (!std::isfinite(x)) throw ParseError("non-finite value", line_no);
    }
    if (!t.empty() && !(v[0] > t.back())) {
      throw InvalidArgument("timestamps must be strictly increasing (line " +
                            std::to_string(line_no) + ")");
    }
    t.push_back(v[0]);
    p.emplace_back(v[1], v[2], v[3]);
    q.emplace_back(v[4], v[5], v[6], v[7]);
  }
  if (!have_header) throw ParseError("missing header", line_no == 0 ? 1 : line_no);
  Eigen::VectorXd tv = Eigen::Map<Eigen::VectorXd>(t.data(), static_cast<Eigen::Index>(t.size()));
  Matrix3Cols pm(static_cast<Eigen::Index>(p.size()), 3);
  for (std::size_t i = 0; i < p.size(); ++i) pm.row(static_cast<Eigen::Index>(i)) = p[i].transpose();
  return make_demonstration(tv, pm, q);
}

Demonstration load_demonstration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open demonstration file '" + path + "'");
  return load_demonstration(in);
}

void save_demonstration(std::ostream& out, const Demonstration& demo) {
  std::ostringstream buf;
  buf << std::setprecision(std::numeric_limits<double>::max_digits10);
  buf << kDemoHeader << '\n';
  for (std::size_t i = 0; i < demo.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto& q = demo.orientations[i];
    buf << demo.timestamps[ii] << ',' << demo.positions(ii, 0) << ',' << demo.positions(ii, 1) << ','
        << demo.positions(ii, 2) << ',' << q.w() << ',' << q.x() << ',' << q.y() << ',' << q.z()
        << '\n';
  }
  out << buf.str();
}

void save_demonstration_file(const std::string& path, const Demonstration& demo) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write demonstration file '" + path + "'");
  save_demonstration(out, demo);
}

void ViaPointSet::validate() const {
  if (times.size() < 2) throw InvalidArgument("via set needs at least two points");
  if (values.rows() != times.size()) throw InvalidArgument("via values and times differ in length");
  if (!times.allFinite() || !values.allFinite()) throw InvalidArgument("via set is not finite");
  for (Eigen::Index i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) throw InvalidArgument("via times must be strictly increasing");
  }
}

Eigen::VectorXd linear_via_times(double t0, double t1, int n) {
  if (n < 2) throw InvalidArgument("need at least two via points");
  if (!(t1 > t0)) throw InvalidArgument("via time range is empty");
  return Eigen::VectorXd::LinSpaced(n, t0, t1);
}

ViaBasis::ViaBasis(const Eigen::VectorXd& via_times, const KernelParams& params,
                   const Eigen::VectorXd& query_times)
    : query_times_(query_times) {
  params.validate();
  const Eigen::MatrixXd a = noisy_gram(via_times, params);
  const auto llt = factorize_spd(a);
  Eigen::MatrixXd d1;
  Eigen::MatrixXd d2;
  const Eigen::MatrixXd k = cross_covariance(query_times, via_times, params, &d1, &d2);
  // Phi = K_q A^-1, computed as (A^-1 K_q^T)^T since A is symmetric.
  value_ = checked_solve(llt, a, k.transpose()).transpose();
  first_ = checked_solve(llt, a, d1.transpose()).transpose();
  second_ = checked_solve(llt, a, d2.transpose()).transpose();
}

ViaFitResult fit_via_points(const Demonstration& demo, int n_via, const KernelParams& params,
                            const LmOptions& options) {
  if (n_via < 5) throw InvalidArgument("fit_via_points: n_via must be at least 5");
  if (demo.size() < kMinDemoSamples) throw InvalidArgument("fit_via_points: demonstration too short");
  params.validate();
  ViaFitResult result;
  result.via.times = linear_via_times(demo.timestamps[0], demo.duration(), n_via);
  result.via.values.resize(n_via, kNumAxes);
  const ViaBasis basis(result.via.times, params, demo.timestamps);
  const Matrix6Cols cols = demo.columns();
  result.converged = true;
  for (int axis = 0; axis < kNumAxes; ++axis) {
    const Eigen::VectorXd y = cols.col(axis);
    Eigen::VectorXd x0(n_via);
    for (int j = 0; j < n_via; ++j) x0[j] = interpolate(demo.timestamps, y, result.via.times[j]);
    const LmResult lm = levenberg_marquardt_linear(basis.value(), y, x0, options);
    result.via.values.col(axis) = lm.x;
    result.objective_history[static_cast<std::size_t>(axis)] = lm.objective_history;
    result.converged = result.converged && lm.converged;
    result.iterations = std::max(result.iterations, lm.iterations);
  }
  if (!result.converged) warn("fit_via_points: optimizer stopped at the iteration limit");
  return result;
}

SkillModel::SkillModel(ViaPointSet via, KernelParams params)
    : via_(std::move(via)), params_(params) {
  via_.validate();
  params_.validate();
  gps_.reserve(kNumAxes);
  for (int axis = 0; axis < kNumAxes; ++axis) {
    gps_.push_back(GpModel::fit(via_.times, via_.values.col(axis), params_));
  }
}

PoseTwistAccel SkillModel::query(double t) const {
  PoseTwistAccel out;
  for (int axis = 0; axis < kNumAxes; ++axis) {
    const QueryResult r = gps_[static_cast<std::size_t>(axis)].query(t);
    if (axis < 3) {
      out.position[axis] = r.mean;
      out.linear_velocity[axis] = r.first_deriv;
      out.linear_accel[axis] = r.second_deriv;
    } else {
      out.rotation_vector[axis - 3] = r.mean;
      out.rotvec_rate[axis - 3] = r.first_deriv;
      out.rotvec_accel[axis - 3] = r.second_deriv;
    }
  }
  return out;
}

Matrix6Cols SkillModel::via_means() const {
  Matrix6Cols m(via_.size(), kNumAxes);
  for (int j = 0; j < via_.size(); ++j) {
    for (int axis = 0; axis < kNumAxes; ++axis) {
      m(j, axis) = gps_[static_cast<std::size_t>(axis)].query(via_.times[j]).mean;
    }
  }
  return m;
}

PoseTwistAccel query_skill(const SkillModel& skill, double t) {
  if (t < skill.start_time() || t > skill.end_time()) {
    std::ostringstream msg;
    msg << "query time " << t << " extrapolates beyond the skill's time range";
    warn(msg.str());
  }
  return skill.query(t);
}

TrajectorySampler::TrajectorySampler(const Eigen::VectorXd& via_times, const KernelParams& params,
                                     const Eigen::VectorXd& query_times)
    : via_times_(via_times), basis_(via_times, params, query_times) {}

namespace {

Eigen::VectorXd uniform_times(double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("sampling step must be positive");
  const auto n = static_cast<Eigen::Index>(std::llround((t1 - t0) / dt)) + 1;
  return Eigen::VectorXd::LinSpaced(std::max<Eigen::Index>(n, 2), t0, t1);
}

}  // namespace

TrajectorySampler::TrajectorySampler(const SkillModel& skill, double dt)
    : TrajectorySampler(skill.via().times, skill.params(),
                        uniform_times(skill.start_time(), skill.end_time(), dt)) {}

Trajectory TrajectorySampler::sample(const ViaPointSet& via) const {
  if (via.times.size() != via_times_.size() || via.times != via_times_) {
    throw InvalidArgument("TrajectorySampler: via times differ from the cached basis");
  }
  Trajectory tr;
  tr.times = basis_.query_times();
  const Matrix6Cols v = basis_.value() * via.values;
  const Matrix6Cols d1 = basis_.first() * via.values;
  const Matrix6Cols d2 = basis_.second() * via.values;
  tr.positions = v.leftCols<3>();
  tr.rotation_vectors = v.rightCols<3>();
  tr.linear_velocity = d1.leftCols<3>();
  tr.rotvec_rate = d1.rightCols<3>();
  tr.linear_accel = d2.leftCols<3>();
  tr.rotvec_accel = d2.rightCols<3>();
  return tr;
}

Trajectory sample_trajectory(const SkillModel& skill, double dt) {
  return TrajectorySampler(skill, dt).sample(skill);
}

std::vector<int> nearest_via_indices(const SkillModel& skill,
                                     const std::vector<Eigen::Vector3d>& points) {
  const int n = skill.via().size();
  if (static_cast<int>(points.size()) > n) {
    throw InvalidArgument("more observations than via points");
  }
  const Matrix6Cols means = skill.via_means();
  std::vector<bool> claimed(static_cast<std::size_t>(n), false);
  std::vector<int> out;
  out.reserve(points.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (const auto& p : points) {
    for (int j = 0; j < n; ++j) {
      dist[static_cast<std::size_t>(j)] = (means.row(j).head<3>().transpose() - p).norm();
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
    });
    for (int j : order) {
      if (!claimed[static_cast<std::size_t>(j)]) {
        claimed[static_cast<std::size_t>(j)] = true;
        out.push_back(j);
        break;
      }
    }
  }
  return out;
}

SkillModel condition_on_tc(const SkillModel& skill, const TaskConfiguration& tc) {
  if (tc.observations.empty()) throw InvalidArgument("task configuration has no observations");
  std::vector<Eigen::Vector3d> points;
  points.reserve(tc.observations.size());
  for (const auto& obs : tc.observations) {
    if (!obs.position.allFinite()) throw InvalidArgument("non-finite observation");
    points.push_back(obs.position);
  }
  const std::vector<int> idx = nearest_via_indices(skill, points);
  const Matrix6Cols means = skill.via_means();
  ViaPointSet via = skill.via();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int j = idx[i];
    const auto& obs = tc.observations[i];
    for (int a = 0; a < 3; ++a) via.values(j, a) += obs.position[a] - means(j, a);
    if (obs.rotation_vector) {
      for (int a = 0; a < 3; ++a) via.values(j, 3 + a) += (*obs.rotation_vector)[a] - means(j, 3 + a);
    }
  }
  return SkillModel(std::move(via), skill.params());
}

}  // namespace gpskill
