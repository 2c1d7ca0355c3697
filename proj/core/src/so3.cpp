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

#include "gpskill/so3.hpp"

#include <cmath>
#include <numbers>

#include "gpskill/errors.hpp"

namespace gpskill {

Eigen::Matrix3d hat(const Eigen::Vector3d& r) {
  Eigen::Matrix3d m;
  m << 0.0, -r.z(), r.y(),
       r.z(), 0.0, -r.x(),
       -r.y(), r.x(), 0.0;
  return m;
}

Eigen::Quaterniond rotvec_to_quaternion(const Eigen::Vector3d& r) {
  const double phi = r.norm();
  if (phi < kSmallAngle) {
    Eigen::Quaterniond q(1.0, 0.5 * r.x(), 0.5 * r.y(), 0.5 * r.z());
    return q.normalized();
  }
  const Eigen::Vector3d axis = r / phi;
  return Eigen::Quaterniond(Eigen::AngleAxisd(phi, axis));
}

Eigen::Vector3d quaternion_to_rotvec(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in;
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Eigen::Vector3d v = q.vec();
  const double s = v.norm();
  if (s < kSmallAngle) {
    // atan2(s, w) ~ s / w, so r ~ 2 v / w.
    return 2.0 * v / q.w();
  }
  const double angle = 2.0 * std::atan2(s, q.w());
  return angle * v / s;
}

Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& r) {
  const double phi = r.norm();
  const Eigen::Matrix3d k = hat(r);
  double a;
  double b;
  if (phi < kSmallAngle) {
    const double p2 = phi * phi;
    a = 0.5 - p2 / 24.0;
    b = 1.0 / 6.0 - p2 / 120.0;
  } else {
    const double s_half = std::sin(0.5 * phi);
    a = 2.0 * s_half * s_half / (phi * phi);
    b = (phi - std::sin(phi)) / (phi * phi * phi);
  }
  return Eigen::Matrix3d::Identity() + a * k + b * k * k;
}

Eigen::Vector3d rotvec_rate_to_angular_velocity(const Eigen::Vector3d& r,
                                                const Eigen::Vector3d& r_dot) {
  return left_jacobian(r) * r_dot;
}

std::vector<Eigen::Vector3d> to_rotation_vectors(const std::vector<Eigen::Quaterniond>& quats) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<Eigen::Vector3d> out;
  out.reserve(quats.size());
  for (const auto& q_raw : quats) {
    const double n = q_raw.coeffs().norm();
    if (!std::isfinite(n) || n == 0.0) throw InvalidArgument("zero-norm quaternion");
    Eigen::Quaterniond q = q_raw;
    q.coeffs() /= n;
    Eigen::Vector3d r = quaternion_to_rotvec(q);
    if (!out.empty()) {
      const Eigen::Vector3d& prev = out.back();
      const double theta = r.norm();
      Eigen::Vector3d axis;
      if (theta > kSmallAngle) {
        axis = r / theta;
      } else if (prev.norm() > kSmallAngle) {
        axis = prev.normalized();
      } else {
        out.push_back(r);
        continue;
      }
      // Representatives are (theta + 2 pi k) * axis; pick k nearest prev.
      const double along = prev.dot(axis);
      const double k0 = std::round((along - theta) / kTwoPi);
      Eigen::Vector3d best = r;
      double best_d = (r - prev).squaredNorm();
      for (double k = k0 - 1.0; k <= k0 + 1.0; k += 1.0) {
        const Eigen::Vector3d cand = (theta + kTwoPi * k) * axis;
        const double d = (cand - prev).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = cand;
        }
      }
      r = best;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace gpskill
