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

#include "gpskill/demo_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gpskill/errors.hpp"
#include "gpskill/so3.hpp"

namespace gpskill {
namespace {

struct Keyframe {
  double time;  // fraction of the duration
  Eigen::Vector3d value;
  Eigen::Vector3d rate;  // per second at the nominal 10 s duration
};

// Piecewise quintic Hermite interpolation with zero acceleration at knots.
Eigen::Vector3d hermite(const std::vector<Keyframe>& keys, double u, double duration) {
  const double t = u * duration;
  std::size_t s = 0;
  while (s + 2 < keys.size() && u >= keys[s + 1].time) ++s;
  const double t0 = keys[s].time * duration;
  const double t1 = keys[s + 1].time * duration;
  const double h = t1 - t0;
  const double x = std::clamp((t - t0) / h, 0.0, 1.0);
  const double x3 = x * x * x;
  const double x4 = x3 * x;
  const double x5 = x4 * x;
  const double h00 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5;
  const double h01 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5;
  const double h10 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5;
  const double h11 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5;
  // Rates are authored for a 10 s demonstration; rescale for other lengths.
  const double rate_scale = kDemoDuration / duration;
  return h00 * keys[s].value + h10 * h * rate_scale * keys[s].rate + h01 * keys[s + 1].value +
         h11 * h * rate_scale * keys[s + 1].rate;
}

Keyframe key(double t_seconds, Eigen::Vector3d v, Eigen::Vector3d r = Eigen::Vector3d::Zero()) {
  return {t_seconds / kDemoDuration, v, r};
}

struct DemoKeys {
  std::vector<Keyframe> position;
  std::vector<Keyframe> rotation;
};

DemoKeys keys_for(DemoKind kind) {
  using V = Eigen::Vector3d;
  DemoKeys k;
  switch (kind) {
    case DemoKind::kDrawerPull:
      k.position = {key(0.0, V(0.35, -0.20, 0.30)), key(3.5, V(0.52, -0.02, 0.16), V(0.05, 0.01, -0.01)),
                    key(5.2, V(0.62, 0.0, 0.15)), key(8.2, V(0.45, 0.0, 0.15), V(-0.05, 0.0, 0.0)),
                    key(10.0, V(0.40, 0.0, 0.22))};
      k.rotation = {key(0.0, V(0.0, 0.0, 0.0)), key(5.2, V(0.0, 0.2, 0.05)),
                    key(10.0, V(0.0, 0.2, 0.30))};
      break;
    case DemoKind::kPushSweep:
      k.position = {key(0.0, V(0.45, -0.45, 0.22)),
                    key(4.0, V(0.55, -0.36, 0.035), V(0.02, 0.05, -0.02)),
                    key(7.0, V(0.55, -0.10, 0.035), V(0.0, 0.14625, 0.0)),
                    key(8.6, V(0.55, 0.16, 0.035), V(0.0, 0.05, 0.02)),
                    key(10.0, V(0.55, 0.20, 0.20))};
      k.rotation = {key(0.0, V(0.0, 0.0, 0.0)), key(5.0, V(0.05, -0.05, 0.30)),
                    key(10.0, V(0.0, 0.0, 0.20))};
      break;
    case DemoKind::kLiftAndCarry:
      k.position = {key(0.0, V(0.35, -0.25, 0.30)), key(3.2, V(0.55, 0.0, 0.24), V(0.0, 0.0, -0.06)),
                    key(5.4, V(0.55, 0.0, 0.05), V(0.0, 0.0, -0.03)),
                    key(7.6, V(0.55, 0.0, 0.24), V(0.0, 0.0, 0.05)), key(10.0, V(0.42, -0.18, 0.30))};
      k.rotation = {key(0.0, V(0.0, 0.0, 0.0)), key(3.2, V(0.0, 0.0, 0.40), V(0.0, 0.0, 0.05)),
                    key(5.4, V(0.0, 0.0, 0.50)), key(10.0, V(0.20, 0.0, 0.60))};
      break;
    case DemoKind::kSineArc:
      break;
  }
  return k;
}

}  // namespace

std::string_view to_string(DemoKind kind) {
  switch (kind) {
    case DemoKind::kSineArc:
      return "sine-arc";
    case DemoKind::kDrawerPull:
      return "drawer-pull";
    case DemoKind::kPushSweep:
      return "push-sweep";
    case DemoKind::kLiftAndCarry:
      return "lift-and-carry";
  }
  return "unknown";
}

DemoKind parse_demo_kind(std::string_view name) {
  for (DemoKind k : all_demo_kinds()) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown demonstration kind '" + std::string(name) + "'");
}

std::vector<DemoKind> all_demo_kinds() {
  return {DemoKind::kSineArc, DemoKind::kDrawerPull, DemoKind::kPushSweep, DemoKind::kLiftAndCarry};
}

DemoKind canonical_demo(EnvKind env) {
  switch (env) {
    case EnvKind::kDot:
      return DemoKind::kDrawerPull;
    case EnvKind::kSCpt:
    case EnvKind::kDCpt:
      return DemoKind::kPushSweep;
    case EnvKind::kBmt:
      return DemoKind::kLiftAndCarry;
  }
  return DemoKind::kSineArc;
}

Demonstration generate_demo(DemoKind kind, int n_samples, double duration) {
  if (n_samples < static_cast<int>(kMinDemoSamples)) {
    throw InvalidArgument("generate_demo: too few samples");
  }
  if (!(duration > 0.0)) throw InvalidArgument("generate_demo: duration must be positive");
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n_samples, 0.0, duration);
  Matrix3Cols p(n_samples, 3);
  std::vector<Eigen::Quaterniond> q;
  q.reserve(static_cast<std::size_t>(n_samples));
  const DemoKeys keys = keys_for(kind);
  for (int i = 0; i < n_samples; ++i) {
    const double u = t[i] / duration;
    Eigen::Vector3d pos;
    Eigen::Vector3d rot;
    if (kind == DemoKind::kSineArc) {
      const double w = std::numbers::pi * u;
      pos = Eigen::Vector3d(0.40 + 0.20 * u, 0.15 * std::sin(w), 0.25 + 0.05 * std::sin(2.0 * w));
      rot = Eigen::Vector3d(0.20 * std::sin(w), 0.10 * std::sin(2.0 * w), 0.30 * u);
    } else {
      pos = hermite(keys.position, u, duration);
      rot = hermite(keys.rotation, u, duration);
    }
    p.row(i) = pos.transpose();
    q.push_back(rotvec_to_quaternion(rot));
  }
  return make_demonstration(t, p, q);
}

}  // namespace gpskill
