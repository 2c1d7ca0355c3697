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

#ifndef GPSKILL_DEMO_GEN_HPP_
#define GPSKILL_DEMO_GEN_HPP_

#include <string_view>
#include <vector>

#include "gpskill/skill.hpp"
#include "gpskill/task.hpp"

namespace gpskill {

enum class DemoKind { kSineArc, kDrawerPull, kPushSweep, kLiftAndCarry };

inline constexpr double kDemoDuration = 10.0;
inline constexpr int kDemoSamples = 201;

std::string_view to_string(DemoKind kind);
DemoKind parse_demo_kind(std::string_view name);
std::vector<DemoKind> all_demo_kinds();

// The demonstration each simulator is calibrated against.
DemoKind canonical_demo(EnvKind env);

// Synthetic demonstration built from quintic Hermite keyframes.
Demonstration generate_demo(DemoKind kind, int n_samples = kDemoSamples,
                            double duration = kDemoDuration);

}  // namespace gpskill

#endif  // GPSKILL_DEMO_GEN_HPP_
