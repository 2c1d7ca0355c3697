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

#ifndef GPSKILL_SERIALIZATION_HPP_
#define GPSKILL_SERIALIZATION_HPP_

#include <string>

#include "gpskill/adapt.hpp"
#include "gpskill/bc.hpp"
#include "gpskill/envs.hpp"
#include "gpskill/gprl.hpp"
#include "gpskill/nn.hpp"
#include "gpskill/skill.hpp"

namespace gpskill {

inline constexpr int kFormatVersion = 1;

// Skill JSON:
//   {"format": "gpskill-skill", "version": 1,
//    "kernel": {"lengthscale", "noise_variance", "signal_variance"},
//    "via": {"times": [...], "columns": {"px": [...], ..., "rz": [...]}}}
std::string skill_to_json(const SkillModel& skill);
SkillModel skill_from_json(const std::string& text);
void save_skill_file(const std::string& path, const SkillModel& skill);
SkillModel load_skill_file(const std::string& path);

// Network JSON:
//   {"format": "gpskill-network", "version": 1,
//    "layers": [{"inputs", "outputs", "activation", "weights" (row-major),
//                "bias"}, ...]}
// Values round-trip exactly.
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

// Policy checkpoints wrap a network with its standardisation statistics:
//   {"format": "gpskill-bc-policy" | "gpskill-gprl-policy", "version": 1,
//    "n_via", "state_mean", "state_scale", ["action_mean", "action_scale"],
//    "network" | "actor": <network JSON object>}
std::string bc_policy_to_json(const BcPolicy& policy);
BcPolicy bc_policy_from_json(const std::string& text);
std::string gprl_policy_to_json(const GprlPolicy& policy);
GprlPolicy gprl_policy_from_json(const std::string& text);

// Partial JSON objects override the given defaults; unknown keys are
// rejected with InvalidArgument.
EnvConfig env_config_from_json(const std::string& text, EnvConfig defaults);
std::string env_config_to_json(const EnvConfig& config);
GprlConfig gprl_config_from_json(const std::string& text, GprlConfig defaults = {});
std::string gprl_config_to_json(const GprlConfig& config);
BcTrainConfig bc_config_from_json(const std::string& text, BcTrainConfig defaults = {});

std::string adapt_result_to_json(const AdaptResult& result);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gpskill

#endif  // GPSKILL_SERIALIZATION_HPP_
