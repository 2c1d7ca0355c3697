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

#include "gpskill/task.hpp"

#include <string>

#include "gpskill/errors.hpp"

namespace gpskill {

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::kDot:
      return "dot";
    case EnvKind::kSCpt:
      return "s-cpt";
    case EnvKind::kDCpt:
      return "d-cpt";
    case EnvKind::kBmt:
      return "bmt";
  }
  return "unknown";
}

EnvKind parse_env_kind(std::string_view name) {
  if (name == "dot") return EnvKind::kDot;
  if (name == "s-cpt" || name == "cpt") return EnvKind::kSCpt;
  if (name == "d-cpt") return EnvKind::kDCpt;
  if (name == "bmt") return EnvKind::kBmt;
  throw InvalidArgument("unknown environment '" + std::string(name) + "'");
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kStart:
      return "start";
    case Role::kContact:
      return "contact";
    case Role::kGoal:
      return "goal";
  }
  return "unknown";
}

Role parse_role(std::string_view name) {
  if (name == "start") return Role::kStart;
  if (name == "contact") return Role::kContact;
  if (name == "goal") return Role::kGoal;
  throw InvalidArgument("unknown role '" + std::string(name) + "'");
}

}  // namespace gpskill
