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

#ifndef GPSKILL_EVALUATION_HPP_
#define GPSKILL_EVALUATION_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "gpskill/adapt.hpp"
#include "gpskill/bc.hpp"
#include "gpskill/envs.hpp"
#include "gpskill/gprl.hpp"

namespace gpskill {

enum class Method { kVanilla, kSkillGp, kBc, kGprl };

// "vanilla", "skill-gp", "bc", "gprl".
std::string_view to_string(Method method);
Method parse_method(std::string_view name);
// Comma-separated list.
std::vector<Method> parse_methods(std::string_view list);

// Adapts the demonstration skill to task configurations with one method.
class Adapter {
 public:
  // Skill-GP requires `skill_gp`, bc requires `bc`, gprl requires `gprl`.
  // Referenced objects must outlive the adapter.
  Adapter(Method method, const Environment& env, const SkillGpAdapter* skill_gp = nullptr,
          const BcPolicy* bc = nullptr, const GprlPolicy* gprl = nullptr);
  Method method() const { return method_; }
  // Adapted skill for tc. t_now and the end-effector position describe the
  // decision point; the defaults are the start of the skill.
  SkillModel adapt(const TaskConfiguration& tc) const;
  SkillModel adapt(const TaskConfiguration& tc, double t_now, const Eigen::Vector3d& end_effector) const;

 private:
  Method method_;
  const Environment* env_;
  const SkillGpAdapter* skill_gp_;
  const BcPolicy* bc_;
  const GprlPolicy* gprl_;
};

inline constexpr int kReportSchemaVersion = 1;
inline constexpr std::string_view kReportHeader =
    "method,env,seed,tc_offset,success,mean_cosine_linear,mean_cosine_angular,mean_abs_vel_err,r_ss,"
    "adapt_latency";

struct EvalRow {
  Method method = Method::kVanilla;
  EnvKind env = EnvKind::kSCpt;
  std::uint64_t seed = 0;   // reproduces the TC through sample_tc
  double tc_offset = 0.0;   // offset norm, metres
  bool success = false;
  double mean_cosine_linear = 0.0;
  double mean_cosine_angular = 0.0;
  double mean_abs_vel_err = 0.0;  // linear speed error, m/s
  double r_ss = 0.0;
  double adapt_latency = 0.0;  // seconds, wall clock
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

struct EvalOptions {
  int n = 100;
  std::uint64_t seed = 0;
  int threads = 0;  // 0 selects the hardware concurrency
  const BcPolicy* bc = nullptr;
  const GprlPolicy* gprl = nullptr;
};

// Seed of the i-th task configuration drawn from a base seed.
std::uint64_t tc_seed(std::uint64_t base, int index);
// The i-th evaluation TC.
TaskConfiguration evaluation_tc(const Environment& env, std::uint64_t base, int index);

// Rows are grouped by method in the given order, then by TC index.
EvalReport evaluate(const Environment& env, const std::vector<Method>& methods,
                    const EvalOptions& options);

// CSV with kReportHeader. Timing is the last column and can be omitted.
void write_report_csv(std::ostream& out, const EvalReport& report, bool include_timing = true);

struct MethodSummary {
  Method method = Method::kVanilla;
  EnvKind env = EnvKind::kSCpt;
  int n = 0;
  int successes = 0;
  double success_rate = 0.0;
  double mean_cosine_linear = 0.0;
  double mean_cosine_angular = 0.0;
  double mean_abs_vel_err = 0.0;
  double mean_r_ss = 0.0;
  double mean_adapt_latency = 0.0;
};

std::vector<MethodSummary> summarize(const EvalReport& report);
// Deterministic JSON summary. Latencies are excluded.
std::string summary_json(const std::vector<MethodSummary>& summaries, std::uint64_t seed);

}  // namespace gpskill

#endif  // GPSKILL_EVALUATION_HPP_
