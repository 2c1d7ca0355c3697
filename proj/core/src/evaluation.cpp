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

#include "gpskill/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <sstream>

#include "gpskill/errors.hpp"
#include "gpskill/metrics.hpp"
#include "json.hpp"
#include "parallel.hpp"

namespace gpskill {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kVanilla:
      return "vanilla";
    case Method::kSkillGp:
      return "skill-gp";
    case Method::kBc:
      return "bc";
    case Method::kGprl:
      return "gprl";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kVanilla, Method::kSkillGp, Method::kBc, Method::kGprl}) {
    if (name == to_string(m)) return m;
  }
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

std::vector<Method> parse_methods(std::string_view list) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    out.push_back(parse_method(list.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

Adapter::Adapter(Method method, const Environment& env, const SkillGpAdapter* skill_gp,
                 const BcPolicy* bc, const GprlPolicy* gprl)
    : method_(method), env_(&env), skill_gp_(skill_gp), bc_(bc), gprl_(gprl) {
  if (method == Method::kSkillGp && !skill_gp) throw InvalidArgument("skill-gp needs an adapter");
  if (method == Method::kBc && !bc) throw InvalidArgument("bc needs a policy");
  if (method == Method::kGprl && !gprl) throw InvalidArgument("gprl needs a policy");
}

SkillModel Adapter::adapt(const TaskConfiguration& tc) const {
  return adapt(tc, env_->demo_skill().start_time(), tc.start_pose.position);
}

SkillModel Adapter::adapt(const TaskConfiguration& tc, double t_now,
                          const Eigen::Vector3d& end_effector) const {
  const SkillModel& demo = env_->demo_skill();
  if (method_ == Method::kSkillGp) return SkillModel(skill_gp_->adapt(tc).via, demo.params());
  SkillModel vanilla = condition_on_tc(demo, tc);
  if (method_ == Method::kVanilla) return vanilla;
  const std::vector<int> frozen = select_anchors(demo, tc).indices;
  const Eigen::Vector3d d_o = tc.object_pose.position - end_effector;
  const Eigen::Vector3d d_g = tc.goal_pose.position - tc.object_pose.position;
  if (method_ == Method::kBc) {
    BcState s;
    s.d_o = d_o;
    s.d_g = d_g;
    return clone_adapt(*bc_, s, vanilla, frozen);
  }
  const double t_s = (t_now - demo.start_time()) / (demo.end_time() - demo.start_time());
  return gprl_adapt(*gprl_, build_rl_state(d_o, d_g, t_s, vanilla), vanilla, frozen);
}

std::uint64_t tc_seed(std::uint64_t base, int index) {
  // splitmix64 of the base offset by the index.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

TaskConfiguration evaluation_tc(const Environment& env, std::uint64_t base, int index) {
  std::mt19937_64 rng(tc_seed(base, index));
  return env.sample_tc(rng);
}

EvalReport evaluate(const Environment& env, const std::vector<Method>& methods,
                    const EvalOptions& options) {
  if (options.n <= 0) throw InvalidArgument("evaluation needs at least one TC");
  if (methods.empty()) throw InvalidArgument("evaluation needs at least one method");
  std::unique_ptr<SkillGpAdapter> skill_gp;
  if (std::find(methods.begin(), methods.end(), Method::kSkillGp) != methods.end()) {
    skill_gp = std::make_unique<SkillGpAdapter>(env.demo_skill());
  }
  const RewardModel reward(env);
  const SkillModel& demo = env.demo_skill();
  const auto n = static_cast<std::size_t>(options.n);
  EvalReport report;
  report.rows.resize(methods.size() * n);
  for (std::size_t m = 0; m < methods.size(); ++m) {
    const Adapter adapter(methods[m], env, skill_gp.get(), options.bc, options.gprl);
    detail::parallel_for(n, options.threads, [&](std::size_t i) {
      const int index = static_cast<int>(i);
      const TaskConfiguration tc = evaluation_tc(env, options.seed, index);
      const auto t0 = std::chrono::steady_clock::now();
      const SkillModel skill = adapter.adapt(tc);
      const double latency =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      Trajectory current = env.sample(skill);
      const Trajectory initial = current;
      ReplanFn replan;
      if (env.kind() == EnvKind::kDCpt) {
        replan = [&](const TaskConfiguration& moved, double t_now) {
          const Eigen::VectorXd& times = current.times;
          const Eigen::Index k = std::min<Eigen::Index>(
              times.size() - 1,
              static_cast<Eigen::Index>(std::lround((t_now - times[0]) / env.config().control_step)));
          const Eigen::Vector3d ee = current.positions.row(std::max<Eigen::Index>(k, 0)).transpose();
          current = env.sample(adapter.adapt(moved, t_now, ee));
          return current;
        };
      }
      const EpisodeOutcome outcome = env.rollout(initial, tc, replan);
      const KinematicComparison kin = compare_kinematics(skill, demo);
      EvalRow& row = report.rows[m * n + i];
      row.method = methods[m];
      row.env = env.kind();
      row.seed = tc_seed(options.seed, index);
      row.tc_offset = tc.offset.norm();
      row.success = outcome.success;
      row.mean_cosine_linear = kin.linear.mean_cosine;
      row.mean_cosine_angular = kin.angular.mean_cosine;
      row.mean_abs_vel_err = kin.linear.mean_abs_magnitude_error;
      row.r_ss = reward.similarity(skill);
      row.adapt_latency = latency;
    });
  }
  return report;
}

void write_report_csv(std::ostream& out, const EvalReport& report, bool include_timing) {
  std::string header(kReportHeader);
  if (!include_timing) header = header.substr(0, header.rfind(','));
  out << header << '\n';
  std::ostringstream line;
  line.precision(10);
  for (const EvalRow& r : report.rows) {
    line.str("");
    line << to_string(r.method) << ',' << to_string(r.env) << ',' << r.seed << ',' << r.tc_offset << ','
         << (r.success ? 1 : 0) << ',' << r.mean_cosine_linear << ',' << r.mean_cosine_angular << ','
         << r.mean_abs_vel_err << ',' << r.r_ss;
    if (include_timing) line << ',' << r.adapt_latency;
    out << line.str() << '\n';
  }
}

std::vector<MethodSummary> summarize(const EvalReport& report) {
  std::vector<MethodSummary> out;
  for (const EvalRow& r : report.rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const MethodSummary& s) {
      return s.method == r.method && s.env == r.env;
    });
    if (it == out.end()) {
      out.push_back({r.method, r.env});
      it = out.end() - 1;
    }
    ++it->n;
    it->successes += r.success ? 1 : 0;
    it->mean_cosine_linear += r.mean_cosine_linear;
    it->mean_cosine_angular += r.mean_cosine_angular;
    it->mean_abs_vel_err += r.mean_abs_vel_err;
    it->mean_r_ss += r.r_ss;
    it->mean_adapt_latency += r.adapt_latency;
  }
  for (MethodSummary& s : out) {
    const double n = static_cast<double>(s.n);
    s.success_rate = s.successes / n;
    s.mean_cosine_linear /= n;
    s.mean_cosine_angular /= n;
    s.mean_abs_vel_err /= n;
    s.mean_r_ss /= n;
    s.mean_adapt_latency /= n;
  }
  return out;
}

std::string summary_json(const std::vector<MethodSummary>& summaries, std::uint64_t seed) {
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const MethodSummary& s : summaries) {
    methods.push_back({{"method", std::string(to_string(s.method))},
                       {"env", std::string(to_string(s.env))},
                       {"n", s.n},
                       {"successes", s.successes},
                       {"success_rate", s.success_rate},
                       {"mean_cosine_linear", s.mean_cosine_linear},
                       {"mean_cosine_angular", s.mean_cosine_angular},
                       {"mean_abs_vel_err", s.mean_abs_vel_err},
                       {"mean_r_ss", s.mean_r_ss}});
  }
  const nlohmann::ordered_json j = {{"report_schema", kReportSchemaVersion},
                                    {"seed", seed},
                                    {"results", methods}};
  return j.dump(2) + "\n";
}

}  // namespace gpskill
