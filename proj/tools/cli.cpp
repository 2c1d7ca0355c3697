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

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpskill/adapt.hpp"
#include "gpskill/bc.hpp"
#include "gpskill/demo_gen.hpp"
#include "gpskill/envs.hpp"
#include "gpskill/errors.hpp"
#include "gpskill/evaluation.hpp"
#include "gpskill/gprl.hpp"
#include "gpskill/serialization.hpp"
#include "gpskill/skill.hpp"

namespace gpskill::cli {
namespace {

namespace fs = std::filesystem;

struct SkillSource {
  std::string demo;
  std::string skill;
  int n_via = kDefaultViaCount;
};

struct EnvSource {
  std::string env = "s-cpt";
  std::string env_config;
};

void add_skill_options(CLI::App* cmd, SkillSource& src) {
  cmd->add_option("--demo", src.demo, "Demonstration CSV (t,px,py,pz,qw,qx,qy,qz)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--skill", src.skill, "Skill JSON; overrides --demo")->check(CLI::ExistingFile);
  cmd->add_option("--n-via", src.n_via, "Via points when fitting a demonstration")
      ->check(CLI::PositiveNumber);
}

void add_env_options(CLI::App* cmd, EnvSource& src) {
  cmd->add_option("--env", src.env, "Environment: dot, s-cpt, d-cpt or bmt")
      ->check(CLI::IsMember({"dot", "s-cpt", "d-cpt", "bmt"}));
  cmd->add_option("--env-config", src.env_config, "JSON overrides for the simulator constants")
      ->check(CLI::ExistingFile);
}

// Loads a skill, fits one from a demonstration, or fits the canonical
// demonstration of the environment.
SkillModel resolve_skill(const SkillSource& src, EnvKind env) {
  if (!src.skill.empty()) return load_skill_file(src.skill);
  const Demonstration demo =
      src.demo.empty() ? generate_demo(canonical_demo(env)) : load_demonstration_file(src.demo);
  return SkillModel(fit_via_points(demo, src.n_via).via);
}

Environment make_env(const EnvSource& src, const SkillModel& skill) {
  const EnvKind kind = parse_env_kind(src.env);
  EnvConfig config = default_env_config(kind);
  if (!src.env_config.empty()) config = env_config_from_json(read_text_file(src.env_config), config);
  return Environment(kind, skill, config);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

double reconstruction_rmse(const Demonstration& demo, const SkillModel& skill, int first_col) {
  const Matrix6Cols cols = demo.columns();
  const TrajectorySampler sampler(skill.via().times, skill.params(), demo.timestamps);
  const Trajectory tr = sampler.sample(skill);
  const Matrix3Cols fitted = first_col == 0 ? tr.positions : tr.rotation_vectors;
  const Matrix3Cols err = fitted - cols.middleCols<3>(first_col);
  return std::sqrt(err.rowwise().squaredNorm().mean());
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Via-point GP skill modelling and adaptation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gpskill 0.1.0");

  // fit
  SkillSource fit_src;
  std::string fit_out;
  double lengthscale = KernelParams{}.lengthscale;
  auto* fit = app.add_subcommand("fit", "Fit via points to a demonstration and write a skill JSON");
  fit->add_option("--demo", fit_src.demo, "Demonstration CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--n-via", fit_src.n_via, "Number of via points")->check(CLI::PositiveNumber);
  fit->add_option("--lengthscale", lengthscale, "Kernel lengthscale in seconds")->check(CLI::PositiveNumber);
  fit->add_option("--out", fit_out, "Output skill JSON (stdout when omitted)");

  // adapt
  SkillSource adapt_src;
  EnvSource adapt_env;
  std::string method_name = "skill-gp";
  std::vector<double> offset;
  std::optional<std::uint64_t> adapt_seed;
  std::string policy_path;
  std::string adapt_out;
  auto* adapt = app.add_subcommand("adapt", "Adapt a skill to one task configuration");
  add_skill_options(adapt, adapt_src);
  add_env_options(adapt, adapt_env);
  adapt->add_option("--method", method_name, "vanilla, skill-gp, bc or gprl")
      ->check(CLI::IsMember({"vanilla", "skill-gp", "bc", "gprl"}));
  adapt->add_option("--offset", offset, "Task offset dx,dy in metres (default 0,0)")
      ->expected(2)
      ->delimiter(',');
  adapt->add_option("--seed", adapt_seed, "Sample the task configuration with this seed")->excludes("--offset");
  adapt->add_option("--policy", policy_path, "Policy checkpoint for bc or gprl")->check(CLI::ExistingFile);
  adapt->add_option("--out", adapt_out, "Output skill JSON (stdout when omitted)");

  // train-bc
  SkillSource bc_src;
  EnvSource bc_env;
  int bc_pairs = kDeskScalePairs;
  std::uint64_t bc_seed = 0;
  std::optional<int> bc_epochs;
  std::string bc_config;
  std::string bc_dataset;
  std::string bc_out = ".";
  bool full_scale = false;
  auto* train_bc = app.add_subcommand("train-bc", "Generate Skill-GP expert pairs and train a clone");
  add_skill_options(train_bc, bc_src);
  add_env_options(train_bc, bc_env);
  train_bc->add_option("--n", bc_pairs, "Expert pairs to generate")->check(CLI::Range(100, 10000000));
  train_bc->add_flag("--full-scale", full_scale, "Generate 30000 expert pairs");
  train_bc->add_option("--dataset", bc_dataset, "Train on an existing dataset CSV")->check(CLI::ExistingFile);
  train_bc->add_option("--epochs", bc_epochs, "Training epochs")->check(CLI::PositiveNumber);
  train_bc->add_option("--seed", bc_seed, "Random seed");
  train_bc->add_option("--config", bc_config, "Training config JSON")->check(CLI::ExistingFile);
  train_bc->add_option("--out", bc_out, "Output directory");

  // train-rl
  SkillSource rl_src;
  EnvSource rl_env;
  std::optional<std::uint64_t> rl_seed;
  std::optional<int> rl_episodes;
  std::string rl_config;
  std::string rl_out = ".";
  auto* train_rl = app.add_subcommand("train-rl", "Train a GPRL policy");
  add_skill_options(train_rl, rl_src);
  add_env_options(train_rl, rl_env);
  train_rl->add_option("--episodes", rl_episodes, "Training episodes")->check(CLI::PositiveNumber);
  train_rl->add_option("--seed", rl_seed, "Random seed");
  train_rl->add_option("--config", rl_config, "Training config JSON")->check(CLI::ExistingFile);
  train_rl->add_option("--out", rl_out, "Output directory");

  // eval
  SkillSource eval_src;
  EnvSource eval_env;
  std::string methods = "vanilla,skill-gp";
  int eval_n = 100;
  std::uint64_t eval_seed = 0;
  int threads = 0;
  std::string bc_policy;
  std::string rl_policy;
  std::string eval_out = ".";
  auto* eval = app.add_subcommand("eval", "Evaluate adaptation methods on seeded task configurations");
  add_skill_options(eval, eval_src);
  add_env_options(eval, eval_env);
  eval->add_option("--methods,--method", methods, "Comma-separated methods");
  eval->add_option("--n", eval_n, "Task configurations per method")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_seed, "Base seed");
  eval->add_option("--threads", threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  eval->add_option("--bc-policy", bc_policy, "Behaviour cloning checkpoint")->check(CLI::ExistingFile);
  eval->add_option("--rl-policy", rl_policy, "GPRL checkpoint")->check(CLI::ExistingFile);
  eval->add_option("--out", eval_out, "Output directory for report.csv and summary.json");

  // demo-gen
  std::string demo_kind = "push-sweep";
  std::string demo_env;
  int demo_samples = kDemoSamples;
  double demo_duration = kDemoDuration;
  std::string demo_out;
  auto* demo_gen = app.add_subcommand("demo-gen", "Write a synthetic demonstration CSV");
  demo_gen->add_option("--kind", demo_kind, "sine-arc, push-sweep, lift-and-carry or drawer-pull")
      ->check(CLI::IsMember({"sine-arc", "push-sweep", "lift-and-carry", "drawer-pull"}));
  demo_gen->add_option("--env", demo_env, "Use the canonical demonstration of an environment")
      ->check(CLI::IsMember({"dot", "s-cpt", "d-cpt", "bmt"}));
  demo_gen->add_option("--n", demo_samples, "Samples")->check(CLI::Range(static_cast<int>(kMinDemoSamples), 1000000));
  demo_gen->add_option("--duration", demo_duration, "Duration in seconds")->check(CLI::PositiveNumber);
  demo_gen->add_option("--out", demo_out, "Output CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  struct SinkGuard {
    WarningSink previous;
    ~SinkGuard() { set_warning_sink(std::move(previous)); }
  } guard{set_warning_sink([&err](std::string_view msg) { err << "warning: " << msg << '\n'; })};
  try {
    if (*fit) {
      const Demonstration demo = load_demonstration_file(fit_src.demo);
      KernelParams params;
      params.lengthscale = lengthscale;
      const ViaFitResult res = fit_via_points(demo, fit_src.n_via, params);
      const SkillModel skill(res.via, params);
      emit(fit_out, skill_to_json(skill) + "\n", out);
      err << "fit: " << fit_src.n_via << " via points, position RMSE "
          << reconstruction_rmse(demo, skill, 0) << " m, rotation RMSE "
          << reconstruction_rmse(demo, skill, 3) << " rad" << (res.converged ? "" : " (not converged)")
          << '\n';
    } else if (*adapt) {
      const EnvKind kind = parse_env_kind(adapt_env.env);
      const SkillModel skill = resolve_skill(adapt_src, kind);
      const Environment env = make_env(adapt_env, skill);
      TaskConfiguration tc;
      if (adapt_seed) {
        std::mt19937_64 rng(*adapt_seed);
        tc = env.sample_tc(rng);
      } else {
        tc = env.make_tc(offset.empty() ? Eigen::Vector2d::Zero() : Eigen::Vector2d(offset[0], offset[1]));
      }
      const Method method = parse_method(method_name);
      std::optional<SkillGpAdapter> skill_gp;
      std::optional<BcPolicy> bc;
      std::optional<GprlPolicy> gprl;
      if (method == Method::kSkillGp) skill_gp.emplace(env.demo_skill());
      if (method == Method::kBc || method == Method::kGprl) {
        if (policy_path.empty()) throw InvalidArgument("--policy is required for " + method_name);
        if (method == Method::kBc) bc = bc_policy_from_json(read_text_file(policy_path));
        if (method == Method::kGprl) gprl = gprl_policy_from_json(read_text_file(policy_path));
      }
      const Adapter adapter(method, env, skill_gp ? &*skill_gp : nullptr, bc ? &*bc : nullptr,
                            gprl ? &*gprl : nullptr);
      emit(adapt_out, skill_to_json(adapter.adapt(tc)) + "\n", out);
    } else if (*train_bc) {
      const EnvKind kind = parse_env_kind(bc_env.env);
      const SkillModel skill = resolve_skill(bc_src, kind);
      const Environment env = make_env(bc_env, skill);
      BcTrainConfig config;
      if (!bc_config.empty()) config = bc_config_from_json(read_text_file(bc_config), config);
      if (bc_epochs) config.epochs = *bc_epochs;
      ensure_dir(bc_out);
      std::mt19937_64 rng(bc_seed);
      BcDataset ds;
      if (!bc_dataset.empty()) {
        ds = load_dataset_csv(bc_dataset);
      } else {
        const SkillGpAdapter expert(env.demo_skill());
        ds = generate_expert_dataset(env, expert, full_scale ? kFullScalePairs : bc_pairs, rng);
        save_dataset_csv(join(bc_out, "bc_dataset.csv"), ds);
      }
      const BcTrainResult res = train_clone(ds, config, rng);
      write_text_file(join(bc_out, "bc_policy.json"), bc_policy_to_json(res.policy));
      std::ostringstream curve;
      curve.precision(10);
      curve << "epoch,loss\n";
      for (std::size_t i = 0; i < res.epoch_loss.size(); ++i) curve << i << ',' << res.epoch_loss[i] << '\n';
      write_text_file(join(bc_out, "bc_curve.csv"), curve.str());
      out << "train-bc: " << ds.size() << " pairs (" << ds.skipped << " skipped), train MSE "
          << res.train_mse << ", held-out MSE " << res.heldout_mse << '\n';
    } else if (*train_rl) {
      const EnvKind kind = parse_env_kind(rl_env.env);
      const SkillModel skill = resolve_skill(rl_src, kind);
      const Environment env = make_env(rl_env, skill);
      GprlConfig config;
      if (!rl_config.empty()) config = gprl_config_from_json(read_text_file(rl_config), config);
      if (rl_episodes) config.episodes = *rl_episodes;
      if (rl_seed) config.seed = *rl_seed;
      ensure_dir(rl_out);
      std::ofstream curve(join(rl_out, "gprl_curve.csv"));
      if (!curve) throw InvalidArgument("cannot write the training curve in '" + rl_out + "'");
      curve.precision(10);
      curve << "episode,r_tc,r_ss,r_sp,r_tp,total,success,temperature,trailing_mean,best_score,reloaded\n";
      const GprlTrainResult res = train_gprl(env, config, [&](const EpisodeRecord& r) {
        curve << r.episode << ',' << r.reward.r_tc << ',' << r.reward.r_ss << ',' << r.reward.r_sp << ','
              << r.reward.r_tp << ',' << r.reward.total << ',' << (r.success ? 1 : 0) << ','
              << r.temperature << ',' << r.trailing_mean << ',' << r.best_score << ','
              << (r.reloaded ? 1 : 0) << '\n';
      });
      write_text_file(join(rl_out, "gprl_policy.json"), gprl_policy_to_json(res.policy));
      write_text_file(join(rl_out, "gprl_config.json"), gprl_config_to_json(config) + "\n");
      out << "train-rl: " << config.episodes << " episodes, best trailing reward " << res.best_score
          << " at episode " << res.best_episode << '\n';
    } else if (*eval) {
      const EnvKind kind = parse_env_kind(eval_env.env);
      const SkillModel skill = resolve_skill(eval_src, kind);
      const Environment env = make_env(eval_env, skill);
      const std::vector<Method> method_list = parse_methods(methods);
      std::optional<BcPolicy> bc;
      std::optional<GprlPolicy> gprl;
      for (Method m : method_list) {
        if (m == Method::kBc && !bc) {
          if (bc_policy.empty()) throw InvalidArgument("--bc-policy is required for bc");
          bc = bc_policy_from_json(read_text_file(bc_policy));
        }
        if (m == Method::kGprl && !gprl) {
          if (rl_policy.empty()) throw InvalidArgument("--rl-policy is required for gprl");
          gprl = gprl_policy_from_json(read_text_file(rl_policy));
        }
      }
      EvalOptions options;
      options.n = eval_n;
      options.seed = eval_seed;
      options.threads = threads;
      options.bc = bc ? &*bc : nullptr;
      options.gprl = gprl ? &*gprl : nullptr;
      const EvalReport report = evaluate(env, method_list, options);
      ensure_dir(eval_out);
      std::ostringstream csv;
      write_report_csv(csv, report);
      write_text_file(join(eval_out, "report.csv"), csv.str());
      const std::vector<MethodSummary> summary = summarize(report);
      write_text_file(join(eval_out, "summary.json"), summary_json(summary, eval_seed));
      for (const MethodSummary& s : summary) {
        out << to_string(s.env) << ' ' << to_string(s.method) << ": success " << s.successes << '/' << s.n
            << ", cosine " << s.mean_cosine_linear << ", r_ss " << s.mean_r_ss << ", latency "
            << s.mean_adapt_latency * 1e3 << " ms\n";
      }
    } else if (*demo_gen) {
      const DemoKind kind =
          demo_env.empty() ? parse_demo_kind(demo_kind) : canonical_demo(parse_env_kind(demo_env));
      const Demonstration demo = generate_demo(kind, demo_samples, demo_duration);
      std::ostringstream csv;
      save_demonstration(csv, demo);
      emit(demo_out, csv.str(), out);
    }
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace gpskill::cli
