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


#include <random>

#include <benchmark/benchmark.h>

#include "gpskill/adapt.hpp"
#include "gpskill/bc.hpp"
#include "gpskill/demo_gen.hpp"
#include "gpskill/envs.hpp"
#include "gpskill/evaluation.hpp"
#include "gpskill/gprl.hpp"
#include "gpskill/signature.hpp"

namespace gpskill {
namespace {

const Environment& scpt() {
  static const Environment env(EnvKind::kSCpt,
                               SkillModel(fit_via_points(generate_demo(canonical_demo(EnvKind::kSCpt))).via));
  return env;
}

void BM_SkillQuery(benchmark::State& state) {
  const SkillModel& skill = scpt().demo_skill();
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(skill.query(t));
    t = t > 9.99 ? 0.0 : t + 0.01;
  }
}
BENCHMARK(BM_SkillQuery);

void BM_SampleTrajectory(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scpt().sample(scpt().demo_skill()));
}
BENCHMARK(BM_SampleTrajectory);

void BM_FitViaPoints(benchmark::State& state) {
  const Demonstration demo = generate_demo(DemoKind::kPushSweep);
  for (auto _ : state) benchmark::DoNotOptimize(fit_via_points(demo));
}
BENCHMARK(BM_FitViaPoints)->Unit(benchmark::kMillisecond);

void BM_SkillGpAdapt(benchmark::State& state) {
  const SkillGpAdapter adapter(scpt().demo_skill());
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    state.PauseTiming();
    const TaskConfiguration tc = scpt().sample_tc(rng);
    state.ResumeTiming();
    benchmark::DoNotOptimize(adapter.adapt(tc));
  }
}
BENCHMARK(BM_SkillGpAdapt)->Unit(benchmark::kMillisecond);

void BM_SignatureSimilarity(benchmark::State& state) {
  const Trajectory a = scpt().sample(scpt().demo_skill());
  const Trajectory b = scpt().sample(condition_on_tc(scpt().demo_skill(), scpt().make_tc({0.1, 0.05})));
  for (auto _ : state) benchmark::DoNotOptimize(similarity(a.positions, b.positions));
}
BENCHMARK(BM_SignatureSimilarity);

void BM_BcAdapt(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const SkillGpAdapter expert(scpt().demo_skill());
  const BcDataset ds = generate_expert_dataset(scpt(), expert, 200, rng);
  BcTrainConfig config;
  config.epochs = 1;
  const BcPolicy policy = train_clone(ds, config, rng).policy;
  const Adapter adapter(Method::kBc, scpt(), nullptr, &policy, nullptr);
  const TaskConfiguration tc = scpt().make_tc({0.1, -0.05});
  for (auto _ : state) benchmark::DoNotOptimize(adapter.adapt(tc));
}
BENCHMARK(BM_BcAdapt)->Unit(benchmark::kMicrosecond);

void BM_GprlAdapt(benchmark::State& state) {
  GprlConfig config;
  config.episodes = 1;
  config.warmup_episodes = 0;
  config.best_window = 1;
  const GprlPolicy policy = train_gprl(scpt(), config).policy;
  const Adapter adapter(Method::kGprl, scpt(), nullptr, nullptr, &policy);
  const TaskConfiguration tc = scpt().make_tc({0.1, -0.05});
  for (auto _ : state) benchmark::DoNotOptimize(adapter.adapt(tc));
}
BENCHMARK(BM_GprlAdapt)->Unit(benchmark::kMicrosecond);

void BM_SacUpdate(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const int a_dim = position_action_dim(kDefaultViaCount);
  SacConfig config;
  config.hidden = {static_cast<int>(state.range(0)), static_cast<int>(state.range(0))};
  SacAgent agent(kRlStateDim, a_dim, config, rng);
  ReplayBuffer buffer(1024, kRlStateDim, a_dim);
  for (int i = 0; i < 1024; ++i) {
    const Eigen::VectorXf x = Eigen::VectorXf::Random(kRlStateDim);
    buffer.add({x, Eigen::VectorXf::Random(a_dim), 1.0f, x, 1.0f});
  }
  for (auto _ : state) benchmark::DoNotOptimize(sac_update(agent, buffer, 256, rng));
}
BENCHMARK(BM_SacUpdate)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace gpskill

BENCHMARK_MAIN();
