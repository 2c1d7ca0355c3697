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


#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "gpskill/demo_gen.hpp"
#include "gpskill/errors.hpp"
#include "gpskill/evaluation.hpp"

namespace gpskill {
namespace {

Environment make_env(EnvKind kind) {
  return Environment(kind, SkillModel(fit_via_points(generate_demo(canonical_demo(kind))).via));
}

std::string csv(const EvalReport& r, bool timing) {
  std::ostringstream s;
  write_report_csv(s, r, timing);
  return s.str();
}

TEST(Methods, Names) {
  for (Method m : {Method::kVanilla, Method::kSkillGp, Method::kBc, Method::kGprl}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_EQ(parse_methods("vanilla,skill-gp"), (std::vector<Method>{Method::kVanilla, Method::kSkillGp}));
  EXPECT_THROW(parse_method("dmp"), InvalidArgument);
  EXPECT_THROW(parse_methods(""), InvalidArgument);
  EXPECT_THROW(parse_methods("vanilla,,gprl"), InvalidArgument);
}

TEST(TcSeeds, DistinctAndReproducible) {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(tc_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(tc_seed(7, 0), tc_seed(8, 0));
  Environment env = make_env(EnvKind::kSCpt);
  EXPECT_EQ(evaluation_tc(env, 7, 3).offset, evaluation_tc(env, 7, 3).offset);
}

TEST(Adapter, RequiresItsModel) {
  Environment env = make_env(EnvKind::kSCpt);
  EXPECT_THROW(Adapter(Method::kSkillGp, env), InvalidArgument);
  EXPECT_THROW(Adapter(Method::kBc, env), InvalidArgument);
  EXPECT_THROW(Adapter(Method::kGprl, env), InvalidArgument);
  TaskConfiguration tc = env.make_tc(Eigen::Vector2d(0.1, 0.05));
  SkillModel v = Adapter(Method::kVanilla, env).adapt(tc);
  EXPECT_EQ(v.via().values, condition_on_tc(env.demo_skill(), tc).via().values);
  SkillGpAdapter sg(env.demo_skill());
  SkillModel a = Adapter(Method::kSkillGp, env, &sg).adapt(tc);
  EXPECT_EQ(a.via().values, sg.adapt(tc).via.values);
}

TEST(Evaluate, RowCountOrderAndSchema) {
  Environment env = make_env(EnvKind::kSCpt);
  EvalOptions opt;
  opt.n = 100;
  opt.seed = 7;
  EvalReport r = evaluate(env, {Method::kVanilla, Method::kSkillGp}, opt);
  ASSERT_EQ(r.rows.size(), 200u);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(r.rows[static_cast<std::size_t>(i)].method, Method::kVanilla);
    EXPECT_EQ(r.rows[static_cast<std::size_t>(100 + i)].method, Method::kSkillGp);
    EXPECT_EQ(r.rows[static_cast<std::size_t>(i)].seed, tc_seed(7, i));
    EXPECT_EQ(r.rows[static_cast<std::size_t>(i)].seed, r.rows[static_cast<std::size_t>(100 + i)].seed);
    EXPECT_EQ(r.rows[static_cast<std::size_t>(i)].env, EnvKind::kSCpt);
    EXPECT_LE(r.rows[static_cast<std::size_t>(i)].tc_offset, env.config().max_offset + 1e-12);
  }
  std::string text = csv(r, true);
  EXPECT_EQ(text.substr(0, text.find('\n')), kReportHeader);
  std::string no_timing = csv(r, false);
  std::string header = no_timing.substr(0, no_timing.find('\n'));
  EXPECT_EQ(header, std::string(kReportHeader.substr(0, kReportHeader.rfind(','))));
}

TEST(Evaluate, DeterministicAcrossThreadCounts) {
  Environment env = make_env(EnvKind::kDCpt);
  EvalOptions a;
  a.n = 30;
  a.seed = 3;
  a.threads = 1;
  EvalOptions b = a;
  b.threads = 3;
  std::vector<Method> m = {Method::kVanilla, Method::kSkillGp};
  EXPECT_EQ(csv(evaluate(env, m, a), false), csv(evaluate(env, m, b), false));
}

TEST(Evaluate, SummaryCountsSuccesses) {
  Environment env = make_env(EnvKind::kBmt);
  EvalOptions opt;
  opt.n = 60;
  opt.seed = 11;
  EvalReport r = evaluate(env, {Method::kVanilla, Method::kSkillGp}, opt);
  std::vector<MethodSummary> s = summarize(r);
  ASSERT_EQ(s.size(), 2u);
  int vanilla = 0;
  for (const EvalRow& row : r.rows) vanilla += row.method == Method::kVanilla && row.success;
  EXPECT_EQ(s[0].method, Method::kVanilla);
  EXPECT_EQ(s[0].successes, vanilla);
  EXPECT_EQ(s[0].n, 60);
  EXPECT_DOUBLE_EQ(s[0].success_rate, vanilla / 60.0);
  EXPECT_GE(s[1].success_rate, s[0].success_rate);
  EXPECT_NEAR(s[1].mean_cosine_linear, 1.0, 0.1);

  std::string json = summary_json(s, 11);
  EXPECT_NE(json.find("\"report_schema\": 1"), std::string::npos);
  EXPECT_EQ(json.find("latency"), std::string::npos);
  EXPECT_EQ(json, summary_json(summarize(evaluate(env, {Method::kVanilla, Method::kSkillGp}, opt)), 11));
}

TEST(Evaluate, RejectsMissingPolicies) {
  Environment env = make_env(EnvKind::kSCpt);
  EvalOptions opt;
  opt.n = 5;
  EXPECT_THROW(evaluate(env, {Method::kGprl}, opt), InvalidArgument);
  opt.n = 0;
  EXPECT_THROW(evaluate(env, {Method::kVanilla}, opt), InvalidArgument);
}

}  // namespace
}  // namespace gpskill
