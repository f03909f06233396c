// Copyright 2026 The IWP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iwp/optimizer.h"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "iwp/data.h"
#include "iwp/error.h"

namespace iwp {
namespace {

std::vector<RawRecord> Synthetic(std::int64_t n, std::uint64_t seed,
                                 double separation = 1.0) {
  DatasetSpec spec;
  spec.n = n;
  spec.p = 2;
  spec.class_separation = separation;
  spec.seed = seed;
  return GenerateSynthetic(spec);
}

double Variance(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

TEST(ProjectBallTest, Examples) {
  EXPECT_EQ(ProjectBall(Vector{0.3, -0.4}, 1.0), (Vector{0.3, -0.4}));
  const Vector p = ProjectBall(Vector{3.0, 4.0}, 2.5);
  EXPECT_DOUBLE_EQ(p[0], 1.5);
  EXPECT_DOUBLE_EQ(p[1], 2.0);
  EXPECT_THROW(ProjectBall(Vector{1.0}, 0.0), Error);
}

TEST(ProjectBallTest, IdempotentAndInsideBall) {
  Rng rng(31);
  std::normal_distribution<double> n(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Vector theta = {n(rng), n(rng), n(rng)};
    const double r = std::abs(n(rng)) + 1e-3;
    const Vector once = ProjectBall(theta, r);
    EXPECT_LE(Norm(once), r);
    EXPECT_EQ(ProjectBall(once, r), once);
  }
}

TEST(SgdTest, TraceShapeAndIteratesStayInBall) {
  const auto data = Synthetic(1000, 1);
  SgdConfig config;
  config.step_size = 0.5;
  config.batch_size = 64;
  config.radius = 0.2;
  const TrainResult r = SgdPlain(data, GlmLoss::Exponential(), config, data);
  EXPECT_EQ(r.trace.rows.size(), 16u);  // ceil(1000 / 64)
  for (std::size_t t = 0; t < r.trace.rows.size(); ++t) {
    EXPECT_EQ(r.trace.rows[t].batch_index, static_cast<std::int64_t>(t));
    EXPECT_LE(r.trace.rows[t].theta_norm, config.radius);
    EXPECT_TRUE(std::isfinite(r.trace.rows[t].test_risk));
  }
  EXPECT_EQ(r.trace.final_theta, r.model.theta);
  EXPECT_EQ(r.trace.step_size, 0.5);
}

TEST(SgdTest, EvalEveryLeavesGapsAsNan) {
  const auto data = Synthetic(100, 2);
  SgdConfig config;
  config.batch_size = 10;
  config.eval_every = 4;
  const TrainResult r = SgdPlain(data, GlmLoss::Quadratic(), config, data);
  ASSERT_EQ(r.trace.rows.size(), 10u);
  for (std::size_t t = 0; t < 10; ++t) {
    const bool evaluated = (t + 1) % 4 == 0 || t == 9;
    EXPECT_EQ(std::isnan(r.trace.rows[t].test_risk), !evaluated) << t;
  }
  config.eval_every = 0;
  const TrainResult last = SgdPlain(data, GlmLoss::Quadratic(), config, data);
  EXPECT_TRUE(std::isnan(last.trace.rows[8].test_risk));
  EXPECT_FALSE(std::isnan(last.trace.rows[9].test_risk));
}

TEST(IwpSgdTest, TwoStepsByHand) {
  const auto budget = PrivacyBudget::Create(1.0, 1.0, 1e-5, 1.0);
  const std::vector<LdpRecord> data = {{{0.8, -1.1}, 1.0}, {{-0.4, 2.0}, -1.0}};
  const GlmLoss glm = GlmLoss::Exponential();
  SgdConfig config;
  config.step_size = 0.01;
  config.batch_size = 1;
  config.lambda = 0.5;
  config.radius = 5.0;
  Vector theta = {0.0, 0.0};
  for (const LdpRecord& r : data) {
    const Vector g = IwpGrad(glm, theta, r.features_noisy, r.label_noisy, budget);
    Vector next(2);
    for (int j = 0; j < 2; ++j) {
      next[j] = theta[j] - config.step_size * (g[j] + config.lambda * theta[j]);
    }
    theta = ProjectBall(next, config.radius);
  }
  const TrainResult r = IwpSgd(data, glm, budget, config);
  EXPECT_EQ(r.model.theta, theta);
  EXPECT_DOUBLE_EQ(r.trace.rows[0].mean_train_estimator_value,
                   IwpLoss(glm, Vector{0.0, 0.0}, data[0].features_noisy, 1.0,
                           budget));
}

TEST(IwpSgdTest, ZeroNoiseMatchesPlainSgd) {
  const auto raw = Synthetic(2000, 3);
  const auto budget = PrivacyBudget::Create(1e9, 100, 1e-5, std::sqrt(2.0));
  std::vector<LdpRecord> released;
  for (const RawRecord& r : raw) released.push_back({r.features, r.label});
  SgdConfig config;
  config.step_size = 0.05;
  config.batch_size = 16;
  config.lambda = 0.1;
  for (const GlmLoss& glm : {GlmLoss::Quadratic(), GlmLoss::Exponential(),
                             GlmLoss::Logistic()}) {
    const TrainResult a = IwpSgd(released, glm, budget, config);
    const TrainResult b = SgdPlain(raw, glm, config);
    for (std::size_t t = 0; t < a.trace.rows.size(); ++t) {
      EXPECT_NEAR(a.trace.rows[t].theta_norm, b.trace.rows[t].theta_norm, 1e-10);
    }
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(a.model.theta[j], b.model.theta[j], 1e-10) << glm.name();
    }
  }
}

TEST(IwpSgdTest, BudgetMismatchIsRejected) {
  const auto raw = Synthetic(50, 4);
  const auto budget = PrivacyBudget::FromTotal(2, 1e-5, std::sqrt(2.0));
  const ReleasedDataset rel = ReleaseDataset(raw, budget, 9);
  const auto other = PrivacyBudget::FromTotal(4, 1e-5, std::sqrt(2.0));
  try {
    IwpSgd(rel, GlmLoss::Quadratic(), other, SgdConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBudgetMismatch);
  }
  EXPECT_NO_THROW(IwpSgd(rel, GlmLoss::Quadratic(), budget, SgdConfig{}));
}

TEST(IwpSgdTest, QuadraticTracksCleanRisk) {
  const auto budget = PrivacyBudget::FromTotal(2, 1e-5, std::sqrt(2.0));
  const auto all = Synthetic(125'000, 5);
  const SplitResult split = Split(all, 0.2, 5);
  SgdConfig config;
  config.step_size = 2e-3;
  config.batch_size = 128;
  config.lambda = 1.0;
  config.eval_every = 0;
  const GlmLoss glm = GlmLoss::Quadratic();
  const TrainResult real = SgdPlain(split.train, glm, config, split.test);
  double iwp = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    const ReleasedDataset rel = ReleaseDataset(split.train, budget, 100 + s);
    iwp += IwpSgd(rel, glm, budget, config, split.test).trace.rows.back().test_risk;
  }
  iwp /= seeds;
  const double clean = real.trace.rows.back().test_risk;
  EXPECT_LT(std::abs(iwp - clean), 0.1 * clean) << iwp << " vs " << clean;
}

TEST(IwpSgdTest, IwpVarianceExceedsNoisyVariance) {
  const auto budget = PrivacyBudget::FromTotal(2, 1e-5, std::sqrt(2.0));
  const auto train = Synthetic(20'000, 6);
  SgdConfig config;
  config.step_size = 1e-3;
  config.batch_size = 128;
  config.lambda = 1.0;
  config.eval_every = 0;
  const GlmLoss glm = GlmLoss::Exponential();
  std::vector<double> iwp[2], noisy[2];
  for (int s = 0; s < 20; ++s) {
    const ReleasedDataset rel = ReleaseDataset(train, budget, 200 + s);
    const Vector a = IwpSgd(rel, glm, budget, config).model.theta;
    const Vector b = SgdPlain(rel.records, glm, config).model.theta;
    for (int j = 0; j < 2; ++j) {
      iwp[j].push_back(a[j]);
      noisy[j].push_back(b[j]);
    }
  }
  EXPECT_GE(Variance(iwp[0]) + Variance(iwp[1]),
            Variance(noisy[0]) + Variance(noisy[1]));
}

TEST(SgdPlainTest, LargeRegularizerShrinks) {
  const auto data = Synthetic(10'000, 7);
  SgdConfig config;
  config.step_size = 1e-4;
  config.batch_size = 1;
  config.lambda = 1e3;
  config.eval_every = 0;
  for (const GlmLoss& glm : {GlmLoss::Quadratic(), GlmLoss::Exponential()}) {
    EXPECT_LT(Norm(SgdPlain(data, glm, config).model.theta), 1e-2);
  }
}

TEST(SgdPlainTest, QuadraticRiskDecreasesOnAverage) {
  SgdConfig config;
  config.step_size = 0.05;
  config.batch_size = 10;
  config.eval_every = 10;
  config.radius = 10.0;
  std::vector<double> curve;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    const auto data = Synthetic(1000, 300 + s, 2.0);
    const TrainResult r = SgdPlain(data, GlmLoss::Quadratic(), config, data);
    std::size_t k = 0;
    for (const TraceRow& row : r.trace.rows) {
      if (std::isnan(row.test_risk)) continue;
      if (curve.size() <= k) curve.push_back(0.0);
      curve[k++] += row.test_risk / seeds;
    }
  }
  ASSERT_EQ(curve.size(), 10u);
  for (std::size_t k = 1; k < curve.size(); ++k) {
    EXPECT_LE(curve[k], curve[k - 1] + 1e-3) << k;
  }
  EXPECT_LT(curve.back(), curve.front());
}

TEST(SgdPlainTest, Deterministic) {
  const auto data = Synthetic(500, 8);
  SgdConfig config;
  config.init_radius = 0.5;
  config.seed = 42;
  config.batch_size = 7;
  const TrainResult a = SgdPlain(data, GlmLoss::Logistic(), config, data);
  const TrainResult b = SgdPlain(data, GlmLoss::Logistic(), config, data);
  EXPECT_EQ(a.model.theta, b.model.theta);
  ASSERT_EQ(a.trace.rows.size(), b.trace.rows.size());
  for (std::size_t t = 0; t < a.trace.rows.size(); ++t) {
    EXPECT_EQ(a.trace.rows[t].test_risk, b.trace.rows[t].test_risk);
  }
  EXPECT_GT(Norm(SgdPlain({data.begin(), data.begin() + 1}, GlmLoss::Logistic(),
                          SgdConfig{.step_size = 1e-12, .init_radius = 0.5})
                     .model.theta),
            0.0);
}

TEST(SgdTest, InvalidInput) {
  const auto data = Synthetic(10, 9);
  EXPECT_THROW(SgdPlain(std::vector<RawRecord>{}, GlmLoss::Quadratic(), {}),
               Error);
  SgdConfig bad;
  bad.batch_size = 0;
  EXPECT_THROW(SgdPlain(data, GlmLoss::Quadratic(), bad), Error);
  bad = {};
  bad.lambda = -1;
  EXPECT_THROW(SgdPlain(data, GlmLoss::Quadratic(), bad), Error);
  bad = {};
  bad.step_size = 0;
  EXPECT_THROW(SgdPlain(data, GlmLoss::Quadratic(), bad), Error);
  try {
    IwpSgd(std::vector<LdpRecord>{}, GlmLoss::Quadratic(),
           PrivacyBudget::Create(1, 1, 1e-5, 1), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
}

TEST(StepSizeTest, ConstantAndFallbacks) {
  std::vector<std::string> warnings;
  SetWarningHandler([&](std::string_view m) { warnings.emplace_back(m); });
  SgdConfig c;
  c.step_size = 0.3;
  EXPECT_EQ(ResolveStepSize(c, 100), 0.3);
  EXPECT_TRUE(warnings.empty());
  c.curvature = Curvature{1.0, 2.0, 1.0, 1.0};
  EXPECT_EQ(ResolveStepSize(c, 100), 0.3);  // above 1/(2 * 2): warns
  EXPECT_EQ(warnings.size(), 1u);
  c.curvature.reset();
  c.schedule = StepSchedule::kLogOverN;
  EXPECT_EQ(ResolveStepSize(c, 100), 0.3);
  EXPECT_EQ(warnings.size(), 2u);
  SetWarningHandler(nullptr);
}

TEST(StepSizeTest, LogOverNRule) {
  SgdConfig c;
  c.schedule = StepSchedule::kLogOverN;
  c.batch_size = 1;
  c.curvature = Curvature{1.0, 2.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(ResolveStepSize(c, 1000), std::log(1000.0) / 1000.0);
  EXPECT_DOUBLE_EQ(ResolveStepSize(c, 1), 0.25);  // capped at 1/(2 smoothness)
  c.batch_size = 10;
  EXPECT_DOUBLE_EQ(ResolveStepSize(c, 1000), std::log(1000.0) / 100.0);
  EXPECT_DOUBLE_EQ(ResolveStepSize(c, 995), std::log(1000.0) / 100.0);
  c.curvature = Curvature{0.5, 2.0, 1e6, 1.0};
  EXPECT_DOUBLE_EQ(ResolveStepSize(c, 1000), std::log(2.0) / 50.0);
  c.curvature = Curvature{0.0, 2.0, 1.0, 1.0};
  EXPECT_THROW(ResolveStepSize(c, 1000), Error);
}

TEST(EvaluateTest, Conventions) {
  const std::vector<RawRecord> test = {{{1.0, 0.0}, 1.0, 0}, {{-1.0, 0.5}, -1.0, 1}};
  const Evaluation zero = Evaluate(Vector{0.0, 0.0}, test, GlmLoss::Exponential());
  EXPECT_EQ(zero.accuracy, 0.0);
  EXPECT_EQ(zero.risk, 1.0);
  const Evaluation sep = Evaluate(Vector{1.0, 0.0}, test, GlmLoss::Quadratic());
  EXPECT_EQ(sep.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(sep.risk, 0.0);
  EXPECT_DOUBLE_EQ(Evaluate(Vector{1.0, 0.0}, test, GlmLoss::Quadratic(), 4.0).risk,
                   2.0);
  EXPECT_THROW(Evaluate(Vector{1.0, 0.0}, {}, GlmLoss::Quadratic()), Error);
}

}  // namespace
}  // namespace iwp
