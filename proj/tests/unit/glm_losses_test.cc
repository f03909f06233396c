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

#include "iwp/glm_losses.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "iwp/error.h"
#include "iwp/running_stats.h"
#include "iwp/transforms.h"

namespace iwp {
namespace {

// mpmath references at theta = (0.3, -0.4), x~ = (2, 1), y~ = -1 under
// Create(1, 1, 1e-5, 1), where sigma^2 = 93.8885521302755.
constexpr double kQuadraticIwpLoss = -10.78327833353671;
constexpr double kExponentialIwpLoss = 1.164598788501096e-05;
constexpr double kQuadraticIwpGrad[2] = {-23.43865881160535, 39.91937426584886};
constexpr double kLogisticInvK2 = 0.1287998603325015;   // z = 1.5, v = 1
constexpr double kLogisticInvK1 = 0.6215714158777149;   // z = -0.5, v = 3

std::vector<GlmLoss> AllLosses() {
  return {GlmLoss::Quadratic(), GlmLoss::Exponential(), GlmLoss::Logistic(),
          GlmLoss::Logistic(3)};
}

Vector RandomVector(Rng& rng, int p, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(p);
  for (double& x : v) x = u(rng);
  return v;
}

double RandomLabel(Rng& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
}

template <typename F>
Vector CentralDifference(F&& f, Vector theta, double h) {
  Vector g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double t = theta[i];
    theta[i] = t + h;
    const double up = f(theta);
    theta[i] = t - h;
    const double down = f(theta);
    theta[i] = t;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

double Distance(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

TEST(GlmLossTest, Kinds) {
  EXPECT_EQ(GlmLoss::Quadratic().name(), "quadratic");
  EXPECT_EQ(GlmLoss::Exponential().name(), "exponential");
  EXPECT_EQ(GlmLoss::Logistic().name(), "logistic");
  EXPECT_EQ(GlmLoss::Logistic(3).name(), "logistic(K=3)");
  EXPECT_TRUE(GlmLoss::Quadratic().exact());
  EXPECT_FALSE(GlmLoss::Logistic().exact());
  EXPECT_THROW(GlmLoss::Logistic(-1), Error);
  EXPECT_THROW(GlmLoss::Logistic(LogisticMargin::kMaxSeriesOrder + 1), Error);
}

TEST(GlmLossTest, LogisticTruncationDefaults) {
  const GlmLoss l = GlmLoss::Logistic();
  EXPECT_EQ(l.TruncationOrder(0.5), 2);
  EXPECT_EQ(l.TruncationOrder(8.0), 2);
  EXPECT_EQ(l.TruncationOrder(8.01), 1);
  EXPECT_EQ(GlmLoss::Logistic(4).TruncationOrder(100.0), 4);
  EXPECT_EQ(GlmLoss::Exponential().TruncationOrder(1.0), -1);
}

TEST(LossTest, Examples) {
  const Vector theta = {0.5, 0.5};
  const Vector x = {1.0, 1.0};
  EXPECT_EQ(Loss(GlmLoss::Quadratic(), theta, x, 1.0), 0.0);
  const Vector zero = {0.0, 0.0};
  EXPECT_EQ(Loss(GlmLoss::Exponential(), zero, x, -1.0), 1.0);
  EXPECT_NEAR(Loss(GlmLoss::Logistic(), zero, x, 1.0), 0.6931471805599453,
              1e-16);
  EXPECT_THROW(Loss(GlmLoss::Quadratic(), theta, Vector{1.0}, 1.0), Error);
}

TEST(GradTest, Examples) {
  const Vector theta = {0.5, 0.5};
  for (const GlmLoss& glm : AllLosses()) {
    EXPECT_EQ(Grad(glm, theta, Vector{0.0, 0.0}, 1.0), (Vector{0.0, 0.0}));
  }
  EXPECT_EQ(Grad(GlmLoss::Quadratic(), theta, Vector{1.0, 1.0}, 1.0),
            (Vector{0.0, 0.0}));
  try {
    Grad(GlmLoss::Quadratic(), theta, Vector{1.0, 2.0, 3.0}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(GradTest, MatchesFiniteDifferenceOfLoss) {
  Rng rng(21);
  for (const GlmLoss& glm : AllLosses()) {
    for (int i = 0; i < 100; ++i) {
      const Vector theta = RandomVector(rng, 3, 1.0);
      const Vector x = RandomVector(rng, 3, 1.0);
      const double y = RandomLabel(rng);
      const Vector g = Grad(glm, theta, x, y);
      const Vector fd = CentralDifference(
          [&](const Vector& t) { return Loss(glm, t, x, y); }, theta, 1e-6);
      EXPECT_LE(Distance(g, fd), 1e-5 * Norm(g) + 1e-9) << glm.name();
    }
  }
}

TEST(WInvGlmTest, Examples) {
  const Vector theta = {1.0, 0.0};
  for (const GlmLoss& glm : AllLosses()) {
    EXPECT_EQ(WInvGlm(glm, theta, 0.4, 0.0), glm.profile().Value(0.4));
  }
  // sigma^2 ||theta||^2 = 2.
  EXPECT_NEAR(WInvGlm(GlmLoss::Exponential(), theta, 0.0, 2.0),
              0.3678794411714423, 1e-16);
  EXPECT_NEAR(WInvGlm(GlmLoss::Logistic(2), theta, 1.5, 1.0), kLogisticInvK2,
              1e-15);
  EXPECT_NEAR(WInvGlm(GlmLoss::Logistic(1), theta, -0.5, 3.0), kLogisticInvK1,
              1e-15);
  // The default order at v = 3 is 2, so pinning 1 must differ.
  EXPECT_NE(WInvGlm(GlmLoss::Logistic(), theta, -0.5, 3.0), kLogisticInvK1);
}

TEST(WInvGlmTest, QuadraticAgreesWithSeriesEngine) {
  const Vector theta = {0.6, -0.8};
  const QuadraticMargin f;
  for (double z : {-2.0, 0.0, 1.0, 3.3}) {
    for (double s2 : {0.5, 4.0, 90.0}) {
      for (int order = 0; order <= 3; ++order) {
        const double engine =
            WeierstrassSeries(f, z, s2 * SquaredNorm(theta),
                              {2, SeriesDirection::kInverse}, order);
        EXPECT_NEAR(WInvGlm(GlmLoss::Quadratic(), theta, z, s2, order), engine,
                    1e-12 * std::max(1.0, std::abs(engine)));
      }
    }
  }
}

TEST(WInvGlmTest, ExponentialAgreesWithSeriesEngine) {
  const Vector theta = {0.3, 0.4};
  const Exponential f;
  for (int order = 0; order <= 2; ++order) {
    const double engine = WeierstrassSeries(
        f, 0.7, 4.0 * 0.25, {40, SeriesDirection::kInverse}, order);
    EXPECT_NEAR(WInvGlm(GlmLoss::Exponential(), theta, 0.7, 4.0, order),
                engine, 1e-14);
  }
}

class IwpOracleTest : public ::testing::Test {
 protected:
  const PrivacyBudget budget_ = PrivacyBudget::Create(1, 1, 1e-5, 1);
  const Vector theta_ = {0.3, -0.4};
  const Vector x_ = {2.0, 1.0};
  const double y_ = -1.0;
};

TEST_F(IwpOracleTest, QuadraticLoss) {
  EXPECT_NEAR(IwpLoss(GlmLoss::Quadratic(), theta_, x_, y_, budget_),
              kQuadraticIwpLoss, 1e-12);
}

TEST_F(IwpOracleTest, ExponentialLoss) {
  EXPECT_NEAR(IwpLoss(GlmLoss::Exponential(), theta_, x_, y_, budget_),
              kExponentialIwpLoss, 1e-12 * kExponentialIwpLoss);
}

TEST_F(IwpOracleTest, QuadraticGrad) {
  const Vector g = IwpGrad(GlmLoss::Quadratic(), theta_, x_, y_, budget_);
  EXPECT_NEAR(g[0], kQuadraticIwpGrad[0], 1e-11);
  EXPECT_NEAR(g[1], kQuadraticIwpGrad[1], 1e-11);
}

TEST_F(IwpOracleTest, QuadraticSimplification) {
  const double s = InverseWeight(budget_.epsilon_y());
  const double m = y_ * Dot(theta_, x_);
  const GlmLoss q = GlmLoss::Quadratic();
  const double expected = s * q.profile().Value(m) +
                          (1 - s) * q.profile().Value(-m) -
                          0.5 * budget_.sigma_squared() * SquaredNorm(theta_);
  EXPECT_NEAR(IwpLoss(q, theta_, x_, y_, budget_), expected, 1e-12);
  const Vector gp = Grad(q, theta_, x_, y_);
  const Vector gm = Grad(q, theta_, x_, -y_);
  const Vector g = IwpGrad(q, theta_, x_, y_, budget_);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(g[i],
                s * gp[i] + (1 - s) * gm[i] - budget_.sigma_squared() * theta_[i],
                1e-11);
  }
}

TEST(IwpLossTest, NoNoiseLimit) {
  const auto budget = PrivacyBudget::Create(1e9, 100, 1e-5, 1);
  Rng rng(22);
  for (const GlmLoss& glm : AllLosses()) {
    for (int i = 0; i < 20; ++i) {
      const Vector theta = RandomVector(rng, 2, 1.0);
      const Vector x = RandomVector(rng, 2, 1.0);
      const double y = RandomLabel(rng);
      EXPECT_NEAR(IwpLoss(glm, theta, x, y, budget), Loss(glm, theta, x, y),
                  1e-12);
      EXPECT_LE(Distance(IwpGrad(glm, theta, x, y, budget), Grad(glm, theta, x, y)),
                1e-12);
    }
  }
}

TEST(IwpLossTest, LargeLabelBudgetLeavesOnlyFeatureInverse) {
  const auto budget = PrivacyBudget::Create(1.0, 100, 1e-5, 1);
  const Vector theta = {0.2, 0.1};
  const Vector x = {1.0, -3.0};
  const double v = budget.sigma_squared() * SquaredNorm(theta);
  const double m = Dot(theta, x);
  EXPECT_DOUBLE_EQ(IwpLoss(GlmLoss::Quadratic(), theta, x, 1.0, budget),
                   0.5 * (m - 1) * (m - 1) - 0.5 * v);
}

TEST(IwpLossTest, QuadraticAtZeroIsHalf) {
  const Vector zero = {0.0, 0.0};
  for (double eps : {0.1, 1.0, 5.0}) {
    const auto budget = PrivacyBudget::Create(eps, eps, 1e-5, 1);
    for (double y : {-1.0, 1.0}) {
      EXPECT_NEAR(IwpLoss(GlmLoss::Quadratic(), zero, Vector{40.0, -7.0}, y,
                          budget),
                  0.5, 1e-12);
    }
  }
}

TEST(IwpLossTest, RejectsRegressionBudgetAndBadLabels) {
  const auto reg = PrivacyBudget::CreateRegression(1, 1, 1e-5, 1, 1);
  const Vector t = {0.1};
  try {
    IwpLoss(GlmLoss::Quadratic(), t, t, 1.0, reg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModeMismatch);
  }
  EXPECT_THROW(IwpGrad(GlmLoss::Quadratic(), t, t, 1.0, reg), Error);
  const auto budget = PrivacyBudget::Create(1, 1, 1e-5, 1);
  EXPECT_THROW(IwpLoss(GlmLoss::Quadratic(), t, t, 0.3, budget), Error);
}

TEST(IwpGradTest, ConsistentWithIwpLoss) {
  const auto budget = PrivacyBudget::Create(2.0, 2.0, 1e-5, 1);
  Rng rng(23);
  std::normal_distribution<double> noise(0.0, std::sqrt(budget.sigma_squared()));
  for (const GlmLoss& glm : AllLosses()) {
    int checked = 0;
    while (checked < 100) {
      const Vector theta = RandomVector(rng, 2, 0.8);
      const double v = budget.sigma_squared() * SquaredNorm(theta);
      if (std::abs(v - 8.0) < 0.05) continue;  // logistic order switch
      Vector x = RandomVector(rng, 2, 0.7);
      for (double& xi : x) xi += noise(rng);
      const double y = RandomLabel(rng);
      const Vector g = IwpGrad(glm, theta, x, y, budget);
      const Vector fd = CentralDifference(
          [&](const Vector& t) { return IwpLoss(glm, t, x, y, budget); }, theta,
          1e-6);
      EXPECT_LE(Distance(g, fd), 1e-4 * Norm(g) + 1e-7)
          << glm.name() << " v=" << v;
      ++checked;
    }
  }
}

// Means over fresh releases of one (theta, x, y) at total epsilon 2.
TEST(IwpUnbiasednessTest, MonteCarloMeansMatchCleanValues) {
  const auto budget = PrivacyBudget::FromTotal(2.0, 1e-5, 1.0);
  const Vector theta = {0.06, -0.08};
  const Vector x = {0.6, 0.3};
  const double y = -1.0;
  for (const GlmLoss& glm : {GlmLoss::Quadratic(), GlmLoss::Exponential()}) {
    Rng rng(24);
    RunningStats loss;
    RunningStats grad[2];
    for (int i = 0; i < 1'000'000; ++i) {
      const LdpRecord r = SampleRelease(x, y, budget, rng);
      loss.Add(IwpLoss(glm, theta, r.features_noisy, r.label_noisy, budget));
      const Vector g = IwpGrad(glm, theta, r.features_noisy, r.label_noisy, budget);
      grad[0].Add(g[0]);
      grad[1].Add(g[1]);
    }
    EXPECT_LT(std::abs(loss.mean() - Loss(glm, theta, x, y)),
              4 * loss.std_error())
        << glm.name();
    const Vector clean = Grad(glm, theta, x, y);
    for (int j = 0; j < 2; ++j) {
      EXPECT_LT(std::abs(grad[j].mean() - clean[j]), 4 * grad[j].std_error())
          << glm.name() << " coordinate " << j;
    }
  }
}

TEST(RegressionGradTest, NoNoiseIsPlainLeastSquares) {
  const Vector theta = {0.5, -1.0};
  const Vector x = {2.0, 0.5};
  const double y = 0.3;
  const double r = Dot(theta, x) - y;
  const Vector g = RegressionDebiasedGrad(theta, x, y, 0.0);
  EXPECT_DOUBLE_EQ(g[0], r * x[0]);
  EXPECT_DOUBLE_EQ(g[1], r * x[1]);
  const Vector g0 = RegressionDebiasedGrad(Vector{0.0, 0.0}, x, y, 3.0);
  EXPECT_DOUBLE_EQ(g0[0], -x[0] * y);
  EXPECT_DOUBLE_EQ(g0[1], -x[1] * y);
}

TEST(RegressionGradTest, DebiasedInExpectation) {
  const auto budget = PrivacyBudget::CreateRegression(2.0, 2.0, 1e-5, 1.0, 1.0);
  const Vector x = {0.6, -0.3};
  const double y = 0.4;
  for (const Vector& theta : {Vector{0.7, 0.2}, Vector{0.0, 0.0}}) {
    Rng rng(25);
    RunningStats s[2];
    for (int i = 0; i < 1'000'000; ++i) {
      const LdpRecord r = SampleRelease(x, y, budget, rng);
      const Vector g =
          RegressionDebiasedGrad(theta, r.features_noisy, r.label_noisy, budget);
      s[0].Add(g[0]);
      s[1].Add(g[1]);
    }
    const double m = Dot(theta, x);
    for (int j = 0; j < 2; ++j) {
      EXPECT_LT(std::abs(s[j].mean() - (x[j] * m - x[j] * y)),
                4 * s[j].std_error());
    }
  }
}

TEST(RegressionGradTest, NeedsRegressionBudget) {
  const auto budget = PrivacyBudget::Create(1, 1, 1e-5, 1);
  try {
    RegressionDebiasedGrad(Vector{1.0}, Vector{1.0}, 1.0, budget);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kModeMismatch);
  }
}

TEST(NoisyRiskTest, ClosedFormExamples) {
  const auto quiet = PrivacyBudget::Create(1e9, 100, 1e-5, 1);
  EXPECT_NEAR(NoisyRiskClosedFormExponential(Vector{0.5, 0.5}, 0.8, 1.7, quiet),
              0.8, 1e-12);
  const auto budget = PrivacyBudget::FromTotal(2, 1e-5, 1);
  EXPECT_DOUBLE_EQ(
      NoisyRiskClosedFormExponential(Vector{0.0, 0.0}, 1.0, 1.0, budget), 1.0);
  const Vector theta = {0.1, 0.2};
  const double s = FlipRetentionProbability(budget.epsilon_y());
  EXPECT_DOUBLE_EQ(
      NoisyRiskClosedFormExponential(theta, 0.9, 1.2, budget),
      std::exp(0.5 * budget.sigma_squared() * SquaredNorm(theta)) *
          (s * 0.9 + (1 - s) * 1.2));
}

}  // namespace
}  // namespace iwp
