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

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "iwp/data.h"
#include "iwp/error.h"
#include "iwp/validation.h"

namespace iwp {
namespace {

constexpr int kBernoulliPairs = 100;
constexpr int kBiasSeriesTerms = 30;
constexpr double kBiasMarginVariance = 0.5;

Vector UniformInBall(int p, double radius, Rng& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector v(p);
  double norm = 0.0;
  while (norm < 1e-12) {
    for (double& c : v) c = normal(rng);
    norm = Norm(v);
  }
  const double r = radius * std::pow(unit(rng), 1.0 / p);
  for (double& c : v) c *= r / norm;
  return v;
}

void Append(std::vector<McReport>& out, std::vector<McReport> more) {
  for (McReport& r : more) out.push_back(std::move(r));
}

std::vector<McReport> Unbiasedness(const SuiteOptions& o) {
  std::vector<McReport> out;
  for (int i = 0; i < o.n_points; ++i) {
    Rng rng = MakeRng(o.seed, 100 + i);
    const Vector theta = UniformInBall(o.p, o.theta_radius, rng);
    const Vector x = UniformInBall(o.p, o.budget.feature_norm_bound(), rng);
    const double y = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
    Append(out, CheckUnbiasedness(o.loss, theta, x, y, o.budget, o.n_samples,
                                  rng, o.z_threshold));
  }
  return out;
}

std::vector<McReport> BernoulliVariance(const SuiteOptions& o) {
  std::vector<McReport> out;
  Rng rng = MakeRng(o.seed, 200);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  for (double eps : {0.5, 1.0, 2.0, 5.0, o.budget.epsilon_y()}) {
    out.push_back(CheckBernoulliVariance(0.75, 0.75, eps));
    out.push_back(CheckBernoulliVariance(1.0, -1.0, eps));
    for (int i = 0; i < kBernoulliPairs; ++i) {
      const double a = value(rng);
      out.push_back(CheckBernoulliVariance(a, value(rng), eps));
    }
  }
  return out;
}

std::vector<McReport> WeierstrassVariance(const SuiteOptions& o) {
  std::vector<McReport> out;
  Rng rng = MakeRng(o.seed, 300);
  auto add = [&](const WeierstrassVarianceReport& r) {
    out.push_back(r.derived);
    out.push_back(r.second_moment);
  };
  add(CheckWeierstrassVariance(QuadraticFamily{{1, 0, 0, 1}, {0, 0}, 0.0},
                               std::vector<double>{1.0, 0.0}, 0.5, o.n_samples,
                               rng));
  // A non-symmetric A checks the symmetrization.
  QuadraticFamily q;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  q.a.resize(o.p * o.p);
  for (double& v : q.a) v = u(rng);
  q.b.resize(o.p);
  for (double& v : q.b) v = u(rng);
  q.c = u(rng);
  Vector x(o.p);
  for (double& v : x) v = u(rng);
  add(CheckWeierstrassVariance(q, x, 0.3, o.n_samples, rng));
  add(CheckWeierstrassVariance(ExponentialFamily{{1.0}},
                               std::vector<double>{0.0}, 0.25, o.n_samples,
                               rng));
  return out;
}

std::vector<McReport> VarianceBound(const SuiteOptions& o) {
  Rng rng = MakeRng(o.seed, 400);
  VarianceBoundGrid grid;
  grid.p = o.p;
  grid.theta_radius = o.theta_radius;
  grid.n_samples = std::max<std::int64_t>(1000, o.n_samples / 50);
  return {CheckVarianceBound(o.loss, o.budget, grid, rng).report};
}

std::vector<McReport> BiasDecomposition(const SuiteOptions& o) {
  DatasetSpec spec;
  spec.n = 10000;
  spec.p = o.p;
  spec.class_separation = 1.0;
  spec.seed = o.seed;
  std::vector<RawRecord> data = GenerateSynthetic(spec);
  // Box data has norm up to sqrt(p); shrink it into the budget's ball.
  const double shrink = o.budget.feature_norm_bound() / std::sqrt(o.p);
  for (RawRecord& r : data) {
    for (double& v : r.features) v *= shrink;
  }
  Rng rng = MakeRng(o.seed, 500);
  Vector theta = UniformInBall(o.p, 1.0, rng);
  const double target_norm =
      std::sqrt(kBiasMarginVariance / o.budget.sigma_squared());
  const double norm = Norm(theta);
  for (double& v : theta) v *= target_norm / norm;
  const std::int64_t copies = std::max<std::int64_t>(20, o.n_samples / 10000);
  const BiasDecompositionReport r = CheckBiasDecomposition(
      theta, data, o.budget, kBiasSeriesTerms, copies, rng);
  return {r.mc_vs_closed, r.series_vs_closed};
}

std::vector<McReport> Regression(const SuiteOptions& o) {
  const PrivacyBudget budget = PrivacyBudget::CreateRegression(
      o.budget.epsilon_x(), o.budget.epsilon_y(), o.budget.delta(),
      o.budget.feature_norm_bound(), 1.0);
  std::vector<McReport> out;
  for (int i = 0; i < o.n_points; ++i) {
    Rng rng = MakeRng(o.seed, 600 + i);
    const Vector theta = UniformInBall(o.p, o.theta_radius, rng);
    const Vector x = UniformInBall(o.p, budget.feature_norm_bound(), rng);
    const double y = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    Append(out, CheckRegressionDebias(theta, x, y, budget, o.n_samples, rng,
                                      o.z_threshold));
  }
  return out;
}

}  // namespace

std::vector<std::string> ValidationSuiteNames() {
  return {"unbiasedness",       "bernoulli-variance", "weierstrass-variance",
          "variance-bound",     "bias-decomposition", "regression",
          "all"};
}

std::vector<McReport> RunValidationSuite(std::string_view suite,
                                         const SuiteOptions& options) {
  if (options.p < 1 || options.n_points < 1 || options.n_samples < 2) {
    Fail(ErrorCode::kInvalidArgument, "invalid suite options");
  }
  if (suite == "unbiasedness") return Unbiasedness(options);
  if (suite == "bernoulli-variance") return BernoulliVariance(options);
  if (suite == "weierstrass-variance") return WeierstrassVariance(options);
  if (suite == "variance-bound") return VarianceBound(options);
  if (suite == "bias-decomposition") return BiasDecomposition(options);
  if (suite == "regression") return Regression(options);
  if (suite == "all") {
    std::vector<McReport> out;
    for (const std::string& name : ValidationSuiteNames()) {
      if (name != "all") Append(out, RunValidationSuite(name, options));
    }
    return out;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace iwp
