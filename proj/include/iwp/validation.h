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

// Statistical oracles for the closed-form claims: Monte-Carlo z-tests of
// unbiasedness, exact and Monte-Carlo variance checks, the gradient variance
// bound and the bias decomposition. Targets are always computed by a path
// that does not share code with the estimator under test.

#ifndef IWP_VALIDATION_H_
#define IWP_VALIDATION_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "iwp/derivative_stack.h"
#include "iwp/glm_losses.h"
#include "iwp/mechanisms.h"
#include "iwp/random.h"
#include "iwp/vector_ops.h"

namespace iwp {

inline constexpr double kDefaultZThreshold = 4.0;

enum class Comparison {
  kZScore,      // |estimate - target| / std_error < tolerance
  kAbsolute,    // |estimate - target| <= tolerance
  kRelative,    // |estimate - target| <= tolerance * |target|
  kUpperBound,  // estimate <= target
  kInfo,        // recorded only, never fails
};

enum class Verdict { kPass, kFail };

struct McReport {
  std::string check_id;
  std::string params;  // "key=value;key=value"
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  double z_score = 0.0;
  std::int64_t n_samples = 0;
  Comparison comparison = Comparison::kZScore;
  double tolerance = kDefaultZThreshold;
  // Approximate checks (e.g. truncated logistic series) are reported but do
  // not fail a suite.
  bool hard = true;
  Verdict verdict = Verdict::kPass;
  std::string note;
};

// Fills z_score and verdict from estimate, std_error, target and tolerance.
void Finalize(McReport& report);

bool AnyHardFailure(const std::vector<McReport>& reports);

// One row per report: check_id,params,estimate,std_error,target,z_score,
// n_samples,comparison,tolerance,hard,verdict,note.
void WriteReportCsv(std::ostream& out, const std::vector<McReport>& reports);

// Mean of IwpLoss and of every IwpGrad coordinate over fresh releases of
// (x, y), against the clean loss and gradient. Loss reports come first.
std::vector<McReport> CheckUnbiasedness(const GlmLoss& glm,
                                        std::span<const double> theta,
                                        std::span<const double> x, double y,
                                        const PrivacyBudget& budget,
                                        std::int64_t n_samples, Rng& rng,
                                        double z_threshold = kDefaultZThreshold);

// Variance of B^-1[g](y~) by enumerating both outcomes, against
// S~ (S~ - 1) (g(1) - g(-1))^2. Relative tolerance 1e-12 (absolute below 1).
McReport CheckBernoulliVariance(double g_plus, double g_minus,
                                double epsilon_y);

// f(x) = x^T A x / 2 + b^T x + c, A row-major p x p.
struct QuadraticFamily {
  std::vector<double> a;
  Vector b;
  double c = 0.0;
};

// f(x) = exp(a^T x).
struct ExponentialFamily {
  Vector a;
};

using WeierstrassFamily = std::variant<QuadraticFamily, ExponentialFamily>;

struct WeierstrassVarianceReport {
  // Against the variance: 2t||Sigma x + b||^2 + 2t^2 Tr(Sigma^2) or
  // e^{2a^T x}(e^{2t||a||^2} - 1). Quadratic uses a 3% relative tolerance,
  // exponential a z-test.
  McReport derived;
  // Against the expression that adds f(x)^2 (the second moment), logged.
  McReport second_moment;
  // "variance" or "second-moment": whichever the Monte-Carlo value is closer
  // to in standard errors.
  std::string matches;
};

// Variance of W^-1_{2t}[f](x + w), w ~ N(0, 2t I), by Monte Carlo.
WeierstrassVarianceReport CheckWeierstrassVariance(
    const WeierstrassFamily& family, std::span<const double> x, double t,
    std::int64_t n_samples, Rng& rng);

struct VarianceBoundGrid {
  int p = 2;
  int n_theta = 10;      // on the sphere of radius theta_radius
  int n_x = 10;          // on the sphere of radius feature_norm_bound
  int n_s = 5;           // s in (0, sigma^2 / 2]
  double theta_radius = 1.0;
  std::int64_t n_samples = 20000;  // releases per (theta, x, y)
};

struct VarianceBoundReport {
  double c = 0.0;  // grid supremum
  double bound = 0.0;
  double max_empirical = 0.0;
  Vector worst_theta;
  Vector worst_x;
  double worst_y = 0.0;
  // Largest relative gap between the generic second-derivative matrix and
  // the closed-form Frobenius norms (quadratic and exponential only).
  double closed_form_gap = 0.0;
  McReport report;  // estimate = max_empirical, target = 1.05 * bound
};

// C = sup over the grid of max(||grad l||, ||W^-1_{2s}[grad_theta grad_x l]||_F)
// and the bound C^2 (sigma^2 + 4 S~ (S~ - 1)(1 + sigma^2)), compared with the
// largest Monte-Carlo E||IwpGrad - grad||^2 over the (theta, x, y) grid.
VarianceBoundReport CheckVarianceBound(const GlmLoss& glm,
                                       const PrivacyBudget& budget,
                                       const VarianceBoundGrid& grid, Rng& rng);

// Terms of the noisy-risk decomposition for a margin loss f:
//   label       = (1 - S)(E f(-m) - E f(m))
//   feature     = S sum_{k=1..K} (v/2)^k / k! E f^{(2k)}(m)
//   interaction = (1 - S) sum_{k=1..K} (v/2)^k / k! E f^{(2k)}(-m)
// with m = y theta^T x over the dataset and v = sigma^2 ||theta||^2.
struct BiasSeriesTerms {
  double clean_risk = 0.0;
  double label = 0.0;
  double feature = 0.0;
  double interaction = 0.0;
  double noisy_risk() const { return clean_risk + label + feature + interaction; }
};

BiasSeriesTerms BiasSeries(const DerivativeStack& f,
                           std::span<const double> theta,
                           const std::vector<RawRecord>& data,
                           double sigma_squared, double epsilon_y, int K);

struct BiasDecompositionReport {
  double mc_noisy_risk = 0.0;      // (a)
  double mc_std_error = 0.0;
  double closed_form = 0.0;        // (b)
  BiasSeriesTerms series;          // (c)
  McReport mc_vs_closed;           // z-test
  McReport series_vs_closed;       // relative tolerance
};

// Exponential loss. (a) averages the loss over `n_copies` independent
// releases of the whole dataset.
BiasDecompositionReport CheckBiasDecomposition(
    std::span<const double> theta, const std::vector<RawRecord>& data,
    const PrivacyBudget& budget, int K_terms, std::int64_t n_copies, Rng& rng,
    double series_tolerance = 1e-8);

// Mean of RegressionDebiasedGrad over releases under a regression budget,
// against x (theta^T x) - x y, per coordinate.
std::vector<McReport> CheckRegressionDebias(
    std::span<const double> theta, std::span<const double> x, double y,
    const PrivacyBudget& budget, std::int64_t n_samples, Rng& rng,
    double z_threshold = kDefaultZThreshold);

// Named groups of checks, as run by the command-line tool:
//   unbiasedness, bernoulli-variance, weierstrass-variance, variance-bound,
//   bias-decomposition, regression, all.
struct SuiteOptions {
  PrivacyBudget budget = PrivacyBudget::FromTotal(2.0, 1e-5, 1.0);
  GlmLoss loss = GlmLoss::Quadratic();
  std::uint64_t seed = 0;
  std::int64_t n_samples = 100000;
  int p = 2;
  int n_points = 3;
  double theta_radius = 1.0;
  double z_threshold = kDefaultZThreshold;
};

std::vector<std::string> ValidationSuiteNames();
// Throws kInvalidArgument for an unknown suite name.
std::vector<McReport> RunValidationSuite(std::string_view suite,
                                         const SuiteOptions& options);

}  // namespace iwp

#endif  // IWP_VALIDATION_H_
