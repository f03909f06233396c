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

// Weierstrass and Bernoulli transforms and their inverses.
//
// For f in the Gaussian-growth class and noise w ~ N(0, v):
//   W_v[f](z)    = E f(z + w)      = sum_k  (v/2)^k / k! f^{(2k)}(z)
//   W_v^-1[f](z)                   = sum_k (-v/2)^k / k! f^{(2k)}(z)
// The forward series needs v < 1/(2a), the inverse v < 1/(4a). Randomized
// Response has the two-point analogue
//   B_eps[g](y)    = S g(y) + (1 - S) g(-y)
//   B_eps^-1[g](y) = S~ g(y) + (1 - S~) g(-y).

#ifndef IWP_TRANSFORMS_H_
#define IWP_TRANSFORMS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "iwp/derivative_stack.h"
#include "iwp/mechanisms.h"
#include "iwp/random.h"
#include "iwp/vector_ops.h"

namespace iwp {

enum class SeriesDirection { kForward, kInverse };

struct SeriesConfig {
  int truncation_order = 0;
  SeriesDirection direction = SeriesDirection::kInverse;
};

// sum_{k=0..K} (+-v/2)^k / k! f^{(2k + derivative_offset)}(z). The offset
// gives the series of f', f'', ... without building new stacks. Throws
// kOrderExceeded when K exceeds f.max_series_order() or the highest
// derivative needed is unavailable.
double WeierstrassSeries(const DerivativeStack& f, double z, double variance,
                         const SeriesConfig& config, int derivative_offset = 0);

// The truncated series g^K = sum_{k<=K} c_k f^{(2k)} as a stack of its own,
// so it can be fed back into another transform or sampled by Monte Carlo.
class TruncatedSeries final : public DerivativeStack {
 public:
  TruncatedSeries(DerivativeStackPtr f, double variance, SeriesConfig config);
  double Derivative(double z, int order) const override;
  int max_series_order() const override;
  std::optional<double> growth_rate() const override;
  std::string name() const override;

 private:
  DerivativeStackPtr f_;
  double variance_;
  SeriesConfig config_;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

using ScalarFunction = std::function<double(double)>;

// E_{w ~ N(0, variance)} f(z + w) by plain Monte Carlo. variance == 0 returns
// (f(z), 0) without sampling.
McEstimate WeierstrassMc(const ScalarFunction& f, double z, double variance,
                         std::int64_t n_samples, Rng& rng);

using LabelFunction = std::function<double(double)>;

double BernoulliForward(const LabelFunction& g, double y, double epsilon_y);
double BernoulliInverse(const LabelFunction& g, double y_tilde,
                        double epsilon_y);

// h(x, y) = f(y theta^T x). Every iterated Laplacian in x of such a ridge
// function is ||theta||^{2k} f^{(2k)}, so its inverse Weierstrass transform is
// the scalar series at variance sigma^2 ||theta||^2.
struct MarginFunction {
  DerivativeStackPtr profile;
  Vector theta;
};

// B^-1 over the label of W^-1 over the features, evaluated at a release.
double ComposedInverse(const MarginFunction& h,
                       std::span<const double> x_tilde, double y_tilde,
                       const PrivacyBudget& budget, const SeriesConfig& config);

// Largest variance for which the forward (1/(2a)) and inverse (1/(4a)) series
// are known to converge. Infinite for a == 0, nullopt without a certificate.
std::optional<double> ForwardValidityLimit(const DerivativeStack& f);
std::optional<double> InverseValidityLimit(const DerivativeStack& f);

// Warns when the series at `variance` is outside the certified range or when
// f carries no certificate at all. Returns true when the series is certified.
bool CheckSeriesValidity(const DerivativeStack& f, double variance,
                         SeriesDirection direction);

struct TruncationBias {
  double bias = 0.0;         // max over points of |MC mean of g^K - f|
  double std_error = 0.0;    // MC standard error at the maximizing point
  double worst_point = 0.0;  // the maximizing evaluation point
};

// Sup-over-grid estimate of the truncation bias of the K-term inverse series.
// One set of noise draws is shared by all evaluation points.
TruncationBias TruncationBiasEstimate(const DerivativeStack& f, int K,
                                      double variance,
                                      std::span<const double> eval_points,
                                      std::int64_t mc_samples, Rng& rng);

struct TruncationBiasRow {
  double variance = 0.0;
  int truncation_order = 0;
  TruncationBias estimate;
};

// All (variance, K) combinations. Within one variance every K sees the same
// noise draws, so differences across K are not masked by sampling noise.
std::vector<TruncationBiasRow> TruncationBiasScan(
    const DerivativeStack& f, std::span<const int> orders,
    std::span<const double> variances, std::span<const double> eval_points,
    std::int64_t mc_samples, Rng& rng);

// argmin over K in [0, K_max] of the estimated bias, ties to the smaller K.
int OptimalTruncation(const DerivativeStack& f, double variance, int K_max,
                      std::span<const double> eval_points,
                      std::int64_t mc_samples, Rng& rng);

// `n` uniform points on [-radius, radius].
std::vector<double> DefaultEvalGrid(double radius, int n = 41);

}  // namespace iwp

#endif  // IWP_TRANSFORMS_H_
