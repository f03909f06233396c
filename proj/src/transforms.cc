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

#include "iwp/transforms.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iwp/error.h"
#include "iwp/running_stats.h"

namespace iwp {
namespace {

constexpr int kKahanThreshold = 16;

void CheckVariance(double variance) {
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    std::ostringstream os;
    os << "variance must be finite and nonnegative, got " << variance;
    Fail(ErrorCode::kInvalidArgument, os.str());
  }
}

void CheckSeriesOrder(const DerivativeStack& f, int K, int offset) {
  if (K < 0) {
    Fail(ErrorCode::kInvalidArgument, "truncation order must be nonnegative");
  }
  if (K > f.max_series_order() || 2 * K + offset > f.max_derivative_order()) {
    Fail(ErrorCode::kOrderExceeded,
         "truncation order " + std::to_string(K) + " exceeds the " + f.name() +
             " limit of " + std::to_string(f.max_series_order()));
  }
}

void CheckLabel(double y) {
  if (y != 1.0 && y != -1.0) {
    std::ostringstream os;
    os << "label must be +1 or -1, got " << y;
    Fail(ErrorCode::kInvalidLabel, os.str());
  }
}

// partial[k] = sum_{j<=k} (+-v/2)^j / j! d[2j + offset] for k = 0..K. The
// coefficient follows c_{j+1} = c_j * (+-v/2) / (j + 1). Exactly zero terms
// are skipped so a terminating series yields bit-identical partial sums.
void PartialSums(std::span<const double> d, int offset, double variance,
                 SeriesDirection direction, int K, std::span<double> partial) {
  const double step =
      (direction == SeriesDirection::kForward ? 0.5 : -0.5) * variance;
  const bool kahan = K > kKahanThreshold;
  double sum = 0.0;
  double comp = 0.0;
  double coef = 1.0;
  for (int k = 0; k <= K; ++k) {
    const double term = coef * d[2 * k + offset];
    if (term != 0.0) {
      if (kahan) {
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
      } else {
        sum += term;
      }
    }
    partial[k] = sum;
    coef *= step / static_cast<double>(k + 1);
  }
}

// Per-point statistics of g^K(z + sqrt(v) w) - f(z) for every requested K,
// sharing the draws `w` across points and orders.
std::vector<TruncationBias> BiasForOrders(const DerivativeStack& f,
                                          std::span<const int> orders,
                                          double variance,
                                          std::span<const double> points,
                                          std::span<const double> w) {
  if (points.empty()) {
    Fail(ErrorCode::kInvalidArgument, "eval_points must be nonempty");
  }
  if (orders.empty()) return {};
  const int k_top = *std::max_element(orders.begin(), orders.end());
  for (int K : orders) CheckSeriesOrder(f, K, 0);
  const double sd = std::sqrt(variance);

  std::vector<double> d(2 * k_top + 1);
  std::vector<double> partial(k_top + 1);
  std::vector<std::vector<RunningStats>> stats(
      points.size(), std::vector<RunningStats>(orders.size()));
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double fz = f.Value(points[p]);
    for (double wi : w) {
      f.Derivatives(points[p] + sd * wi, d);
      PartialSums(d, 0, variance, SeriesDirection::kInverse, k_top, partial);
      for (std::size_t i = 0; i < orders.size(); ++i) {
        stats[p][i].Add(partial[orders[i]] - fz);
      }
    }
  }

  std::vector<TruncationBias> out(orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      const double b = std::abs(stats[p][i].mean());
      if (p == 0 || b > out[i].bias) {
        out[i] = {b, stats[p][i].std_error(), points[p]};
      }
    }
  }
  return out;
}

std::vector<double> StandardNormals(std::int64_t n, Rng& rng) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "mc_samples must be positive");
  std::normal_distribution<double> normal;
  std::vector<double> w(static_cast<std::size_t>(n));
  for (double& x : w) x = normal(rng);
  return w;
}

}  // namespace

double WeierstrassSeries(const DerivativeStack& f, double z, double variance,
                         const SeriesConfig& config, int derivative_offset) {
  CheckVariance(variance);
  if (derivative_offset < 0) {
    Fail(ErrorCode::kInvalidArgument, "derivative offset must be nonnegative");
  }
  const int K = config.truncation_order;
  CheckSeriesOrder(f, K, derivative_offset);
  if (variance == 0.0) return f.Derivative(z, derivative_offset);
  std::vector<double> d(2 * K + derivative_offset + 1);
  f.Derivatives(z, d);
  std::vector<double> partial(K + 1);
  PartialSums(d, derivative_offset, variance, config.direction, K, partial);
  return partial[K];
}

TruncatedSeries::TruncatedSeries(DerivativeStackPtr f, double variance,
                                 SeriesConfig config)
    : f_(std::move(f)), variance_(variance), config_(config) {
  if (!f_) Fail(ErrorCode::kInvalidArgument, "null derivative stack");
  CheckVariance(variance_);
  CheckSeriesOrder(*f_, config_.truncation_order, 0);
}

double TruncatedSeries::Derivative(double z, int order) const {
  if (order < 0 || order > max_derivative_order()) {
    Fail(ErrorCode::kOrderExceeded,
         name() + " derivative of order " + std::to_string(order) +
             " is not available");
  }
  return WeierstrassSeries(*f_, z, variance_, config_, order);
}

int TruncatedSeries::max_series_order() const {
  return f_->max_series_order() - config_.truncation_order;
}

std::optional<double> TruncatedSeries::growth_rate() const {
  return f_->growth_rate();
}

std::string TruncatedSeries::name() const {
  return (config_.direction == SeriesDirection::kForward ? "forward-" :
                                                           "inverse-") +
         std::to_string(config_.truncation_order) + "(" + f_->name() + ")";
}

McEstimate WeierstrassMc(const ScalarFunction& f, double z, double variance,
                         std::int64_t n_samples, Rng& rng) {
  CheckVariance(variance);
  if (n_samples < 1) {
    Fail(ErrorCode::kInvalidArgument, "n_samples must be positive");
  }
  if (variance == 0.0) return {f(z), 0.0, n_samples};
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  RunningStats stats;
  for (std::int64_t i = 0; i < n_samples; ++i) stats.Add(f(z + noise(rng)));
  return {stats.mean(), stats.std_error(), n_samples};
}

double BernoulliForward(const LabelFunction& g, double y, double epsilon_y) {
  CheckLabel(y);
  const double s = FlipRetentionProbability(epsilon_y);
  return s * g(y) + (1.0 - s) * g(-y);
}

double BernoulliInverse(const LabelFunction& g, double y_tilde,
                        double epsilon_y) {
  CheckLabel(y_tilde);
  const double s = InverseWeight(epsilon_y);
  return s * g(y_tilde) + (1.0 - s) * g(-y_tilde);
}

double ComposedInverse(const MarginFunction& h,
                       std::span<const double> x_tilde, double y_tilde,
                       const PrivacyBudget& budget,
                       const SeriesConfig& config) {
  if (!h.profile) Fail(ErrorCode::kInvalidArgument, "null margin profile");
  if (budget.label_mode() != LabelMode::kBinary) {
    Fail(ErrorCode::kModeMismatch,
         "composed inverse needs a randomized-response label");
  }
  CheckSameSize(h.theta, x_tilde, "theta vs x_tilde");
  const double v = budget.sigma_squared() * SquaredNorm(h.theta);
  const double margin = Dot(h.theta, x_tilde);
  auto feature_inverse = [&](double label) {
    return WeierstrassSeries(*h.profile, label * margin, v, config);
  };
  return BernoulliInverse(feature_inverse, y_tilde, budget.epsilon_y());
}

std::optional<double> ForwardValidityLimit(const DerivativeStack& f) {
  const std::optional<double> a = f.growth_rate();
  if (!a) return std::nullopt;
  if (*a <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * *a);
}

std::optional<double> InverseValidityLimit(const DerivativeStack& f) {
  const std::optional<double> a = f.growth_rate();
  if (!a) return std::nullopt;
  if (*a <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (4.0 * *a);
}

bool CheckSeriesValidity(const DerivativeStack& f, double variance,
                         SeriesDirection direction) {
  const std::optional<double> limit = direction == SeriesDirection::kForward
                                          ? ForwardValidityLimit(f)
                                          : InverseValidityLimit(f);
  std::ostringstream os;
  if (!limit) {
    os << f.name() << " has no growth certificate; the truncated series at "
       << "variance " << variance
       << " is uncontrolled, use truncation-bias estimates";
    Warn(os.str());
    return false;
  }
  if (!(variance < *limit)) {
    os << "variance " << variance << " is outside the convergence range (< "
       << *limit << ") of the " << f.name() << " series";
    Warn(os.str());
    return false;
  }
  return true;
}

TruncationBias TruncationBiasEstimate(const DerivativeStack& f, int K,
                                      double variance,
                                      std::span<const double> eval_points,
                                      std::int64_t mc_samples, Rng& rng) {
  CheckVariance(variance);
  CheckSeriesOrder(f, K, 0);
  const std::vector<double> w = StandardNormals(mc_samples, rng);
  const int orders[] = {K};
  return BiasForOrders(f, orders, variance, eval_points, w).front();
}

std::vector<TruncationBiasRow> TruncationBiasScan(
    const DerivativeStack& f, std::span<const int> orders,
    std::span<const double> variances, std::span<const double> eval_points,
    std::int64_t mc_samples, Rng& rng) {
  std::vector<TruncationBiasRow> rows;
  for (double v : variances) {
    CheckVariance(v);
    const std::vector<double> w = StandardNormals(mc_samples, rng);
    const std::vector<TruncationBias> b =
        BiasForOrders(f, orders, v, eval_points, w);
    for (std::size_t i = 0; i < orders.size(); ++i) {
      rows.push_back({v, orders[i], b[i]});
    }
  }
  return rows;
}

int OptimalTruncation(const DerivativeStack& f, double variance, int K_max,
                      std::span<const double> eval_points,
                      std::int64_t mc_samples, Rng& rng) {
  CheckVariance(variance);
  CheckSeriesOrder(f, K_max, 0);
  std::vector<int> orders(K_max + 1);
  for (int k = 0; k <= K_max; ++k) orders[k] = k;
  const std::vector<double> w = StandardNormals(mc_samples, rng);
  const std::vector<TruncationBias> b =
      BiasForOrders(f, orders, variance, eval_points, w);
  int best = 0;
  for (int k = 1; k <= K_max; ++k) {
    if (b[k].bias < b[best].bias) best = k;
  }
  return best;
}

std::vector<double> DefaultEvalGrid(double radius, int n) {
  if (n < 1 || !(radius >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "grid needs n >= 1 and radius >= 0");
  }
  if (n == 1) return {0.0};
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = -radius + 2.0 * radius * i / static_cast<double>(n - 1);
  }
  return grid;
}

}  // namespace iwp
