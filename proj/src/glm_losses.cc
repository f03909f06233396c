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

#include <cmath>
#include <memory>

#include "iwp/error.h"
#include "iwp/transforms.h"

namespace iwp {
namespace {

constexpr double kLogisticSwitchVariance = 8.0;

// W_v^-1[f^{(order)}](z) using truncation K for the series kind.
double InverseAt(const GlmLoss& glm, double v, double z, int order, int K) {
  switch (glm.kind()) {
    case LossKind::kQuadratic:
      switch (order) {
        case 0: return 0.5 * (z - 1.0) * (z - 1.0) - 0.5 * v;
        case 1: return z - 1.0;
        case 2: return 1.0;
        default: return 0.0;
      }
    case LossKind::kExponential: {
      // One exponent: e^{-z} and e^{-v/2} separately under/overflow.
      const double e = std::exp(-z - 0.5 * v);
      return (order % 2 == 0) ? e : -e;
    }
    case LossKind::kLogistic:
      if (K < 0) return 0.0;
      return WeierstrassSeries(glm.profile(), z, v,
                               {K, SeriesDirection::kInverse}, order);
  }
  Fail(ErrorCode::kInternal, "unknown loss kind");
}

void CheckClassification(const PrivacyBudget& budget) {
  if (budget.label_mode() != LabelMode::kBinary) {
    Fail(ErrorCode::kModeMismatch,
         "IWP classification estimators need a binary-label budget");
  }
}

void CheckLabel(double y) {
  if (y != 1.0 && y != -1.0) {
    Fail(ErrorCode::kInvalidLabel, "label must be +1 or -1");
  }
}

}  // namespace

GlmLoss GlmLoss::Quadratic() {
  return GlmLoss(LossKind::kQuadratic, std::make_shared<QuadraticMargin>(),
                 std::nullopt);
}

GlmLoss GlmLoss::Exponential() {
  return GlmLoss(LossKind::kExponential, std::make_shared<iwp::Exponential>(),
                 std::nullopt);
}

GlmLoss GlmLoss::Logistic(std::optional<int> truncation_order) {
  if (truncation_order) {
    if (*truncation_order < 0) {
      Fail(ErrorCode::kInvalidArgument, "truncation order must be >= 0");
    }
    if (*truncation_order > LogisticMargin::kMaxSeriesOrder) {
      Fail(ErrorCode::kOrderExceeded,
           "logistic truncation order " + std::to_string(*truncation_order) +
               " exceeds " + std::to_string(LogisticMargin::kMaxSeriesOrder));
    }
  }
  static const DerivativeStackPtr kProfile =
      std::make_shared<LogisticMargin>();
  return GlmLoss(LossKind::kLogistic, kProfile, truncation_order);
}

std::string GlmLoss::name() const {
  switch (kind_) {
    case LossKind::kQuadratic: return "quadratic";
    case LossKind::kExponential: return "exponential";
    case LossKind::kLogistic:
      return pinned_k_ ? "logistic(K=" + std::to_string(*pinned_k_) + ")"
                       : "logistic";
  }
  return "unknown";
}

int GlmLoss::TruncationOrder(double variance) const {
  if (exact()) return -1;
  if (pinned_k_) return *pinned_k_;
  return variance > kLogisticSwitchVariance ? 1 : 2;
}

double Loss(const GlmLoss& glm, std::span<const double> theta,
            std::span<const double> x, double y) {
  CheckSameSize(theta, x, "theta vs x");
  return glm.profile().Value(y * Dot(theta, x));
}

Vector Grad(const GlmLoss& glm, std::span<const double> theta,
            std::span<const double> x, double y) {
  CheckSameSize(theta, x, "theta vs x");
  const double scale = glm.profile().Derivative(y * Dot(theta, x), 1) * y;
  Vector g(x.begin(), x.end());
  for (double& gi : g) gi *= scale;
  return g;
}

double WInvGlm(const GlmLoss& glm, std::span<const double> theta, double z,
               double sigma_squared, int derivative_order) {
  if (!(sigma_squared >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "sigma_squared must be nonnegative");
  }
  const double v = sigma_squared * SquaredNorm(theta);
  return InverseAt(glm, v, z, derivative_order, glm.TruncationOrder(v));
}

double IwpLoss(const GlmLoss& glm, std::span<const double> theta,
               std::span<const double> x_tilde, double y_tilde,
               const PrivacyBudget& budget) {
  CheckClassification(budget);
  CheckSameSize(theta, x_tilde, "theta vs x_tilde");
  CheckLabel(y_tilde);
  const double v = budget.sigma_squared() * SquaredNorm(theta);
  const double m = y_tilde * Dot(theta, x_tilde);
  const int K = glm.TruncationOrder(v);
  const double s = InverseWeight(budget.epsilon_y());
  return s * InverseAt(glm, v, m, 0, K) + (1.0 - s) * InverseAt(glm, v, -m, 0, K);
}

Vector IwpGrad(const GlmLoss& glm, std::span<const double> theta,
               std::span<const double> x_tilde, double y_tilde,
               const PrivacyBudget& budget) {
  CheckClassification(budget);
  CheckSameSize(theta, x_tilde, "theta vs x_tilde");
  CheckLabel(y_tilde);
  const double sigma2 = budget.sigma_squared();
  const double v = sigma2 * SquaredNorm(theta);
  const double m = y_tilde * Dot(theta, x_tilde);
  const int K = glm.TruncationOrder(v);
  const double s = InverseWeight(budget.epsilon_y());

  // Coefficients of theta and of x~ y~ in S~ G(+m) + (1 - S~) G(-m).
  const double a_plus = InverseAt(glm, v, m, 2, K - 1);
  const double a_minus = InverseAt(glm, v, -m, 2, K - 1);
  const double b_plus = InverseAt(glm, v, m, 1, K);
  const double b_minus = InverseAt(glm, v, -m, 1, K);
  const double theta_coef = -sigma2 * (s * a_plus + (1.0 - s) * a_minus);
  const double x_coef = y_tilde * (s * b_plus - (1.0 - s) * b_minus);

  Vector g(theta.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = theta_coef * theta[i] + x_coef * x_tilde[i];
  }
  return g;
}

Vector RegressionDebiasedGrad(std::span<const double> theta,
                              std::span<const double> x_tilde, double y_tilde,
                              double sigma_squared_x) {
  CheckSameSize(theta, x_tilde, "theta vs x_tilde");
  if (!(sigma_squared_x >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "sigma_squared_x must be nonnegative");
  }
  const double residual = Dot(theta, x_tilde) - y_tilde;
  Vector g(theta.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = x_tilde[i] * residual - sigma_squared_x * theta[i];
  }
  return g;
}

Vector RegressionDebiasedGrad(std::span<const double> theta,
                              std::span<const double> x_tilde, double y_tilde,
                              const PrivacyBudget& budget) {
  if (budget.label_mode() != LabelMode::kContinuous) {
    Fail(ErrorCode::kModeMismatch,
         "regression gradient needs a continuous-label budget");
  }
  return RegressionDebiasedGrad(theta, x_tilde, y_tilde,
                                budget.sigma_squared());
}

double NoisyRiskClosedFormExponential(std::span<const double> theta,
                                      double risk_plus, double risk_minus,
                                      const PrivacyBudget& budget) {
  const double s = FlipRetentionProbability(budget.epsilon_y());
  return std::exp(0.5 * budget.sigma_squared() * SquaredNorm(theta)) *
         (s * risk_plus + (1.0 - s) * risk_minus);
}

}  // namespace iwp
