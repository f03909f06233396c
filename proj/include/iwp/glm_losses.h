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

// Margin losses f(theta^T x y) and their inverse-Weierstrass-private (IWP)
// estimators. With v = sigma^2 ||theta||^2 and m = theta^T x~ y~,
//   loss:  S~ W_v^-1[f](m) + (1 - S~) W_v^-1[f](-m)
//   grad:  S~ G(+m) + (1 - S~) G(-m),
//          G(+-m) = -sigma^2 theta W_v^-1[f''](+-m) + (+-x~ y~) W_v^-1[f'](+-m).
// The quadratic and exponential inverses are closed forms; the logistic one
// is a truncated series and therefore biased.

#ifndef IWP_GLM_LOSSES_H_
#define IWP_GLM_LOSSES_H_

#include <optional>
#include <span>
#include <string>

#include "iwp/derivative_stack.h"
#include "iwp/mechanisms.h"
#include "iwp/vector_ops.h"

namespace iwp {

enum class LossKind { kQuadratic, kExponential, kLogistic };

class GlmLoss {
 public:
  static GlmLoss Quadratic();
  static GlmLoss Exponential();
  // With no pinned order the truncation follows the variance: K = 1 when
  // sigma^2 ||theta||^2 > 8, K = 2 otherwise.
  static GlmLoss Logistic(std::optional<int> truncation_order = std::nullopt);

  LossKind kind() const { return kind_; }
  std::string name() const;
  const DerivativeStack& profile() const { return *profile_; }
  const DerivativeStackPtr& profile_ptr() const { return profile_; }

  // True when the inverse transform is a closed form (no truncation bias).
  bool exact() const { return kind_ != LossKind::kLogistic; }
  std::optional<int> pinned_truncation_order() const { return pinned_k_; }
  // Series order used at variance v; -1 for the closed-form kinds.
  int TruncationOrder(double variance) const;

 private:
  GlmLoss(LossKind kind, DerivativeStackPtr profile, std::optional<int> k)
      : kind_(kind), profile_(std::move(profile)), pinned_k_(k) {}

  LossKind kind_;
  DerivativeStackPtr profile_;
  std::optional<int> pinned_k_;
};

struct ModelState {
  Vector theta;
  double radius = 1.0;
};

struct RegularizerConfig {
  double lambda = 0.0;
};

// f(y theta^T x). The regularizer is added by the optimizer.
double Loss(const GlmLoss& glm, std::span<const double> theta,
            std::span<const double> x, double y);

// f'(y theta^T x) y x.
Vector Grad(const GlmLoss& glm, std::span<const double> theta,
            std::span<const double> x, double y);

// W^-1_{sigma^2 ||theta||^2}[f^{(derivative_order)}](z).
double WInvGlm(const GlmLoss& glm, std::span<const double> theta, double z,
               double sigma_squared, int derivative_order = 0);

double IwpLoss(const GlmLoss& glm, std::span<const double> theta,
               std::span<const double> x_tilde, double y_tilde,
               const PrivacyBudget& budget);

// For the logistic loss the f'' series is cut one order below the f' series,
// which makes the result the exact gradient of the truncated IwpLoss.
Vector IwpGrad(const GlmLoss& glm, std::span<const double> theta,
               std::span<const double> x_tilde, double y_tilde,
               const PrivacyBudget& budget);

// Least-squares gradient with E[x~ x~^T] = x x^T + sigma^2 I corrected:
//   x~ (theta^T x~) - sigma^2 theta - x~ y~.
// The label term is linear in y~ and needs no correction.
Vector RegressionDebiasedGrad(std::span<const double> theta,
                              std::span<const double> x_tilde, double y_tilde,
                              double sigma_squared_x);
// Same, taking sigma^2 from a regression budget; kModeMismatch otherwise.
Vector RegressionDebiasedGrad(std::span<const double> theta,
                              std::span<const double> x_tilde, double y_tilde,
                              const PrivacyBudget& budget);

// Expected exponential risk on released data:
//   e^{sigma^2 ||theta||^2 / 2} (S R(theta) + (1 - S) R(-theta)).
double NoisyRiskClosedFormExponential(std::span<const double> theta,
                                      double risk_plus, double risk_minus,
                                      const PrivacyBudget& budget);

}  // namespace iwp

#endif  // IWP_GLM_LOSSES_H_
