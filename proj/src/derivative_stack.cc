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

#include "iwp/derivative_stack.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "iwp/error.h"

namespace iwp {
namespace {

void CheckOrder(const DerivativeStack& f, int order) {
  if (order < 0 || order > f.max_derivative_order()) {
    Fail(ErrorCode::kOrderExceeded,
         f.name() + " derivative of order " + std::to_string(order) +
             " requested, supported up to " +
             std::to_string(f.max_derivative_order()));
  }
}

struct SigmoidPair {
  double u;  // sigmoid(z)
  double v;  // sigmoid(-z)
};

SigmoidPair StableSigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return {1.0 / (1.0 + e), e / (1.0 + e)};
  }
  const double e = std::exp(z);
  return {e / (1.0 + e), 1.0 / (1.0 + e)};
}

double Softplus(double t) {
  // log(1 + exp(t))
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace

void DerivativeStack::Derivatives(double z, std::span<double> out) const {
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = Derivative(z, static_cast<int>(k));
  }
}

double QuadraticMargin::Derivative(double z, int order) const {
  CheckOrder(*this, order);
  switch (order) {
    case 0: return 0.5 * (z - 1.0) * (z - 1.0);
    case 1: return z - 1.0;
    case 2: return 1.0;
    default: return 0.0;
  }
}

double Exponential::Derivative(double z, int order) const {
  CheckOrder(*this, order);
  return scale_ * std::pow(rate_, order) * std::exp(rate_ * z);
}

LogisticMargin::LogisticMargin() {
  // sigmoid^{(n)} for n = 0 .. max_derivative_order() - 1.
  const int max_n = max_derivative_order() - 1;
  coefficients_.resize(max_n + 1);
  coefficients_[0] = {0.0, 1.0};
  for (int n = 0; n < max_n; ++n) {
    const std::vector<double>& c = coefficients_[n];
    std::vector<double> next(n + 3, 0.0);
    for (int a = 0; a <= n + 1; ++a) {
      if (c[a] == 0.0) continue;
      const int b = n + 1 - a;
      next[a] += a * c[a];
      next[a + 1] -= b * c[a];
    }
    coefficients_[n + 1] = std::move(next);
  }
}

double LogisticMargin::Derivative(double z, int order) const {
  CheckOrder(*this, order);
  if (order == 0) return Softplus(-z);
  const SigmoidPair s = StableSigmoid(z);
  if (order == 1) return -s.v;
  // sigmoid^{(n)} is homogeneous of degree n + 1. Powers are built by
  // repeated multiplication, exactly as in Derivatives().
  std::array<double, 2 * kMaxSeriesOrder + 5> pu{};
  std::array<double, 2 * kMaxSeriesOrder + 5> pv{};
  pu[0] = pv[0] = 1.0;
  for (int i = 1; i <= order; ++i) {
    pu[i] = pu[i - 1] * s.u;
    pv[i] = pv[i - 1] * s.v;
  }
  const std::vector<double>& c = coefficients_[order - 1];
  double sum = 0.0;
  for (int a = 0; a <= order; ++a) sum += c[a] * pu[a] * pv[order - a];
  return sum;
}

void LogisticMargin::Derivatives(double z, std::span<double> out) const {
  if (out.empty()) return;
  CheckOrder(*this, static_cast<int>(out.size()) - 1);
  const SigmoidPair s = StableSigmoid(z);
  out[0] = Softplus(-z);
  if (out.size() == 1) return;
  out[1] = -s.v;
  const int max_degree = static_cast<int>(out.size()) - 1;
  std::array<double, 2 * kMaxSeriesOrder + 5> pu{};
  std::array<double, 2 * kMaxSeriesOrder + 5> pv{};
  pu[0] = pv[0] = 1.0;
  for (int i = 1; i <= max_degree; ++i) {
    pu[i] = pu[i - 1] * s.u;
    pv[i] = pv[i - 1] * s.v;
  }
  for (int order = 2; order <= max_degree; ++order) {
    const std::vector<double>& c = coefficients_[order - 1];
    double sum = 0.0;
    for (int a = 0; a <= order; ++a) sum += c[a] * pu[a] * pv[order - a];
    out[order] = sum;
  }
}

Polynomial::Polynomial(std::vector<double> coefficients, int max_series_order)
    : coefficients_(std::move(coefficients)), max_order_(max_series_order) {
  if (coefficients_.empty()) coefficients_.push_back(0.0);
}

double Polynomial::Derivative(double z, int order) const {
  CheckOrder(*this, order);
  const int deg = degree();
  if (order > deg) return 0.0;
  // Horner on the differentiated coefficients c_i * i! / (i - order)!.
  double sum = 0.0;
  for (int i = deg; i >= order; --i) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= static_cast<double>(i - j);
    sum = sum * z + coefficients_[i] * falling;
  }
  return sum;
}

LinearCombination::LinearCombination(
    std::vector<std::pair<double, DerivativeStackPtr>> terms)
    : terms_(std::move(terms)) {
  for (const auto& [w, f] : terms_) {
    if (!f) Fail(ErrorCode::kInvalidArgument, "null term in combination");
  }
}

double LinearCombination::Derivative(double z, int order) const {
  CheckOrder(*this, order);
  double sum = 0.0;
  for (const auto& [w, f] : terms_) sum += w * f->Derivative(z, order);
  return sum;
}

int LinearCombination::max_series_order() const {
  int k = std::numeric_limits<int>::max();
  for (const auto& [w, f] : terms_) k = std::min(k, f->max_series_order());
  return terms_.empty() ? 0 : k;
}

std::optional<double> LinearCombination::growth_rate() const {
  double a = 0.0;
  for (const auto& [w, f] : terms_) {
    const std::optional<double> r = f->growth_rate();
    if (!r) return std::nullopt;
    a = std::max(a, *r);
  }
  return a;
}

}  // namespace iwp
