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

#ifndef IWP_DERIVATIVE_STACK_H_
#define IWP_DERIVATIVE_STACK_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace iwp {

// A scalar function together with its exact derivatives. For a margin loss
// f(theta^T x y) every iterated Laplacian reduces to
//   Delta^k f = ||theta||^{2k} f^{(2k)},
// so scalar derivatives are all the series transforms need.
class DerivativeStack {
 public:
  virtual ~DerivativeStack() = default;

  // f^{(order)}(z). Exact (closed form) for order <= max_derivative_order().
  virtual double Derivative(double z, int order) const = 0;

  // Fills out[k] = f^{(k)}(z) for k < out.size(). Implementations that share
  // work across orders override this.
  virtual void Derivatives(double z, std::span<double> out) const;

  // Largest series truncation order K supported; derivatives are available up
  // to order 2K + 3 (the gradient estimator needs f''' at order K).
  virtual int max_series_order() const = 0;

  // Growth rate `a` such that f belongs to the Gaussian-growth class for
  // every a' > a (0 means "any positive a"). nullopt when no certificate is
  // known, in which case only empirical truncation-bias control applies.
  virtual std::optional<double> growth_rate() const { return std::nullopt; }

  virtual std::string name() const = 0;

  double Value(double z) const { return Derivative(z, 0); }
  int max_derivative_order() const { return 2 * max_series_order() + 3; }
};

using DerivativeStackPtr = std::shared_ptr<const DerivativeStack>;

// f(z) = (z - 1)^2 / 2.
class QuadraticMargin final : public DerivativeStack {
 public:
  explicit QuadraticMargin(int max_series_order = 64)
      : max_order_(max_series_order) {}
  double Derivative(double z, int order) const override;
  int max_series_order() const override { return max_order_; }
  std::optional<double> growth_rate() const override { return 0.0; }
  std::string name() const override { return "quadratic"; }

 private:
  int max_order_;
};

// f(z) = scale * exp(rate * z). The exponential margin loss is rate = -1.
class Exponential final : public DerivativeStack {
 public:
  explicit Exponential(double rate = -1.0, double scale = 1.0,
                       int max_series_order = 64)
      : rate_(rate), scale_(scale), max_order_(max_series_order) {}
  double Derivative(double z, int order) const override;
  int max_series_order() const override { return max_order_; }
  std::optional<double> growth_rate() const override { return 0.0; }
  std::string name() const override { return "exponential"; }

  double rate() const { return rate_; }
  double scale() const { return scale_; }

 private:
  double rate_;
  double scale_;
  int max_order_;
};

// f(z) = log(1 + exp(-z)).
//
// With u = sigmoid(z) and v = sigmoid(-z) = 1 - u, we have u' = uv and
// v' = -uv, so every derivative of the sigmoid is a homogeneous polynomial in
// (u, v):  d/dz (u^a v^b) = a u^a v^{b+1} - b u^{a+1} v^b.  Evaluating u and
// v separately (never as 1 - u) keeps the tails accurate. f' = -v and
// f^{(k)} = sigmoid^{(k-1)} for k >= 2.
class LogisticMargin final : public DerivativeStack {
 public:
  static constexpr int kMaxSeriesOrder = 10;

  LogisticMargin();
  double Derivative(double z, int order) const override;
  void Derivatives(double z, std::span<double> out) const override;
  int max_series_order() const override { return kMaxSeriesOrder; }
  std::string name() const override { return "logistic"; }

 private:
  // coefficients_[n][a] multiplies u^a v^{n+1-a} in sigmoid^{(n)}.
  std::vector<std::vector<double>> coefficients_;
};

// f(z) = sum_i c_i z^i.
class Polynomial final : public DerivativeStack {
 public:
  explicit Polynomial(std::vector<double> coefficients,
                      int max_series_order = 64);
  double Derivative(double z, int order) const override;
  int max_series_order() const override { return max_order_; }
  std::optional<double> growth_rate() const override { return 0.0; }
  std::string name() const override { return "polynomial"; }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }

 private:
  std::vector<double> coefficients_;
  int max_order_;
};

// f = sum_i w_i f_i.
class LinearCombination final : public DerivativeStack {
 public:
  explicit LinearCombination(
      std::vector<std::pair<double, DerivativeStackPtr>> terms);
  double Derivative(double z, int order) const override;
  int max_series_order() const override;
  std::optional<double> growth_rate() const override;
  std::string name() const override { return "linear-combination"; }

 private:
  std::vector<std::pair<double, DerivativeStackPtr>> terms_;
};

}  // namespace iwp

#endif  // IWP_DERIVATIVE_STACK_H_
