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

// One-shot local differential privacy release of labelled examples.
//
// Features go through the Gaussian mechanism with
//   sigma^2 = 8 ln(1.25 / delta) ||X||^2 / epsilon_x^2,
// binary labels through Randomized Response keeping the label with
// probability S(eps) = 1 / (1 + exp(-eps)). The joint release is
// (epsilon_x + epsilon_y, delta)-LDP. In regression mode the label is a real
// value released by a second Gaussian mechanism with its own (eps_y, delta_y).

#ifndef IWP_MECHANISMS_H_
#define IWP_MECHANISMS_H_

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "iwp/random.h"
#include "iwp/vector_ops.h"

namespace iwp {

enum class LabelMode { kBinary, kContinuous };

class PrivacyBudget {
 public:
  // Classification budget. Randomized Response is pure epsilon-LDP, so all of
  // delta belongs to the feature mechanism.
  static PrivacyBudget Create(double epsilon_x, double epsilon_y, double delta,
                              double feature_norm_bound);

  // Splits a total epsilon; `feature_share` is the fraction given to the
  // features.
  static PrivacyBudget FromTotal(double epsilon, double delta,
                                 double feature_norm_bound,
                                 double feature_share = 0.5);

  // Regression budget: delta = delta_x + delta_y, split by
  // `feature_delta_share`, and labels bounded by `label_norm_bound`.
  static PrivacyBudget CreateRegression(double epsilon_x, double epsilon_y,
                                        double delta, double feature_norm_bound,
                                        double label_norm_bound,
                                        double feature_delta_share = 0.5);

  double epsilon_x() const { return epsilon_x_; }
  double epsilon_y() const { return epsilon_y_; }
  double delta() const { return delta_; }
  double delta_x() const { return delta_x_; }
  double delta_y() const { return delta_y_; }
  double feature_norm_bound() const { return feature_norm_bound_; }
  double label_norm_bound() const { return label_norm_bound_; }
  LabelMode label_mode() const { return label_mode_; }

  double total_epsilon() const { return epsilon_x_ + epsilon_y_; }
  double sigma_squared() const;
  // Only meaningful in regression mode.
  double label_sigma_squared() const;

  bool operator==(const PrivacyBudget&) const = default;

 private:
  PrivacyBudget() = default;

  double epsilon_x_ = 0.0;
  double epsilon_y_ = 0.0;
  double delta_ = 0.0;
  double delta_x_ = 0.0;
  double delta_y_ = 0.0;
  double feature_norm_bound_ = 0.0;
  double label_norm_bound_ = 0.0;
  LabelMode label_mode_ = LabelMode::kBinary;
};

struct RawRecord {
  Vector features;
  double label = 0.0;
  // Identity used by BudgetAccount to enforce the one-shot contract.
  std::uint64_t id = 0;
};

struct LdpRecord {
  Vector features_noisy;
  double label_noisy = 0.0;
};

double GaussianSigmaSquared(double epsilon, double delta, double norm_bound);
double GaussianSigmaSquared(const PrivacyBudget& budget);

// S(eps) = 1 / (1 + exp(-eps)), in (1/2, 1).
double FlipRetentionProbability(double epsilon_y);

// S~(eps) = 1 / (1 - exp(-eps)), in (1, inf). Computed through expm1 so small
// budgets keep full precision; budgets below 1e-6 trigger a warning since the
// weight (and the variance of every inverse estimator) blows up as 1/eps.
double InverseWeight(double epsilon_y);

Vector GaussianRelease(std::span<const double> x, double sigma_squared,
                       Rng& rng);

// Returns y with probability S(eps), -y otherwise. y must be exactly +1 or -1.
double RandomizedResponse(double y, double epsilon_y, Rng& rng);

// Draws one release of (x, y) without any accounting. Monte-Carlo oracles use
// this to simulate many independent data holders sharing the same record.
LdpRecord SampleRelease(std::span<const double> x, double y,
                        const PrivacyBudget& budget, Rng& rng);

// Tracks which records were already released under a budget. A record can be
// released once per account; releasing it again needs a fresh account (and
// therefore a fresh budget). Not thread-safe: one owner per account.
class BudgetAccount {
 public:
  explicit BudgetAccount(PrivacyBudget budget) : budget_(budget) {}
  BudgetAccount(const BudgetAccount&) = delete;
  BudgetAccount& operator=(const BudgetAccount&) = delete;
  BudgetAccount(BudgetAccount&&) = default;
  BudgetAccount& operator=(BudgetAccount&&) = default;

  const PrivacyBudget& budget() const { return budget_; }
  bool Released(std::uint64_t record_id) const {
    return released_.contains(record_id);
  }
  std::size_t released_count() const { return released_.size(); }

  // Throws kBudgetSpent if the record was already released.
  void Consume(std::uint64_t record_id);

 private:
  PrivacyBudget budget_;
  std::unordered_set<std::uint64_t> released_;
};

// Checks the norm bound (rejects, never clips), charges the account, and
// releases features and label.
LdpRecord LdpRelease(const RawRecord& record, BudgetAccount& account, Rng& rng);

namespace testing {
// Multiplies every S~ returned by InverseWeight. Exists so the validation
// suite can be shown to fail on a corrupted estimator; 1.0 restores normal
// behaviour.
void SetInverseWeightScale(double scale);
double InverseWeightScale();
}  // namespace testing

}  // namespace iwp

#endif  // IWP_MECHANISMS_H_
