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

#include "iwp/mechanisms.h"

#include <atomic>
#include <cmath>
#include <sstream>

namespace iwp {
namespace {

constexpr double kTinyBudget = 1e-6;

std::atomic<double> g_inverse_weight_scale{1.0};

void CheckEpsilon(double epsilon, const char* name) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << epsilon;
    Fail(ErrorCode::kInvalidBudget, os.str());
  }
}

void CheckDelta(double delta, const char* name) {
  if (!(delta > 0.0 && delta < 1.0)) {
    std::ostringstream os;
    os << name << " must lie in (0, 1), got " << delta;
    Fail(ErrorCode::kInvalidBudget, os.str());
  }
}

void CheckBound(double bound, const char* name) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << bound;
    Fail(ErrorCode::kInvalidBudget, os.str());
  }
}

}  // namespace

PrivacyBudget PrivacyBudget::Create(double epsilon_x, double epsilon_y,
                                    double delta, double feature_norm_bound) {
  CheckEpsilon(epsilon_x, "epsilon_x");
  CheckEpsilon(epsilon_y, "epsilon_y");
  CheckDelta(delta, "delta");
  CheckBound(feature_norm_bound, "feature_norm_bound");
  PrivacyBudget b;
  b.epsilon_x_ = epsilon_x;
  b.epsilon_y_ = epsilon_y;
  b.delta_ = delta;
  b.delta_x_ = delta;
  b.delta_y_ = 0.0;
  b.feature_norm_bound_ = feature_norm_bound;
  b.label_mode_ = LabelMode::kBinary;
  return b;
}

PrivacyBudget PrivacyBudget::FromTotal(double epsilon, double delta,
                                       double feature_norm_bound,
                                       double feature_share) {
  CheckEpsilon(epsilon, "epsilon");
  if (!(feature_share > 0.0 && feature_share < 1.0)) {
    Fail(ErrorCode::kInvalidBudget, "feature_share must lie in (0, 1)");
  }
  return Create(epsilon * feature_share, epsilon * (1.0 - feature_share), delta,
                feature_norm_bound);
}

PrivacyBudget PrivacyBudget::CreateRegression(double epsilon_x,
                                              double epsilon_y, double delta,
                                              double feature_norm_bound,
                                              double label_norm_bound,
                                              double feature_delta_share) {
  CheckEpsilon(epsilon_x, "epsilon_x");
  CheckEpsilon(epsilon_y, "epsilon_y");
  CheckDelta(delta, "delta");
  CheckBound(feature_norm_bound, "feature_norm_bound");
  CheckBound(label_norm_bound, "label_norm_bound");
  if (!(feature_delta_share > 0.0 && feature_delta_share < 1.0)) {
    Fail(ErrorCode::kInvalidBudget, "feature_delta_share must lie in (0, 1)");
  }
  PrivacyBudget b;
  b.epsilon_x_ = epsilon_x;
  b.epsilon_y_ = epsilon_y;
  b.delta_ = delta;
  b.delta_x_ = delta * feature_delta_share;
  b.delta_y_ = delta - b.delta_x_;
  b.feature_norm_bound_ = feature_norm_bound;
  b.label_norm_bound_ = label_norm_bound;
  b.label_mode_ = LabelMode::kContinuous;
  return b;
}

double PrivacyBudget::sigma_squared() const {
  return GaussianSigmaSquared(epsilon_x_, delta_x_, feature_norm_bound_);
}

double PrivacyBudget::label_sigma_squared() const {
  if (label_mode_ != LabelMode::kContinuous) {
    Fail(ErrorCode::kModeMismatch,
         "label noise scale is only defined for continuous labels");
  }
  return GaussianSigmaSquared(epsilon_y_, delta_y_, label_norm_bound_);
}

double GaussianSigmaSquared(double epsilon, double delta, double norm_bound) {
  CheckEpsilon(epsilon, "epsilon");
  CheckDelta(delta, "delta");
  CheckBound(norm_bound, "norm_bound");
  return 8.0 * std::log(1.25 / delta) * norm_bound * norm_bound /
         (epsilon * epsilon);
}

double GaussianSigmaSquared(const PrivacyBudget& budget) {
  return budget.sigma_squared();
}

double FlipRetentionProbability(double epsilon_y) {
  CheckEpsilon(epsilon_y, "epsilon_y");
  return 1.0 / (1.0 + std::exp(-epsilon_y));
}

double InverseWeight(double epsilon_y) {
  CheckEpsilon(epsilon_y, "epsilon_y");
  if (epsilon_y < kTinyBudget) {
    std::ostringstream os;
    os << "label budget " << epsilon_y
       << " is below 1e-6; inverse weight is about 1/eps and the inverse "
          "estimators have enormous variance";
    Warn(os.str());
  }
  return g_inverse_weight_scale.load(std::memory_order_relaxed) /
         -std::expm1(-epsilon_y);
}

Vector GaussianRelease(std::span<const double> x, double sigma_squared,
                       Rng& rng) {
  if (!(sigma_squared > 0.0) || !std::isfinite(sigma_squared)) {
    Fail(ErrorCode::kInvalidArgument, "sigma_squared must be positive");
  }
  std::normal_distribution<double> noise(0.0, std::sqrt(sigma_squared));
  Vector out(x.begin(), x.end());
  for (double& v : out) v += noise(rng);
  return out;
}

double RandomizedResponse(double y, double epsilon_y, Rng& rng) {
  if (y != 1.0 && y != -1.0) {
    std::ostringstream os;
    os << "binary label must be +1 or -1, got " << y;
    Fail(ErrorCode::kInvalidLabel, os.str());
  }
  std::bernoulli_distribution keep(FlipRetentionProbability(epsilon_y));
  return keep(rng) ? y : -y;
}

LdpRecord SampleRelease(std::span<const double> x, double y,
                        const PrivacyBudget& budget, Rng& rng) {
  LdpRecord out;
  out.features_noisy = GaussianRelease(x, budget.sigma_squared(), rng);
  if (budget.label_mode() == LabelMode::kBinary) {
    out.label_noisy = RandomizedResponse(y, budget.epsilon_y(), rng);
  } else {
    std::normal_distribution<double> noise(
        0.0, std::sqrt(budget.label_sigma_squared()));
    out.label_noisy = y + noise(rng);
  }
  return out;
}

void BudgetAccount::Consume(std::uint64_t record_id) {
  if (!released_.insert(record_id).second) {
    Fail(ErrorCode::kBudgetSpent,
         "record " + std::to_string(record_id) +
             " was already released under this budget; one-shot releases "
             "need a fresh budget account");
  }
}

LdpRecord LdpRelease(const RawRecord& record, BudgetAccount& account,
                     Rng& rng) {
  const PrivacyBudget& budget = account.budget();
  const double norm = Norm(record.features);
  if (norm > budget.feature_norm_bound()) {
    std::ostringstream os;
    os << "record " << record.id << " has feature norm " << norm
       << " above the bound " << budget.feature_norm_bound();
    Fail(ErrorCode::kNormViolation, os.str());
  }
  if (budget.label_mode() == LabelMode::kContinuous &&
      std::abs(record.label) > budget.label_norm_bound()) {
    std::ostringstream os;
    os << "record " << record.id << " has label " << record.label
       << " outside the bound " << budget.label_norm_bound();
    Fail(ErrorCode::kNormViolation, os.str());
  }
  if (budget.label_mode() == LabelMode::kBinary && record.label != 1.0 &&
      record.label != -1.0) {
    Fail(ErrorCode::kInvalidLabel, "classification release needs a +-1 label");
  }
  account.Consume(record.id);
  return SampleRelease(record.features, record.label, budget, rng);
}

namespace testing {

void SetInverseWeightScale(double scale) {
  g_inverse_weight_scale.store(scale, std::memory_order_relaxed);
}

double InverseWeightScale() {
  return g_inverse_weight_scale.load(std::memory_order_relaxed);
}

}  // namespace testing
}  // namespace iwp
