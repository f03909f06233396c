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

// Single-pass projected mini-batch SGD: on clean data, naively on released
// data, and with IWP gradients (bias-corrected for the release mechanism).
// Records are consumed once, in stored order.

#ifndef IWP_OPTIMIZER_H_
#define IWP_OPTIMIZER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "iwp/data.h"
#include "iwp/glm_losses.h"
#include "iwp/mechanisms.h"
#include "iwp/vector_ops.h"

namespace iwp {

enum class StepSchedule { kConstant, kLogOverN };

// Constants of the regularized objective, supplied by the caller.
struct Curvature {
  double mu = 0.0;          // strong convexity
  double smoothness = 0.0;  // gradient Lipschitz constant
  // Bound on the per-record gradient-estimator variance and on
  // ||theta_0 - theta*||^2. Both enter the log_over_n step size.
  double variance_bound = 1.0;
  double initial_distance_sq = 1.0;
};

struct SgdConfig {
  double step_size = 1e-4;
  StepSchedule schedule = StepSchedule::kConstant;
  int batch_size = 128;
  double radius = 1.0;
  double lambda = 0.0;
  // Seeds the initial point when init_radius > 0; otherwise theta_0 = 0.
  std::uint64_t seed = 0;
  double init_radius = 0.0;
  std::optional<Curvature> curvature;
  // Test evaluation every eval_every batches (0: last batch only). Rows that
  // are not evaluated carry NaN risk and accuracy.
  int eval_every = 1;
};

struct TraceRow {
  std::int64_t batch_index = 0;
  double mean_train_estimator_value = 0.0;  // at the pre-step iterate
  double test_risk = 0.0;
  double test_accuracy = 0.0;
  double theta_norm = 0.0;  // after the step
};

struct TrainTrace {
  std::vector<TraceRow> rows;
  Vector final_theta;
  double step_size = 0.0;  // the step size actually used
};

struct TrainResult {
  ModelState model;
  TrainTrace trace;
};

struct Evaluation {
  double risk = 0.0;
  double accuracy = 0.0;
};

// theta if ||theta|| <= R, else theta R / ||theta||.
Vector ProjectBall(std::span<const double> theta, double radius);

// Step size the loop will use for n records under `config`. With log_over_n
// and b = batch_size, T = ceil(n / b) steps and batch variance A / b:
//   gamma = min(1 / (2 smoothness), ln(max(2, mu^2 D T b / A)) / (mu T)),
// which is the single-record rule for b = 1.
double ResolveStepSize(const SgdConfig& config, std::int64_t n);

// Algorithm: theta_t = Pi(theta_{t-1} - gamma (mean IWP gradient + lambda
// theta_{t-1})). The overload taking a ReleasedDataset checks that its
// manifest matches `budget` (kBudgetMismatch).
TrainResult IwpSgd(std::span<const LdpRecord> data, const GlmLoss& glm,
                   const PrivacyBudget& budget, const SgdConfig& config,
                   std::span<const RawRecord> test = {});
TrainResult IwpSgd(const ReleasedDataset& data, const GlmLoss& glm,
                   const PrivacyBudget& budget, const SgdConfig& config,
                   std::span<const RawRecord> test = {});

// Same loop with the plain gradient. On released records this is the naive
// (biased) baseline.
TrainResult SgdPlain(std::span<const RawRecord> data, const GlmLoss& glm,
                     const SgdConfig& config,
                     std::span<const RawRecord> test = {});
TrainResult SgdPlain(std::span<const LdpRecord> data, const GlmLoss& glm,
                     const SgdConfig& config,
                     std::span<const RawRecord> test = {});

// Mean loss plus lambda ||theta||^2 / 2 (the objective every method targets)
// and the fraction with y theta^T x > 0. Under the strict inequality
// theta = 0 has accuracy 0.
Evaluation Evaluate(std::span<const double> theta,
                    std::span<const RawRecord> test, const GlmLoss& glm,
                    double lambda = 0.0);

}  // namespace iwp

#endif  // IWP_OPTIMIZER_H_
