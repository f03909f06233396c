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

#include "iwp/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "iwp/error.h"
#include "iwp/random.h"

namespace iwp {
namespace {

void CheckConfig(const SgdConfig& c) {
  if (!(c.step_size > 0.0) || !std::isfinite(c.step_size)) {
    Fail(ErrorCode::kInvalidArgument, "step_size must be positive");
  }
  if (c.batch_size < 1) {
    Fail(ErrorCode::kInvalidArgument, "batch_size must be positive");
  }
  if (!(c.radius > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "radius must be positive");
  }
  if (!(c.lambda >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "lambda must be nonnegative");
  }
  if (c.eval_every < 0) {
    Fail(ErrorCode::kInvalidArgument, "eval_every must be >= 0");
  }
  if (c.curvature) {
    const Curvature& k = *c.curvature;
    if (!(k.mu > 0.0) || !(k.smoothness > 0.0) || !(k.variance_bound > 0.0) ||
        !(k.initial_distance_sq >= 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "curvature constants must be positive");
    }
  }
}

Vector InitialTheta(const SgdConfig& config, std::size_t p) {
  Vector theta(p, 0.0);
  if (config.init_radius > 0.0) {
    Rng rng = MakeRng(config.seed, 2);
    std::normal_distribution<double> normal;
    for (double& v : theta) v = normal(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = config.init_radius *
                     std::pow(unit(rng), 1.0 / static_cast<double>(p));
    const double norm = Norm(theta);
    if (norm > 0.0) {
      for (double& v : theta) v *= r / norm;
    }
  }
  return ProjectBall(theta, config.radius);
}

// Shared loop. `accumulate(i, theta, grad)` adds the per-record gradient
// estimate to `grad` and returns the per-record estimator value.
template <typename Accumulate>
TrainResult RunLoop(std::size_t n, std::size_t p, const GlmLoss& glm,
                    const SgdConfig& config, std::span<const RawRecord> test,
                    Accumulate accumulate) {
  CheckConfig(config);
  if (n == 0) Fail(ErrorCode::kEmptyDataset, "training set is empty");
  const double gamma = ResolveStepSize(config, static_cast<std::int64_t>(n));
  const std::size_t b = static_cast<std::size_t>(config.batch_size);
  const std::size_t batches = (n + b - 1) / b;

  TrainResult out;
  out.trace.step_size = gamma;
  out.trace.rows.reserve(batches);
  Vector theta = InitialTheta(config, p);
  Vector grad(p);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t t = 0; t < batches; ++t) {
    const std::size_t begin = t * b;
    const std::size_t end = std::min(n, begin + b);
    std::fill(grad.begin(), grad.end(), 0.0);
    double value = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      value += accumulate(i, theta, grad);
    }
    const double inv = 1.0 / static_cast<double>(end - begin);
    for (std::size_t j = 0; j < p; ++j) {
      theta[j] -= gamma * (grad[j] * inv + config.lambda * theta[j]);
    }
    theta = ProjectBall(theta, config.radius);

    TraceRow row;
    row.batch_index = static_cast<std::int64_t>(t);
    row.mean_train_estimator_value = value * inv;
    row.theta_norm = Norm(theta);
    const bool last = t + 1 == batches;
    const bool due = config.eval_every > 0 &&
                     (t + 1) % static_cast<std::size_t>(config.eval_every) == 0;
    if (!test.empty() && (last || due)) {
      const Evaluation e = Evaluate(theta, test, glm, config.lambda);
      row.test_risk = e.risk;
      row.test_accuracy = e.accuracy;
    } else {
      row.test_risk = nan;
      row.test_accuracy = nan;
    }
    out.trace.rows.push_back(row);
  }
  out.trace.final_theta = theta;
  out.model = {theta, config.radius};
  return out;
}

}  // namespace

Vector ProjectBall(std::span<const double> theta, double radius) {
  if (!(radius > 0.0)) Fail(ErrorCode::kInvalidArgument, "radius must be > 0");
  Vector out(theta.begin(), theta.end());
  const double norm = Norm(out);
  if (norm > radius) {
    const double scale = radius / norm;
    for (double& v : out) v *= scale;
    // Rounding can leave the scaled norm an ulp above the radius.
    while (Norm(out) > radius) {
      for (double& v : out) v = std::nextafter(v, 0.0);
    }
  }
  return out;
}

double ResolveStepSize(const SgdConfig& config, std::int64_t n) {
  CheckConfig(config);
  if (config.schedule == StepSchedule::kConstant) {
    if (config.curvature &&
        config.step_size > 1.0 / (2.0 * config.curvature->smoothness)) {
      std::ostringstream os;
      os << "step size " << config.step_size << " exceeds 1/(2 smoothness) = "
         << 1.0 / (2.0 * config.curvature->smoothness);
      Warn(os.str());
    }
    return config.step_size;
  }
  if (!config.curvature) {
    Warn("log_over_n schedule needs curvature constants; using the constant "
         "step size");
    return config.step_size;
  }
  const Curvature& k = *config.curvature;
  const double b = static_cast<double>(config.batch_size);
  const double steps = std::ceil(static_cast<double>(n) / b);
  const double ratio =
      k.mu * k.mu * k.initial_distance_sq * steps * b / k.variance_bound;
  return std::min(1.0 / (2.0 * k.smoothness),
                  std::log(std::max(2.0, ratio)) / (k.mu * steps));
}

TrainResult IwpSgd(std::span<const LdpRecord> data, const GlmLoss& glm,
                   const PrivacyBudget& budget, const SgdConfig& config,
                   std::span<const RawRecord> test) {
  if (data.empty()) Fail(ErrorCode::kEmptyDataset, "training set is empty");
  const std::size_t p = data.front().features_noisy.size();
  return RunLoop(data.size(), p, glm, config, test,
                 [&](std::size_t i, const Vector& theta, Vector& grad) {
                   const LdpRecord& r = data[i];
                   const Vector g = IwpGrad(glm, theta, r.features_noisy,
                                            r.label_noisy, budget);
                   Axpy(1.0, g, grad);
                   return IwpLoss(glm, theta, r.features_noisy, r.label_noisy,
                                  budget);
                 });
}

TrainResult IwpSgd(const ReleasedDataset& data, const GlmLoss& glm,
                   const PrivacyBudget& budget, const SgdConfig& config,
                   std::span<const RawRecord> test) {
  if (!data.manifest.Matches(budget)) {
    Fail(ErrorCode::kBudgetMismatch,
         "the dataset was released under a different budget than the one "
         "given to the estimator");
  }
  return IwpSgd(std::span<const LdpRecord>(data.records), glm, budget, config,
                test);
}

TrainResult SgdPlain(std::span<const RawRecord> data, const GlmLoss& glm,
                     const SgdConfig& config, std::span<const RawRecord> test) {
  if (data.empty()) Fail(ErrorCode::kEmptyDataset, "training set is empty");
  const std::size_t p = data.front().features.size();
  return RunLoop(data.size(), p, glm, config, test,
                 [&](std::size_t i, const Vector& theta, Vector& grad) {
                   const RawRecord& r = data[i];
                   Axpy(1.0, Grad(glm, theta, r.features, r.label), grad);
                   return Loss(glm, theta, r.features, r.label);
                 });
}

TrainResult SgdPlain(std::span<const LdpRecord> data, const GlmLoss& glm,
                     const SgdConfig& config, std::span<const RawRecord> test) {
  if (data.empty()) Fail(ErrorCode::kEmptyDataset, "training set is empty");
  const std::size_t p = data.front().features_noisy.size();
  return RunLoop(data.size(), p, glm, config, test,
                 [&](std::size_t i, const Vector& theta, Vector& grad) {
                   const LdpRecord& r = data[i];
                   Axpy(1.0, Grad(glm, theta, r.features_noisy, r.label_noisy),
                        grad);
                   return Loss(glm, theta, r.features_noisy, r.label_noisy);
                 });
}

Evaluation Evaluate(std::span<const double> theta,
                    std::span<const RawRecord> test, const GlmLoss& glm,
                    double lambda) {
  if (test.empty()) Fail(ErrorCode::kEmptyDataset, "test set is empty");
  double risk = 0.0;
  std::int64_t correct = 0;
  for (const RawRecord& r : test) {
    CheckSameSize(theta, r.features, "theta vs x");
    const double margin = r.label * Dot(theta, r.features);
    risk += glm.profile().Value(margin);
    if (margin > 0.0) ++correct;
  }
  const double n = static_cast<double>(test.size());
  return {risk / n + 0.5 * lambda * SquaredNorm(theta),
          static_cast<double>(correct) / n};
}

}  // namespace iwp
