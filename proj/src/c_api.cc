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

#include "iwp/iwp.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "iwp/data.h"
#include "iwp/error.h"
#include "iwp/glm_losses.h"
#include "iwp/mechanisms.h"
#include "iwp/optimizer.h"
#include "iwp/transforms.h"
#include "iwp/validation.h"

struct iwp_budget {
  iwp::PrivacyBudget value;
};

struct iwp_loss {
  iwp::GlmLoss value;
  std::string name;
};

struct iwp_dataset {
  std::vector<iwp::RawRecord> records;
  int p = 0;
};

struct iwp_release {
  iwp::ReleasedDataset value;
};

struct iwp_trace {
  iwp::TrainTrace value;
};

struct iwp_report {
  std::vector<iwp::McReport> checks;
};

struct iwp_bias_table {
  std::vector<iwp::TruncationBiasRow> rows;
};

namespace {

thread_local std::string g_last_error;

iwp_status Record(iwp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
iwp_status Guard(Fn&& fn) {
  try {
    fn();
    return IWP_OK;
  } catch (const iwp::Error& e) {
    return Record(static_cast<iwp_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Record(IWP_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Record(IWP_INTERNAL, e.what());
  } catch (...) {
    return Record(IWP_INTERNAL, "unknown exception");
  }
}

void Require(bool ok, const char* what) {
  if (!ok) iwp::Fail(iwp::ErrorCode::kInvalidArgument, what);
}

std::span<const double> View(const double* data, size_t n) {
  return {data, n};
}

int DatasetDimension(const std::vector<iwp::RawRecord>& records) {
  return records.empty() ? 0 : static_cast<int>(records.front().features.size());
}

std::vector<std::string> Comments(const char* const* comments, size_t n) {
  Require(n == 0 || comments != nullptr, "comments is NULL");
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    Require(comments[i] != nullptr, "comment line is NULL");
    out.emplace_back(comments[i]);
  }
  return out;
}

iwp::ColumnRole ToRole(iwp_column_role role) {
  switch (role) {
    case IWP_COLUMN_FEATURE: return iwp::ColumnRole::kFeature;
    case IWP_COLUMN_LABEL: return iwp::ColumnRole::kLabel;
    case IWP_COLUMN_IGNORE: return iwp::ColumnRole::kIgnore;
  }
  iwp::Fail(iwp::ErrorCode::kInvalidArgument, "unknown column role");
}

iwp_label_mode FromMode(iwp::LabelMode mode) {
  return mode == iwp::LabelMode::kBinary ? IWP_LABEL_BINARY
                                         : IWP_LABEL_CONTINUOUS;
}

void CopyString(const std::string& from, char* to, size_t capacity) {
  const size_t n = std::min(from.size(), capacity - 1);
  std::memcpy(to, from.data(), n);
  to[n] = '\0';
}

iwp::SgdConfig ToConfig(const iwp_sgd_options& o) {
  iwp::SgdConfig c;
  c.step_size = o.step_size;
  c.schedule = o.schedule == IWP_SCHEDULE_LOG_OVER_N
                   ? iwp::StepSchedule::kLogOverN
                   : iwp::StepSchedule::kConstant;
  c.batch_size = o.batch_size;
  c.radius = o.radius;
  c.lambda = o.lambda;
  c.seed = o.seed;
  c.init_radius = o.init_radius;
  c.eval_every = o.eval_every;
  if (o.schedule == IWP_SCHEDULE_LOG_OVER_N) {
    c.curvature = iwp::Curvature{o.mu, o.smoothness, o.variance_bound,
                                 o.initial_distance_sq};
  }
  return c;
}

}  // namespace

extern "C" {

const char* iwp_version(void) { return IWP_VERSION_STRING; }

const char* iwp_status_name(iwp_status status) {
  // ErrorCodeName returns views of string literals.
  return iwp::ErrorCodeName(static_cast<iwp::ErrorCode>(status)).data();
}

const char* iwp_last_error_message(void) { return g_last_error.c_str(); }

void iwp_set_warning_handler(iwp_warning_fn fn, void* user_data) {
  if (fn == nullptr) {
    iwp::SetWarningHandler(nullptr);
    return;
  }
  iwp::SetWarningHandler([fn, user_data](std::string_view message) {
    const std::string text(message);
    fn(text.c_str(), user_data);
  });
}

// Budgets.

iwp_status iwp_budget_create(double epsilon_x, double epsilon_y, double delta,
                             double feature_norm_bound, iwp_budget** out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = new iwp_budget{iwp::PrivacyBudget::Create(epsilon_x, epsilon_y,
                                                     delta, feature_norm_bound)};
  });
}

iwp_status iwp_budget_from_total(double epsilon, double delta,
                                 double feature_norm_bound,
                                 double feature_share, iwp_budget** out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = new iwp_budget{iwp::PrivacyBudget::FromTotal(
        epsilon, delta, feature_norm_bound, feature_share)};
  });
}

iwp_status iwp_budget_create_regression(double epsilon_x, double epsilon_y,
                                        double delta,
                                        double feature_norm_bound,
                                        double label_norm_bound,
                                        iwp_budget** out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = new iwp_budget{iwp::PrivacyBudget::CreateRegression(
        epsilon_x, epsilon_y, delta, feature_norm_bound, label_norm_bound)};
  });
}

void iwp_budget_destroy(iwp_budget* budget) { delete budget; }

iwp_status iwp_budget_get(const iwp_budget* budget, iwp_budget_info* out) {
  return Guard([&] {
    Require(budget != nullptr && out != nullptr, "NULL argument");
    const iwp::PrivacyBudget& b = budget->value;
    iwp_budget_info info{};
    info.epsilon_x = b.epsilon_x();
    info.epsilon_y = b.epsilon_y();
    info.delta = b.delta();
    info.delta_x = b.delta_x();
    info.delta_y = b.delta_y();
    info.feature_norm_bound = b.feature_norm_bound();
    info.label_norm_bound = b.label_norm_bound();
    info.label_mode = FromMode(b.label_mode());
    info.sigma_squared = b.sigma_squared();
    if (b.label_mode() == iwp::LabelMode::kBinary) {
      info.retention_probability = iwp::FlipRetentionProbability(b.epsilon_y());
      info.inverse_weight = iwp::InverseWeight(b.epsilon_y());
    } else {
      info.label_sigma_squared = b.label_sigma_squared();
    }
    *out = info;
  });
}

iwp_status iwp_gaussian_sigma_squared(double epsilon, double delta,
                                      double norm_bound, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = iwp::GaussianSigmaSquared(epsilon, delta, norm_bound);
  });
}

iwp_status iwp_flip_retention_probability(double epsilon_y, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = iwp::FlipRetentionProbability(epsilon_y);
  });
}

iwp_status iwp_inverse_weight(double epsilon_y, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = iwp::InverseWeight(epsilon_y);
  });
}

// Losses.

iwp_status iwp_loss_create(iwp_loss_kind kind, int truncation_order,
                           iwp_loss** out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    std::optional<iwp::GlmLoss> loss;
    switch (kind) {
      case IWP_LOSS_QUADRATIC: loss = iwp::GlmLoss::Quadratic(); break;
      case IWP_LOSS_EXPONENTIAL: loss = iwp::GlmLoss::Exponential(); break;
      case IWP_LOSS_LOGISTIC:
        loss = truncation_order < 0
                   ? iwp::GlmLoss::Logistic()
                   : iwp::GlmLoss::Logistic(truncation_order);
        break;
      default: Require(false, "unknown loss kind");
    }
    *out = new iwp_loss{*loss, loss->name()};
  });
}

void iwp_loss_destroy(iwp_loss* loss) { delete loss; }

const char* iwp_loss_name(const iwp_loss* loss) {
  return loss == nullptr ? "" : loss->name.c_str();
}

iwp_status iwp_loss_value(const iwp_loss* loss, const double* theta,
                          const double* x, size_t p, double y, double* out) {
  return Guard([&] {
    Require(loss && theta && x && out, "NULL argument");
    *out = iwp::Loss(loss->value, View(theta, p), View(x, p), y);
  });
}

iwp_status iwp_loss_grad(const iwp_loss* loss, const double* theta,
                         const double* x, size_t p, double y,
                         double* grad_out) {
  return Guard([&] {
    Require(loss && theta && x && grad_out, "NULL argument");
    const iwp::Vector g = iwp::Grad(loss->value, View(theta, p), View(x, p), y);
    std::copy(g.begin(), g.end(), grad_out);
  });
}

iwp_status iwp_iwp_loss(const iwp_loss* loss, const double* theta,
                        const double* x_tilde, size_t p, double y_tilde,
                        const iwp_budget* budget, double* out) {
  return Guard([&] {
    Require(loss && theta && x_tilde && budget && out, "NULL argument");
    *out = iwp::IwpLoss(loss->value, View(theta, p), View(x_tilde, p), y_tilde,
                        budget->value);
  });
}

iwp_status iwp_iwp_grad(const iwp_loss* loss, const double* theta,
                        const double* x_tilde, size_t p, double y_tilde,
                        const iwp_budget* budget, double* grad_out) {
  return Guard([&] {
    Require(loss && theta && x_tilde && budget && grad_out, "NULL argument");
    const iwp::Vector g = iwp::IwpGrad(loss->value, View(theta, p),
                                       View(x_tilde, p), y_tilde,
                                       budget->value);
    std::copy(g.begin(), g.end(), grad_out);
  });
}

iwp_status iwp_regression_debiased_grad(const double* theta,
                                        const double* x_tilde, size_t p,
                                        double y_tilde,
                                        const iwp_budget* budget,
                                        double* grad_out) {
  return Guard([&] {
    Require(theta && x_tilde && budget && grad_out, "NULL argument");
    const iwp::Vector g = iwp::RegressionDebiasedGrad(
        View(theta, p), View(x_tilde, p), y_tilde, budget->value);
    std::copy(g.begin(), g.end(), grad_out);
  });
}

// Datasets.

void iwp_dataset_spec_default(iwp_dataset_spec* spec) {
  if (spec == nullptr) return;
  const iwp::DatasetSpec d;
  *spec = iwp_dataset_spec{d.n, d.p, d.class_separation, d.label_balance,
                           d.informative, d.seed};
}

iwp_status iwp_dataset_generate(const iwp_dataset_spec* spec,
                                iwp_dataset** out) {
  return Guard([&] {
    Require(spec && out, "NULL argument");
    iwp::DatasetSpec s;
    s.n = spec->n;
    s.p = spec->p;
    s.class_separation = spec->class_separation;
    s.label_balance = spec->label_balance;
    s.informative = spec->informative;
    s.seed = spec->seed;
    *out = new iwp_dataset{iwp::GenerateSynthetic(s), s.p};
  });
}

iwp_status iwp_dataset_from_arrays(int64_t n, int p, const double* features,
                                   const double* labels, iwp_dataset** out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    Require(n >= 0 && p > 0, "need n >= 0 and p > 0");
    Require(n == 0 || (features && labels), "NULL data");
    auto ds = std::make_unique<iwp_dataset>();
    ds->p = p;
    ds->records.resize(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) {
      iwp::RawRecord& r = ds->records[static_cast<size_t>(i)];
      r.features.assign(features + i * p, features + (i + 1) * p);
      r.label = labels[i];
      r.id = static_cast<std::uint64_t>(i);
    }
    *out = ds.release();
  });
}

void iwp_dataset_destroy(iwp_dataset* dataset) { delete dataset; }

iwp_status iwp_dataset_shape(const iwp_dataset* dataset, int64_t* n, int* p) {
  return Guard([&] {
    Require(dataset != nullptr, "dataset is NULL");
    if (n) *n = static_cast<int64_t>(dataset->records.size());
    if (p) *p = dataset->p;
  });
}

iwp_status iwp_dataset_row(const iwp_dataset* dataset, int64_t index,
                           double* features_out, double* label_out) {
  return Guard([&] {
    Require(dataset != nullptr, "dataset is NULL");
    Require(index >= 0 &&
                index < static_cast<int64_t>(dataset->records.size()),
            "row index out of range");
    const iwp::RawRecord& r = dataset->records[static_cast<size_t>(index)];
    if (features_out) {
      std::copy(r.features.begin(), r.features.end(), features_out);
    }
    if (label_out) *label_out = r.label;
  });
}

iwp_status iwp_dataset_ingest_csv(const char* path,
                                  const iwp_column_schema* schema,
                                  double norm_bound, iwp_dataset** out,
                                  double* row_scale_out) {
  return Guard([&] {
    Require(path && schema && out, "NULL argument");
    Require(schema->n_columns == 0 ||
                (schema->column_names && schema->column_roles),
            "schema columns are NULL");
    Require(schema->n_labels == 0 ||
                (schema->label_values && schema->label_targets),
            "schema labels are NULL");
    iwp::ColumnSchema s;
    for (size_t i = 0; i < schema->n_columns; ++i) {
      Require(schema->column_names[i] != nullptr, "column name is NULL");
      s.columns.push_back(
          {schema->column_names[i], ToRole(schema->column_roles[i])});
    }
    s.default_role = ToRole(schema->default_role);
    for (size_t i = 0; i < schema->n_labels; ++i) {
      Require(schema->label_values[i] != nullptr, "label value is NULL");
      s.label_mapping[schema->label_values[i]] = schema->label_targets[i];
    }
    s.mode = schema->mode == IWP_LABEL_CONTINUOUS ? iwp::LabelMode::kContinuous
                                                  : iwp::LabelMode::kBinary;
    iwp::IngestResult result = iwp::IngestCsv(path, s, norm_bound);
    const int p = DatasetDimension(result.records);
    *out = new iwp_dataset{std::move(result.records), p};
    if (row_scale_out) *row_scale_out = result.row_scale;
  });
}

iwp_status iwp_dataset_split(const iwp_dataset* dataset, double test_fraction,
                             uint64_t seed, iwp_dataset** train_out,
                             iwp_dataset** test_out) {
  return Guard([&] {
    Require(dataset && train_out && test_out, "NULL argument");
    iwp::SplitResult split = iwp::Split(dataset->records, test_fraction, seed);
    auto train = std::make_unique<iwp_dataset>(
        iwp_dataset{std::move(split.train), dataset->p});
    auto test = std::make_unique<iwp_dataset>(
        iwp_dataset{std::move(split.test), dataset->p});
    *train_out = train.release();
    *test_out = test.release();
  });
}

iwp_status iwp_dataset_read_csv(const char* path, iwp_dataset** out) {
  return Guard([&] {
    Require(path && out, "NULL argument");
    std::vector<iwp::RawRecord> records = iwp::ReadRawCsvFile(path);
    const int p = DatasetDimension(records);
    *out = new iwp_dataset{std::move(records), p};
  });
}

iwp_status iwp_dataset_write_csv(const iwp_dataset* dataset, const char* path,
                                 const char* const* comments,
                                 size_t n_comments) {
  return Guard([&] {
    Require(dataset && path, "NULL argument");
    iwp::WriteRawCsvFile(path, dataset->records,
                         Comments(comments, n_comments));
  });
}

iwp_status iwp_dataset_ridge(const iwp_dataset* dataset, double lambda,
                             double* theta_out) {
  return Guard([&] {
    Require(dataset && theta_out, "NULL argument");
    const iwp::Vector theta = iwp::RidgeSolution(dataset->records, lambda);
    std::copy(theta.begin(), theta.end(), theta_out);
  });
}

// Releases.

iwp_status iwp_release_create(const iwp_dataset* train,
                              const iwp_budget* budget, uint64_t seed,
                              iwp_release** out) {
  return Guard([&] {
    Require(train && budget && out, "NULL argument");
    *out = new iwp_release{
        iwp::ReleaseDataset(train->records, budget->value, seed)};
  });
}

void iwp_release_destroy(iwp_release* release) { delete release; }

iwp_status iwp_release_manifest(const iwp_release* release,
                                iwp_manifest* out) {
  return Guard([&] {
    Require(release && out, "NULL argument");
    const iwp::ReleaseManifest& m = release->value.manifest;
    iwp_manifest r{};
    r.epsilon_x = m.epsilon_x;
    r.epsilon_y = m.epsilon_y;
    r.delta = m.delta;
    r.delta_x = m.delta_x;
    r.feature_norm_bound = m.feature_norm_bound;
    r.label_norm_bound = m.label_norm_bound;
    r.label_mode = FromMode(m.label_mode);
    r.sigma_squared = m.sigma_squared;
    r.seed = m.seed;
    r.n = m.n;
    r.p = m.p;
    CopyString(m.norm_bound_source, r.norm_bound_source,
               sizeof(r.norm_bound_source));
    CopyString(m.timestamp, r.timestamp, sizeof(r.timestamp));
    *out = r;
  });
}

iwp_status iwp_release_set_norm_bound_source(iwp_release* release,
                                             const char* source) {
  return Guard([&] {
    Require(release && source, "NULL argument");
    const std::string s(source);
    Require(!s.empty() && s.size() < 32 &&
                s.find_first_of(" \t\r\n=") == std::string::npos,
            "norm bound source must be a short token without spaces or '='");
    release->value.manifest.norm_bound_source = s;
  });
}

iwp_status iwp_release_budget(const iwp_release* release, iwp_budget** out) {
  return Guard([&] {
    Require(release && out, "NULL argument");
    *out = new iwp_budget{release->value.manifest.Budget()};
  });
}

iwp_status iwp_release_row(const iwp_release* release, int64_t index,
                           double* features_out, double* label_out) {
  return Guard([&] {
    Require(release != nullptr, "release is NULL");
    const auto& records = release->value.records;
    Require(index >= 0 && index < static_cast<int64_t>(records.size()),
            "row index out of range");
    const iwp::LdpRecord& r = records[static_cast<size_t>(index)];
    if (features_out) {
      std::copy(r.features_noisy.begin(), r.features_noisy.end(),
                features_out);
    }
    if (label_out) *label_out = r.label_noisy;
  });
}

iwp_status iwp_release_read_csv(const char* path, iwp_release** out) {
  return Guard([&] {
    Require(path && out, "NULL argument");
    *out = new iwp_release{iwp::ReadReleasedCsvFile(path)};
  });
}

iwp_status iwp_release_write_csv(const iwp_release* release, const char* path,
                                 const char* const* comments,
                                 size_t n_comments) {
  return Guard([&] {
    Require(release && path, "NULL argument");
    iwp::WriteReleasedCsvFile(path, release->value,
                              Comments(comments, n_comments));
  });
}

// Training.

void iwp_sgd_options_default(iwp_sgd_options* options) {
  if (options == nullptr) return;
  const iwp::SgdConfig c;
  const iwp::Curvature k;
  *options = iwp_sgd_options{c.step_size,
                             IWP_SCHEDULE_CONSTANT,
                             c.batch_size,
                             c.radius,
                             c.lambda,
                             c.seed,
                             c.init_radius,
                             k.mu,
                             k.smoothness,
                             k.variance_bound,
                             k.initial_distance_sq,
                             c.eval_every};
}

iwp_status iwp_resolve_step_size(const iwp_sgd_options* options, int64_t n,
                                 double* out) {
  return Guard([&] {
    Require(options && out, "NULL argument");
    *out = iwp::ResolveStepSize(ToConfig(*options), n);
  });
}

iwp_status iwp_train(iwp_method method, const iwp_loss* loss,
                     const iwp_budget* budget, const iwp_dataset* clean_train,
                     const iwp_release* release, const iwp_dataset* test,
                     const iwp_sgd_options* options, iwp_trace** out) {
  return Guard([&] {
    Require(loss && options && out, "NULL argument");
    const iwp::SgdConfig config = ToConfig(*options);
    std::span<const iwp::RawRecord> test_records;
    if (test) test_records = test->records;
    iwp::TrainResult result;
    switch (method) {
      case IWP_METHOD_REAL:
        Require(clean_train != nullptr, "method real needs clean data");
        result = iwp::SgdPlain(std::span<const iwp::RawRecord>(
                                   clean_train->records),
                               loss->value, config, test_records);
        break;
      case IWP_METHOD_NOISY:
        Require(release != nullptr, "method noisy needs a release");
        result = iwp::SgdPlain(std::span<const iwp::LdpRecord>(
                                   release->value.records),
                               loss->value, config, test_records);
        break;
      case IWP_METHOD_IWP:
        Require(release && budget, "method iwp needs a release and budget");
        result = iwp::IwpSgd(release->value, loss->value, budget->value,
                             config, test_records);
        break;
      default: Require(false, "unknown method");
    }
    *out = new iwp_trace{std::move(result.trace)};
  });
}

void iwp_trace_destroy(iwp_trace* trace) { delete trace; }

size_t iwp_trace_row_count(const iwp_trace* trace) {
  return trace == nullptr ? 0 : trace->value.rows.size();
}

iwp_status iwp_trace_get_row(const iwp_trace* trace, size_t index,
                             iwp_trace_row* out) {
  return Guard([&] {
    Require(trace && out, "NULL argument");
    Require(index < trace->value.rows.size(), "row index out of range");
    const iwp::TraceRow& r = trace->value.rows[index];
    *out = iwp_trace_row{r.batch_index, r.mean_train_estimator_value,
                         r.test_risk, r.test_accuracy, r.theta_norm};
  });
}

size_t iwp_trace_dimension(const iwp_trace* trace) {
  return trace == nullptr ? 0 : trace->value.final_theta.size();
}

iwp_status iwp_trace_theta(const iwp_trace* trace, double* theta_out) {
  return Guard([&] {
    Require(trace && theta_out, "NULL argument");
    std::copy(trace->value.final_theta.begin(), trace->value.final_theta.end(),
              theta_out);
  });
}

double iwp_trace_step_size(const iwp_trace* trace) {
  return trace == nullptr ? 0.0 : trace->value.step_size;
}

iwp_status iwp_evaluate(const double* theta, size_t p,
                        const iwp_dataset* test, const iwp_loss* loss,
                        double lambda, double* risk_out,
                        double* accuracy_out) {
  return Guard([&] {
    Require(theta && test && loss, "NULL argument");
    const iwp::Evaluation e =
        iwp::Evaluate(View(theta, p), test->records, loss->value, lambda);
    if (risk_out) *risk_out = e.risk;
    if (accuracy_out) *accuracy_out = e.accuracy;
  });
}

// Validation.

size_t iwp_suite_count(void) { return iwp::ValidationSuiteNames().size(); }

const char* iwp_suite_name(size_t index) {
  static const std::vector<std::string> names = iwp::ValidationSuiteNames();
  return index < names.size() ? names[index].c_str() : nullptr;
}

void iwp_suite_options_default(iwp_suite_options* options) {
  if (options == nullptr) return;
  const iwp::SuiteOptions d;
  *options = iwp_suite_options{d.seed,     d.n_samples,    d.p,
                               d.n_points, d.theta_radius, d.z_threshold};
}

iwp_status iwp_validate(const char* suite, const iwp_loss* loss,
                        const iwp_budget* budget,
                        const iwp_suite_options* options, iwp_report** out) {
  return Guard([&] {
    Require(suite && loss && budget && options && out, "NULL argument");
    iwp::SuiteOptions o;
    o.budget = budget->value;
    o.loss = loss->value;
    o.seed = options->seed;
    o.n_samples = options->n_samples;
    o.p = options->p;
    o.n_points = options->n_points;
    o.theta_radius = options->theta_radius;
    o.z_threshold = options->z_threshold;
    *out = new iwp_report{iwp::RunValidationSuite(suite, o)};
  });
}

void iwp_report_destroy(iwp_report* report) { delete report; }

size_t iwp_report_count(const iwp_report* report) {
  return report == nullptr ? 0 : report->checks.size();
}

int iwp_report_any_hard_failure(const iwp_report* report) {
  return report != nullptr && iwp::AnyHardFailure(report->checks) ? 1 : 0;
}

iwp_status iwp_report_get(const iwp_report* report, size_t index,
                          iwp_check* out) {
  return Guard([&] {
    Require(report && out, "NULL argument");
    Require(index < report->checks.size(), "check index out of range");
    const iwp::McReport& r = report->checks[index];
    *out = iwp_check{r.check_id.c_str(),
                     r.params.c_str(),
                     r.estimate,
                     r.std_error,
                     r.target,
                     r.z_score,
                     r.n_samples,
                     r.hard ? 1 : 0,
                     r.verdict == iwp::Verdict::kPass ? 1 : 0,
                     r.note.c_str()};
  });
}

iwp_status iwp_report_write_csv(const iwp_report* report, const char* path,
                                const char* const* comments,
                                size_t n_comments) {
  return Guard([&] {
    Require(report && path, "NULL argument");
    const std::vector<std::string> lines = Comments(comments, n_comments);
    std::ofstream file(path);
    if (!file) {
      iwp::Fail(iwp::ErrorCode::kIoError,
                std::string("cannot open ") + path + " for writing");
    }
    for (const std::string& line : lines) file << "# " << line << '\n';
    iwp::WriteReportCsv(file, report->checks);
    file.flush();
    if (!file) {
      iwp::Fail(iwp::ErrorCode::kIoError, std::string("write failed: ") + path);
    }
  });
}

// Truncation bias.

iwp_status iwp_bias_scan(const iwp_loss* loss, const int* orders,
                         size_t n_orders, const double* variances,
                         size_t n_variances, const double* points,
                         size_t n_points, double eval_radius,
                         int64_t mc_samples, uint64_t seed,
                         iwp_bias_table** out) {
  return Guard([&] {
    Require(loss && orders && variances && out, "NULL argument");
    std::vector<double> grid;
    if (points != nullptr) {
      grid.assign(points, points + n_points);
    } else {
      grid = iwp::DefaultEvalGrid(eval_radius);
    }
    iwp::Rng rng = iwp::MakeRng(seed, 0);
    *out = new iwp_bias_table{iwp::TruncationBiasScan(
        loss->value.profile(), std::span<const int>(orders, n_orders),
        View(variances, n_variances), grid, mc_samples, rng)};
  });
}

void iwp_bias_table_destroy(iwp_bias_table* table) { delete table; }

size_t iwp_bias_table_count(const iwp_bias_table* table) {
  return table == nullptr ? 0 : table->rows.size();
}

iwp_status iwp_bias_table_get(const iwp_bias_table* table, size_t index,
                              iwp_bias_row* out) {
  return Guard([&] {
    Require(table && out, "NULL argument");
    Require(index < table->rows.size(), "row index out of range");
    const iwp::TruncationBiasRow& r = table->rows[index];
    *out = iwp_bias_row{r.variance, r.truncation_order, r.estimate.bias,
                        r.estimate.std_error, r.estimate.worst_point};
  });
}

void iwp_testing_set_inverse_weight_scale(double scale) {
  iwp::testing::SetInverseWeightScale(scale);
}

}  // extern "C"
