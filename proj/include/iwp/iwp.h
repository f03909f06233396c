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

/* C interface to the IWP library.
 *
 * Every function returns an iwp_status. On failure the out parameters are
 * left untouched and iwp_last_error_message() describes the problem; the
 * message is thread-local and valid until the next failing call on the same
 * thread. Objects are opaque handles released with their *_destroy function;
 * destroying NULL is a no-op. Vectors are passed as (pointer, length) with
 * row-major layout for matrices.
 */

#ifndef IWP_IWP_H_
#define IWP_IWP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(IWP_BUILDING_LIBRARY)
#define IWP_API __attribute__((visibility("default")))
#else
#define IWP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iwp_status {
  IWP_OK = 0,
  IWP_INVALID_ARGUMENT = 1,
  IWP_INVALID_BUDGET = 2,
  IWP_INVALID_LABEL = 3,
  IWP_NORM_VIOLATION = 4,
  IWP_DIMENSION_MISMATCH = 5,
  IWP_ORDER_EXCEEDED = 6,
  IWP_PARSE_ERROR = 7,
  IWP_IO_ERROR = 8,
  IWP_EMPTY_DATASET = 9,
  IWP_BUDGET_SPENT = 10,
  IWP_MODE_MISMATCH = 11,
  IWP_BUDGET_MISMATCH = 12,
  IWP_UNKNOWN_LABEL_VALUE = 13,
  IWP_MISSING_COLUMN = 14,
  IWP_INVALID_SPEC = 15,
  IWP_INTERNAL = 99
} iwp_status;

IWP_API const char* iwp_version(void);
IWP_API const char* iwp_status_name(iwp_status status);
IWP_API const char* iwp_last_error_message(void);

/* Receives non-fatal diagnostics. NULL restores the stderr default. */
typedef void (*iwp_warning_fn)(const char* message, void* user_data);
IWP_API void iwp_set_warning_handler(iwp_warning_fn fn, void* user_data);

/* ---- Privacy budgets and mechanisms ---------------------------------- */

typedef struct iwp_budget iwp_budget;

typedef enum iwp_label_mode {
  IWP_LABEL_BINARY = 0,
  IWP_LABEL_CONTINUOUS = 1
} iwp_label_mode;

typedef struct iwp_budget_info {
  double epsilon_x;
  double epsilon_y;
  double delta;
  double delta_x;
  double delta_y;
  double feature_norm_bound;
  double label_norm_bound;
  iwp_label_mode label_mode;
  double sigma_squared;
  double label_sigma_squared; /* 0 in binary mode */
  double retention_probability; /* S; 0 in continuous mode */
  double inverse_weight; /* S~; 0 in continuous mode */
} iwp_budget_info;

IWP_API iwp_status iwp_budget_create(double epsilon_x, double epsilon_y,
                                     double delta, double feature_norm_bound,
                                     iwp_budget** out);
IWP_API iwp_status iwp_budget_from_total(double epsilon, double delta,
                                         double feature_norm_bound,
                                         double feature_share,
                                         iwp_budget** out);
IWP_API iwp_status iwp_budget_create_regression(
    double epsilon_x, double epsilon_y, double delta,
    double feature_norm_bound, double label_norm_bound, iwp_budget** out);
IWP_API void iwp_budget_destroy(iwp_budget* budget);
IWP_API iwp_status iwp_budget_get(const iwp_budget* budget,
                                  iwp_budget_info* out);

IWP_API iwp_status iwp_gaussian_sigma_squared(double epsilon, double delta,
                                              double norm_bound, double* out);
IWP_API iwp_status iwp_flip_retention_probability(double epsilon_y,
                                                  double* out);
IWP_API iwp_status iwp_inverse_weight(double epsilon_y, double* out);

/* ---- Losses and estimators ------------------------------------------- */

typedef struct iwp_loss iwp_loss;

typedef enum iwp_loss_kind {
  IWP_LOSS_QUADRATIC = 0,
  IWP_LOSS_EXPONENTIAL = 1,
  IWP_LOSS_LOGISTIC = 2
} iwp_loss_kind;

/* truncation_order < 0 selects the default (logistic only). */
IWP_API iwp_status iwp_loss_create(iwp_loss_kind kind, int truncation_order,
                                   iwp_loss** out);
IWP_API void iwp_loss_destroy(iwp_loss* loss);
IWP_API const char* iwp_loss_name(const iwp_loss* loss);

IWP_API iwp_status iwp_loss_value(const iwp_loss* loss, const double* theta,
                                  const double* x, size_t p, double y,
                                  double* out);
IWP_API iwp_status iwp_loss_grad(const iwp_loss* loss, const double* theta,
                                 const double* x, size_t p, double y,
                                 double* grad_out);
IWP_API iwp_status iwp_iwp_loss(const iwp_loss* loss, const double* theta,
                                const double* x_tilde, size_t p,
                                double y_tilde, const iwp_budget* budget,
                                double* out);
IWP_API iwp_status iwp_iwp_grad(const iwp_loss* loss, const double* theta,
                                const double* x_tilde, size_t p,
                                double y_tilde, const iwp_budget* budget,
                                double* grad_out);
IWP_API iwp_status iwp_regression_debiased_grad(const double* theta,
                                                const double* x_tilde,
                                                size_t p, double y_tilde,
                                                const iwp_budget* budget,
                                                double* grad_out);

/* ---- Datasets -------------------------------------------------------- */

typedef struct iwp_dataset iwp_dataset;

typedef struct iwp_dataset_spec {
  int64_t n;
  int p;
  double class_separation;
  double label_balance;
  int informative; /* -1: all features informative */
  uint64_t seed;
} iwp_dataset_spec;

IWP_API void iwp_dataset_spec_default(iwp_dataset_spec* spec);
IWP_API iwp_status iwp_dataset_generate(const iwp_dataset_spec* spec,
                                        iwp_dataset** out);
/* Copies n rows of p features and n labels. Ids are the row indices. */
IWP_API iwp_status iwp_dataset_from_arrays(int64_t n, int p,
                                           const double* features,
                                           const double* labels,
                                           iwp_dataset** out);
IWP_API void iwp_dataset_destroy(iwp_dataset* dataset);
IWP_API iwp_status iwp_dataset_shape(const iwp_dataset* dataset, int64_t* n,
                                     int* p);
/* Either output may be NULL. */
IWP_API iwp_status iwp_dataset_row(const iwp_dataset* dataset, int64_t index,
                                   double* features_out, double* label_out);

typedef enum iwp_column_role {
  IWP_COLUMN_FEATURE = 0,
  IWP_COLUMN_LABEL = 1,
  IWP_COLUMN_IGNORE = 2
} iwp_column_role;

typedef struct iwp_column_schema {
  const char* const* column_names;
  const iwp_column_role* column_roles;
  size_t n_columns;
  iwp_column_role default_role;
  /* Raw label text and the +-1 value it maps to. n_labels = 0 means the
     label column is numeric. */
  const char* const* label_values;
  const double* label_targets;
  size_t n_labels;
  iwp_label_mode mode;
} iwp_column_schema;

/* row_scale_out may be NULL. */
IWP_API iwp_status iwp_dataset_ingest_csv(const char* path,
                                          const iwp_column_schema* schema,
                                          double norm_bound,
                                          iwp_dataset** out,
                                          double* row_scale_out);
IWP_API iwp_status iwp_dataset_split(const iwp_dataset* dataset,
                                     double test_fraction, uint64_t seed,
                                     iwp_dataset** train_out,
                                     iwp_dataset** test_out);
IWP_API iwp_status iwp_dataset_read_csv(const char* path, iwp_dataset** out);
/* Each comment line is written as "# <text>" ahead of the header. */
IWP_API iwp_status iwp_dataset_write_csv(const iwp_dataset* dataset,
                                         const char* path,
                                         const char* const* comments,
                                         size_t n_comments);
/* Clean ridge solution; theta_out holds p values. */
IWP_API iwp_status iwp_dataset_ridge(const iwp_dataset* dataset,
                                     double lambda, double* theta_out);

/* ---- One-shot releases ----------------------------------------------- */

typedef struct iwp_release iwp_release;

typedef struct iwp_manifest {
  double epsilon_x;
  double epsilon_y;
  double delta;
  double delta_x;
  double feature_norm_bound;
  double label_norm_bound;
  iwp_label_mode label_mode;
  double sigma_squared;
  uint64_t seed;
  int64_t n;
  int p;
  char norm_bound_source[32];
  char timestamp[32];
} iwp_manifest;

IWP_API iwp_status iwp_release_create(const iwp_dataset* train,
                                      const iwp_budget* budget, uint64_t seed,
                                      iwp_release** out);
IWP_API void iwp_release_destroy(iwp_release* release);
IWP_API iwp_status iwp_release_manifest(const iwp_release* release,
                                        iwp_manifest* out);
IWP_API iwp_status iwp_release_set_norm_bound_source(iwp_release* release,
                                                     const char* source);
IWP_API iwp_status iwp_release_budget(const iwp_release* release,
                                      iwp_budget** out);
/* Either output may be NULL. */
IWP_API iwp_status iwp_release_row(const iwp_release* release, int64_t index,
                                   double* features_out, double* label_out);
IWP_API iwp_status iwp_release_read_csv(const char* path, iwp_release** out);
IWP_API iwp_status iwp_release_write_csv(const iwp_release* release,
                                         const char* path,
                                         const char* const* comments,
                                         size_t n_comments);

/* ---- Training -------------------------------------------------------- */

typedef enum iwp_method {
  IWP_METHOD_REAL = 0,  /* SGD on clean data */
  IWP_METHOD_NOISY = 1, /* SGD on released data, no correction */
  IWP_METHOD_IWP = 2    /* IWP-SGD on released data */
} iwp_method;

typedef enum iwp_schedule {
  IWP_SCHEDULE_CONSTANT = 0,
  IWP_SCHEDULE_LOG_OVER_N = 1
} iwp_schedule;

typedef struct iwp_sgd_options {
  double step_size;
  iwp_schedule schedule;
  int batch_size;
  double radius;
  double lambda;
  uint64_t seed;
  double init_radius;
  /* Used by IWP_SCHEDULE_LOG_OVER_N only. */
  double mu;
  double smoothness;
  double variance_bound;
  double initial_distance_sq;
  int eval_every;
} iwp_sgd_options;

typedef struct iwp_trace iwp_trace;

typedef struct iwp_trace_row {
  int64_t batch_index;
  double mean_train_estimator_value;
  double test_risk;
  double test_accuracy;
  double theta_norm;
} iwp_trace_row;

IWP_API void iwp_sgd_options_default(iwp_sgd_options* options);
IWP_API iwp_status iwp_resolve_step_size(const iwp_sgd_options* options,
                                         int64_t n, double* out);

/* IWP_METHOD_REAL reads `clean_train`; the other methods read `release`.
   IWP_METHOD_IWP also needs `budget` matching the release manifest. `test`
   may be NULL. */
IWP_API iwp_status iwp_train(iwp_method method, const iwp_loss* loss,
                             const iwp_budget* budget,
                             const iwp_dataset* clean_train,
                             const iwp_release* release,
                             const iwp_dataset* test,
                             const iwp_sgd_options* options,
                             iwp_trace** out);
IWP_API void iwp_trace_destroy(iwp_trace* trace);
IWP_API size_t iwp_trace_row_count(const iwp_trace* trace);
IWP_API iwp_status iwp_trace_get_row(const iwp_trace* trace, size_t index,
                                     iwp_trace_row* out);
IWP_API size_t iwp_trace_dimension(const iwp_trace* trace);
IWP_API iwp_status iwp_trace_theta(const iwp_trace* trace, double* theta_out);
IWP_API double iwp_trace_step_size(const iwp_trace* trace);

/* Risk is the mean loss plus lambda ||theta||^2 / 2. */
IWP_API iwp_status iwp_evaluate(const double* theta, size_t p,
                                const iwp_dataset* test, const iwp_loss* loss,
                                double lambda, double* risk_out,
                                double* accuracy_out);

/* ---- Validation ------------------------------------------------------ */

typedef struct iwp_report iwp_report;

typedef struct iwp_suite_options {
  uint64_t seed;
  int64_t n_samples;
  int p;
  int n_points;
  double theta_radius;
  double z_threshold;
} iwp_suite_options;

typedef struct iwp_check {
  const char* check_id; /* valid while the report lives */
  const char* params;
  double estimate;
  double std_error;
  double target;
  double z_score;
  int64_t n_samples;
  int hard;
  int passed;
  const char* note;
} iwp_check;

IWP_API size_t iwp_suite_count(void);
IWP_API const char* iwp_suite_name(size_t index);
IWP_API void iwp_suite_options_default(iwp_suite_options* options);
IWP_API iwp_status iwp_validate(const char* suite, const iwp_loss* loss,
                                const iwp_budget* budget,
                                const iwp_suite_options* options,
                                iwp_report** out);
IWP_API void iwp_report_destroy(iwp_report* report);
IWP_API size_t iwp_report_count(const iwp_report* report);
IWP_API int iwp_report_any_hard_failure(const iwp_report* report);
IWP_API iwp_status iwp_report_get(const iwp_report* report, size_t index,
                                  iwp_check* out);
IWP_API iwp_status iwp_report_write_csv(const iwp_report* report,
                                        const char* path,
                                        const char* const* comments,
                                        size_t n_comments);

/* ---- Truncation bias ------------------------------------------------- */

typedef struct iwp_bias_table iwp_bias_table;

typedef struct iwp_bias_row {
  double variance;
  int truncation_order;
  double bias;
  double std_error;
  double worst_point;
} iwp_bias_row;

/* Scans every (variance, K) pair for the loss profile. With points == NULL
   the grid is 41 uniform points on [-eval_radius, eval_radius]. */
IWP_API iwp_status iwp_bias_scan(const iwp_loss* loss, const int* orders,
                                 size_t n_orders, const double* variances,
                                 size_t n_variances, const double* points,
                                 size_t n_points, double eval_radius,
                                 int64_t mc_samples, uint64_t seed,
                                 iwp_bias_table** out);
IWP_API void iwp_bias_table_destroy(iwp_bias_table* table);
IWP_API size_t iwp_bias_table_count(const iwp_bias_table* table);
IWP_API iwp_status iwp_bias_table_get(const iwp_bias_table* table,
                                      size_t index, iwp_bias_row* out);

/* ---- Testing hooks --------------------------------------------------- */

/* Multiplies every S~ used by the inverse estimators. 1.0 restores normal
   behaviour. Only for demonstrating that validation detects a broken
   estimator. */
IWP_API void iwp_testing_set_inverse_weight_scale(double scale);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* IWP_IWP_H_ */
