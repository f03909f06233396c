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

// Exercises the library through its C interface only.

#include "iwp/iwp.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using Budget = std::unique_ptr<iwp_budget, Deleter<iwp_budget, iwp_budget_destroy>>;
using Loss = std::unique_ptr<iwp_loss, Deleter<iwp_loss, iwp_loss_destroy>>;
using Dataset =
    std::unique_ptr<iwp_dataset, Deleter<iwp_dataset, iwp_dataset_destroy>>;
using Release =
    std::unique_ptr<iwp_release, Deleter<iwp_release, iwp_release_destroy>>;
using Trace = std::unique_ptr<iwp_trace, Deleter<iwp_trace, iwp_trace_destroy>>;
using Report = std::unique_ptr<iwp_report, Deleter<iwp_report, iwp_report_destroy>>;
using BiasTable = std::unique_ptr<iwp_bias_table,
                                  Deleter<iwp_bias_table, iwp_bias_table_destroy>>;

std::string TempPath(const std::string& name) {
  return (std::filesystem::temp_directory_path() /
          ("iwp_c_api_" + std::to_string(::getpid()) + "_" + name))
      .string();
}

Budget MakeBudget(double eps_x, double eps_y, double bound) {
  iwp_budget* b = nullptr;
  EXPECT_EQ(iwp_budget_create(eps_x, eps_y, 1e-5, bound, &b), IWP_OK);
  return Budget(b);
}

Loss MakeLoss(iwp_loss_kind kind, int k = -1) {
  iwp_loss* l = nullptr;
  EXPECT_EQ(iwp_loss_create(kind, k, &l), IWP_OK);
  return Loss(l);
}

Dataset MakeDataset(int64_t n, uint64_t seed) {
  iwp_dataset_spec spec;
  iwp_dataset_spec_default(&spec);
  spec.n = n;
  spec.p = 2;
  spec.seed = seed;
  iwp_dataset* d = nullptr;
  EXPECT_EQ(iwp_dataset_generate(&spec, &d), IWP_OK);
  return Dataset(d);
}

TEST(CApiTest, VersionAndStatusNames) {
  EXPECT_STRNE(iwp_version(), "");
  EXPECT_STREQ(iwp_status_name(IWP_OK), "ok");
  EXPECT_STRNE(iwp_status_name(IWP_ORDER_EXCEEDED), "");
  EXPECT_STRNE(iwp_status_name(static_cast<iwp_status>(1234)), "");
}

TEST(CApiTest, BudgetErrorsAreReported) {
  iwp_budget* b = nullptr;
  EXPECT_EQ(iwp_budget_create(-1, 1, 1e-5, 1, &b), IWP_INVALID_BUDGET);
  EXPECT_EQ(b, nullptr);
  EXPECT_NE(std::string(iwp_last_error_message()).find("epsilon_x"),
            std::string::npos);
  EXPECT_EQ(iwp_budget_create(1, 1, 1e-5, 1, nullptr), IWP_INVALID_ARGUMENT);
  iwp_budget_destroy(nullptr);
}

TEST(CApiTest, BudgetInfo) {
  iwp_budget* raw = nullptr;
  ASSERT_EQ(iwp_budget_from_total(2.0, 1e-5, 1.0, 0.5, &raw), IWP_OK);
  Budget b(raw);
  iwp_budget_info info;
  ASSERT_EQ(iwp_budget_get(b.get(), &info), IWP_OK);
  EXPECT_EQ(info.epsilon_x, 1.0);
  EXPECT_EQ(info.epsilon_y, 1.0);
  EXPECT_NEAR(info.sigma_squared, 93.88855213027551, 1e-12);
  EXPECT_EQ(info.label_mode, IWP_LABEL_BINARY);
  EXPECT_EQ(info.label_sigma_squared, 0.0);
  EXPECT_GT(info.inverse_weight, 1.0);

  ASSERT_EQ(iwp_budget_create_regression(2, 2, 1e-5, 1, 1, &raw), IWP_OK);
  Budget reg(raw);
  ASSERT_EQ(iwp_budget_get(reg.get(), &info), IWP_OK);
  EXPECT_EQ(info.label_mode, IWP_LABEL_CONTINUOUS);
  EXPECT_DOUBLE_EQ(info.delta_x + info.delta_y, 1e-5);
  EXPECT_GT(info.label_sigma_squared, 0.0);
  EXPECT_EQ(info.inverse_weight, 0.0);

  double v = 0;
  ASSERT_EQ(iwp_gaussian_sigma_squared(2, 1e-5, 1, &v), IWP_OK);
  EXPECT_NEAR(v, 23.47213803256888, 1e-12);
  ASSERT_EQ(iwp_flip_retention_probability(2, &v), IWP_OK);
  EXPECT_NEAR(v, 0.8807970779778824, 1e-15);
  ASSERT_EQ(iwp_inverse_weight(2, &v), IWP_OK);
  EXPECT_NEAR(v, 1.156517642749666, 1e-15);
}

TEST(CApiTest, LossesMatchReferenceValues) {
  Budget b = MakeBudget(1, 1, 1);
  Loss q = MakeLoss(IWP_LOSS_QUADRATIC);
  Loss e = MakeLoss(IWP_LOSS_EXPONENTIAL);
  EXPECT_STREQ(iwp_loss_name(q.get()), "quadratic");
  const double theta[] = {0.3, -0.4};
  const double x[] = {2.0, 1.0};
  double v = 0;
  ASSERT_EQ(iwp_iwp_loss(q.get(), theta, x, 2, -1.0, b.get(), &v), IWP_OK);
  EXPECT_NEAR(v, -10.78327833353671, 1e-12);
  ASSERT_EQ(iwp_iwp_loss(e.get(), theta, x, 2, -1.0, b.get(), &v), IWP_OK);
  EXPECT_NEAR(v, 1.164598788501096e-05, 1e-17);
  double g[2];
  ASSERT_EQ(iwp_iwp_grad(q.get(), theta, x, 2, -1.0, b.get(), g), IWP_OK);
  EXPECT_NEAR(g[0], -23.43865881160535, 1e-11);
  EXPECT_NEAR(g[1], 39.91937426584886, 1e-11);
  ASSERT_EQ(iwp_loss_value(e.get(), theta, x, 2, 1.0, &v), IWP_OK);
  EXPECT_NEAR(v, std::exp(-0.2), 1e-15);
  ASSERT_EQ(iwp_loss_grad(e.get(), theta, x, 2, 1.0, g), IWP_OK);
  EXPECT_NEAR(g[0], -2.0 * std::exp(-0.2), 1e-15);
}

TEST(CApiTest, LossErrors) {
  iwp_loss* l = nullptr;
  EXPECT_EQ(iwp_loss_create(IWP_LOSS_LOGISTIC, 99, &l), IWP_ORDER_EXCEEDED);
  EXPECT_EQ(iwp_loss_create(static_cast<iwp_loss_kind>(7), -1, &l),
            IWP_INVALID_ARGUMENT);
  Loss q = MakeLoss(IWP_LOSS_QUADRATIC);
  Budget b = MakeBudget(1, 1, 1);
  const double theta[] = {0.1};
  double v;
  EXPECT_EQ(iwp_iwp_loss(q.get(), theta, theta, 1, 0.5, b.get(), &v),
            IWP_INVALID_LABEL);
  iwp_budget* raw = nullptr;
  ASSERT_EQ(iwp_budget_create_regression(1, 1, 1e-5, 1, 1, &raw), IWP_OK);
  Budget reg(raw);
  EXPECT_EQ(iwp_iwp_loss(q.get(), theta, theta, 1, 1.0, reg.get(), &v),
            IWP_MODE_MISMATCH);
  double g[1];
  EXPECT_EQ(iwp_regression_debiased_grad(theta, theta, 1, 0.5, b.get(), g),
            IWP_MODE_MISMATCH);
  EXPECT_EQ(iwp_regression_debiased_grad(theta, theta, 1, 0.5, reg.get(), g),
            IWP_OK);
}

TEST(CApiTest, DatasetsFromArraysAndSplit) {
  const double features[] = {0.1, 0.2, -0.3, 0.4, 0.5, -0.6, 0.0, 0.1};
  const double labels[] = {1, -1, 1, -1};
  iwp_dataset* raw = nullptr;
  ASSERT_EQ(iwp_dataset_from_arrays(4, 2, features, labels, &raw), IWP_OK);
  Dataset d(raw);
  int64_t n;
  int p;
  ASSERT_EQ(iwp_dataset_shape(d.get(), &n, &p), IWP_OK);
  EXPECT_EQ(n, 4);
  EXPECT_EQ(p, 2);
  double row[2], y;
  ASSERT_EQ(iwp_dataset_row(d.get(), 2, row, &y), IWP_OK);
  EXPECT_EQ(row[0], 0.5);
  EXPECT_EQ(y, 1.0);
  EXPECT_EQ(iwp_dataset_row(d.get(), 4, row, &y), IWP_INVALID_ARGUMENT);
  iwp_dataset *train = nullptr, *test = nullptr;
  ASSERT_EQ(iwp_dataset_split(d.get(), 0.25, 1, &train, &test), IWP_OK);
  Dataset tr(train), te(test);
  ASSERT_EQ(iwp_dataset_shape(tr.get(), &n, &p), IWP_OK);
  EXPECT_EQ(n, 3);
  double theta[2];
  EXPECT_EQ(iwp_dataset_ridge(d.get(), 0.1, theta), IWP_OK);
}

TEST(CApiTest, IngestCsv) {
  const std::string path = TempPath("ingest.csv");
  {
    std::ofstream out(path);
    out << "a,b,label\n1,5,yes\n3,6,no\n2,7,yes\n";
  }
  const char* names[] = {"label"};
  const iwp_column_role roles[] = {IWP_COLUMN_LABEL};
  const char* values[] = {"yes", "no"};
  const double targets[] = {1.0, -1.0};
  iwp_column_schema schema{names,   roles, 1, IWP_COLUMN_FEATURE,
                           values,  targets, 2, IWP_LABEL_BINARY};
  iwp_dataset* raw = nullptr;
  double scale = 0;
  ASSERT_EQ(iwp_dataset_ingest_csv(path.c_str(), &schema, 1.0, &raw, &scale),
            IWP_OK);
  Dataset d(raw);
  EXPECT_NEAR(scale, 1.0 / std::sqrt(2.0), 1e-15);
  double row[2], y;
  ASSERT_EQ(iwp_dataset_row(d.get(), 1, row, &y), IWP_OK);
  EXPECT_EQ(y, -1.0);
  const char* bad_values[] = {"yes"};
  schema.label_values = bad_values;
  schema.n_labels = 1;
  EXPECT_EQ(iwp_dataset_ingest_csv(path.c_str(), &schema, 1.0, &raw, nullptr),
            IWP_UNKNOWN_LABEL_VALUE);
  EXPECT_EQ(iwp_dataset_ingest_csv("/nonexistent.csv", &schema, 1.0, &raw,
                                   nullptr),
            IWP_IO_ERROR);
  std::remove(path.c_str());
}

TEST(CApiTest, ReleaseRoundTrip) {
  Dataset d = MakeDataset(100, 1);
  Budget b = MakeBudget(1, 1, std::sqrt(2.0));
  iwp_release* raw = nullptr;
  ASSERT_EQ(iwp_release_create(d.get(), b.get(), 7, &raw), IWP_OK);
  Release r(raw);
  ASSERT_EQ(iwp_release_set_norm_bound_source(r.get(), "box-sqrt-p"), IWP_OK);
  iwp_manifest m;
  ASSERT_EQ(iwp_release_manifest(r.get(), &m), IWP_OK);
  EXPECT_EQ(m.n, 100);
  EXPECT_EQ(m.seed, 7u);
  EXPECT_STREQ(m.norm_bound_source, "box-sqrt-p");
  iwp_budget_info info;
  iwp_budget_get(b.get(), &info);
  EXPECT_EQ(m.sigma_squared, info.sigma_squared);

  const std::string path = TempPath("release.csv");
  const char* comments[] = {"from the C API test"};
  ASSERT_EQ(iwp_release_write_csv(r.get(), path.c_str(), comments, 1), IWP_OK);
  ASSERT_EQ(iwp_release_read_csv(path.c_str(), &raw), IWP_OK);
  Release back(raw);
  for (int64_t i = 0; i < 100; i += 33) {
    double a[2], c[2], ya, yc;
    iwp_release_row(r.get(), i, a, &ya);
    iwp_release_row(back.get(), i, c, &yc);
    EXPECT_EQ(a[0], c[0]);
    EXPECT_EQ(a[1], c[1]);
    EXPECT_EQ(ya, yc);
  }
  iwp_budget* rb = nullptr;
  ASSERT_EQ(iwp_release_budget(back.get(), &rb), IWP_OK);
  Budget restored(rb);
  iwp_budget_info info2;
  iwp_budget_get(restored.get(), &info2);
  EXPECT_EQ(info2.sigma_squared, info.sigma_squared);
  std::remove(path.c_str());

  EXPECT_EQ(iwp_release_set_norm_bound_source(r.get(), nullptr),
            IWP_INVALID_ARGUMENT);
}

TEST(CApiTest, TrainAllMethods) {
  Dataset all = MakeDataset(2000, 2);
  iwp_dataset *train = nullptr, *test = nullptr;
  ASSERT_EQ(iwp_dataset_split(all.get(), 0.2, 3, &train, &test), IWP_OK);
  Dataset tr(train), te(test);
  Budget b = MakeBudget(2, 2, std::sqrt(2.0));
  iwp_release* raw = nullptr;
  ASSERT_EQ(iwp_release_create(tr.get(), b.get(), 4, &raw), IWP_OK);
  Release rel(raw);
  Loss loss = MakeLoss(IWP_LOSS_EXPONENTIAL);
  iwp_sgd_options o;
  iwp_sgd_options_default(&o);
  o.step_size = 1e-2;
  o.batch_size = 16;
  for (iwp_method m : {IWP_METHOD_REAL, IWP_METHOD_NOISY, IWP_METHOD_IWP}) {
    iwp_trace* t = nullptr;
    ASSERT_EQ(iwp_train(m, loss.get(), b.get(), tr.get(), rel.get(), te.get(),
                        &o, &t),
              IWP_OK)
        << iwp_last_error_message();
    Trace trace(t);
    EXPECT_EQ(iwp_trace_row_count(t), 100u);
    EXPECT_EQ(iwp_trace_dimension(t), 2u);
    EXPECT_EQ(iwp_trace_step_size(t), 1e-2);
    iwp_trace_row row;
    ASSERT_EQ(iwp_trace_get_row(t, 99, &row), IWP_OK);
    EXPECT_EQ(row.batch_index, 99);
    EXPECT_LE(row.theta_norm, o.radius);
    double theta[2], risk, acc;
    ASSERT_EQ(iwp_trace_theta(t, theta), IWP_OK);
    ASSERT_EQ(iwp_evaluate(theta, 2, te.get(), loss.get(), o.lambda, &risk, &acc),
              IWP_OK);
    EXPECT_DOUBLE_EQ(risk, row.test_risk);
    EXPECT_EQ(iwp_trace_get_row(t, 100, &row), IWP_INVALID_ARGUMENT);
  }
  iwp_trace* t = nullptr;
  EXPECT_EQ(iwp_train(IWP_METHOD_REAL, loss.get(), b.get(), nullptr, rel.get(),
                      te.get(), &o, &t),
            IWP_INVALID_ARGUMENT);
  Budget other = MakeBudget(3, 3, std::sqrt(2.0));
  EXPECT_EQ(iwp_train(IWP_METHOD_IWP, loss.get(), other.get(), tr.get(),
                      rel.get(), te.get(), &o, &t),
            IWP_BUDGET_MISMATCH);
}

TEST(CApiTest, StepSize) {
  iwp_sgd_options o;
  iwp_sgd_options_default(&o);
  o.schedule = IWP_SCHEDULE_LOG_OVER_N;
  o.batch_size = 1;
  o.mu = 1;
  o.smoothness = 2;
  o.variance_bound = 1;
  o.initial_distance_sq = 1;
  double g = 0;
  ASSERT_EQ(iwp_resolve_step_size(&o, 1000, &g), IWP_OK);
  EXPECT_DOUBLE_EQ(g, std::log(1000.0) / 1000.0);
}

void CountWarnings(const char*, void* user) { ++*static_cast<int*>(user); }

TEST(CApiTest, WarningHandler) {
  int count = 0;
  iwp_set_warning_handler(CountWarnings, &count);
  double v;
  ASSERT_EQ(iwp_inverse_weight(1e-9, &v), IWP_OK);
  iwp_set_warning_handler(nullptr, nullptr);
  EXPECT_EQ(count, 1);
}

TEST(CApiTest, ValidationSuites) {
  ASSERT_EQ(iwp_suite_count(), 7u);
  EXPECT_STREQ(iwp_suite_name(6), "all");
  EXPECT_EQ(iwp_suite_name(7), nullptr);
  Loss q = MakeLoss(IWP_LOSS_QUADRATIC);
  Budget b = MakeBudget(1, 1, 1);
  iwp_suite_options o;
  iwp_suite_options_default(&o);
  iwp_report* raw = nullptr;
  ASSERT_EQ(iwp_validate("bernoulli-variance", q.get(), b.get(), &o, &raw),
            IWP_OK);
  Report r(raw);
  EXPECT_EQ(iwp_report_count(r.get()), 510u);
  EXPECT_EQ(iwp_report_any_hard_failure(r.get()), 0);
  iwp_check c;
  ASSERT_EQ(iwp_report_get(r.get(), 0, &c), IWP_OK);
  EXPECT_STREQ(c.check_id, "bernoulli.variance");
  EXPECT_EQ(c.passed, 1);

  iwp_testing_set_inverse_weight_scale(1.05);
  ASSERT_EQ(iwp_validate("bernoulli-variance", q.get(), b.get(), &o, &raw),
            IWP_OK);
  iwp_testing_set_inverse_weight_scale(1.0);
  Report bad(raw);
  EXPECT_EQ(iwp_report_any_hard_failure(bad.get()), 1);

  EXPECT_EQ(iwp_validate("bogus", q.get(), b.get(), &o, &raw),
            IWP_INVALID_ARGUMENT);

  const std::string path = TempPath("report.csv");
  ASSERT_EQ(iwp_report_write_csv(r.get(), path.c_str(), nullptr, 0), IWP_OK);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("check_id,", 0), 0u);
  std::remove(path.c_str());
}

TEST(CApiTest, BiasScan) {
  Loss e = MakeLoss(IWP_LOSS_EXPONENTIAL);
  const int orders[] = {0, 1, 2};
  const double variances[] = {0.5, 1.0};
  iwp_bias_table* raw = nullptr;
  ASSERT_EQ(iwp_bias_scan(e.get(), orders, 3, variances, 2, nullptr, 0, 1.0,
                          5000, 1, &raw),
            IWP_OK);
  BiasTable t(raw);
  ASSERT_EQ(iwp_bias_table_count(t.get()), 6u);
  iwp_bias_row row;
  ASSERT_EQ(iwp_bias_table_get(t.get(), 4, &row), IWP_OK);
  EXPECT_EQ(row.variance, 1.0);
  EXPECT_EQ(row.truncation_order, 1);
  EXPECT_GT(row.bias, 0.0);
  const double points[] = {0.0};
  EXPECT_EQ(iwp_bias_scan(e.get(), orders, 3, variances, 2, points, 1, 0.0, 0,
                          1, &raw),
            IWP_INVALID_ARGUMENT);
}

}  // namespace
