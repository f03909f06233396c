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

// iwp: generate, release, train on and validate one-shot LDP datasets.
//
//   iwp datagen    --config FILE [--out DIR] [--desk]
//   iwp release    --config FILE [--seed N] [--force]
//   iwp train      --config FILE --method real|noisy|iwp
//   iwp validate   --config FILE [--suite NAME]
//   iwp bias-scan  --config FILE [--orders 0,1,2]
//   iwp config     [--config FILE]        (prints the effective config)
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 io error.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "config.h"
#include "iwp/iwp.h"

namespace iwp_cli {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CliError {
  int exit_code;
  std::string message;
};

[[noreturn]] void Throw(int code, const std::string& message) {
  throw CliError{code, message};
}

int ExitCodeFor(iwp_status status) {
  switch (status) {
    case IWP_IO_ERROR:
    case IWP_PARSE_ERROR:
    case IWP_MISSING_COLUMN:
    case IWP_UNKNOWN_LABEL_VALUE:
      return kExitIo;
    default:
      return kExitUsage;
  }
}

void Call(iwp_status status, const std::string& context) {
  if (status != IWP_OK) {
    Throw(ExitCodeFor(status), context + ": " + iwp_last_error_message());
  }
}

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
using Report =
    std::unique_ptr<iwp_report, Deleter<iwp_report, iwp_report_destroy>>;
using BiasTable = std::unique_ptr<iwp_bias_table,
                                  Deleter<iwp_bias_table, iwp_bias_table_destroy>>;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string method;
  std::string out_dir;
  bool force = false;
  bool desk = false;
  std::string suite = "all";
  std::string orders;
  double corrupt_inverse_weight = 1.0;
};

struct Context {
  ExperimentConfig config;
  std::string hash;
  fs::path out;
  std::string command;

  std::vector<std::string> Header() const {
    return {std::string("iwp ") + iwp_version() + " config_sha256=" + hash,
            "command=" + command + " seed=" +
                std::to_string(config.experiment.seed)};
  }
};

// Seed of repetition `k`; splitmix64 so neighbouring master seeds give
// unrelated streams.
std::uint64_t RepetitionSeed(std::uint64_t master, int k) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(k) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string Num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::vector<const char*> CStrings(const std::vector<std::string>& lines) {
  std::vector<const char*> out;
  for (const std::string& s : lines) out.push_back(s.c_str());
  return out;
}

void WriteTextFile(const fs::path& path, const std::vector<std::string>& header,
                   const std::string& body) {
  std::ofstream out(path);
  if (!out) Throw(kExitIo, "cannot open " + path.string() + " for writing");
  for (const std::string& line : header) out << "# " << line << '\n';
  out << body;
  out.flush();
  if (!out) Throw(kExitIo, "write failed: " + path.string());
}

Context MakeContext(const Options& o, const std::string& command) {
  Context ctx;
  ctx.command = command;
  try {
    if (!o.config_path.empty()) {
      if (!fs::is_regular_file(o.config_path)) {
        Throw(kExitIo, "cannot read config " + o.config_path);
      }
      ctx.config = LoadConfig(o.config_path);
    }
    if (o.desk) ApplyDeskPreset(ctx.config);
    if (o.seed) ctx.config.experiment.seed = *o.seed;
    if (!o.out_dir.empty()) ctx.config.experiment.out_dir = o.out_dir;
    ValidateConfig(ctx.config);
  } catch (const ConfigError& e) {
    Throw(kExitUsage, e.what());
  }
  ctx.hash = ConfigHash(ctx.config);
  ctx.out = ctx.config.experiment.out_dir;
  return ctx;
}

void EnsureOutDir(const Context& ctx) {
  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) Throw(kExitIo, "cannot create " + ctx.out.string() + ": " + ec.message());
}

double NormBound(const ExperimentConfig& c, int p) {
  if (c.budget.norm_bound > 0.0) return c.budget.norm_bound;
  return c.task == "synthetic" ? std::sqrt(static_cast<double>(p)) : 1.0;
}

std::string NormBoundSource(const ExperimentConfig& c) {
  if (c.budget.norm_bound > 0.0) return "config";
  return c.task == "synthetic" ? "box-sqrt-p" : "l2-rescaled";
}

Budget MakeBudget(const ExperimentConfig& c, int p) {
  iwp_budget* b = nullptr;
  Call(iwp_budget_from_total(c.budget.epsilon, c.budget.delta, NormBound(c, p),
                             c.budget.feature_share, &b),
       "budget");
  return Budget(b);
}

Loss MakeLoss(const ExperimentConfig& c) {
  iwp_loss_kind kind = IWP_LOSS_EXPONENTIAL;
  if (c.loss.kind == "quadratic") kind = IWP_LOSS_QUADRATIC;
  if (c.loss.kind == "logistic") kind = IWP_LOSS_LOGISTIC;
  iwp_loss* l = nullptr;
  Call(iwp_loss_create(kind, c.loss.truncation_order, &l), "loss");
  return Loss(l);
}

Dataset ReadDataset(const fs::path& path) {
  if (!fs::exists(path)) {
    Throw(kExitIo, "missing " + path.string() + " (run datagen first)");
  }
  iwp_dataset* d = nullptr;
  Call(iwp_dataset_read_csv(path.string().c_str(), &d), path.string());
  return Dataset(d);
}

int DatasetDim(const iwp_dataset* d) {
  int p = 0;
  Call(iwp_dataset_shape(d, nullptr, &p), "dataset");
  return p;
}

fs::path ReleasePath(const Context& ctx, int k) {
  return ctx.out / ("release_seed" + std::to_string(k) + ".csv");
}

// Commands.

int CmdDatagen(const Options& o) {
  Context ctx = MakeContext(o, "datagen");
  const ExperimentConfig& c = ctx.config;
  EnsureOutDir(ctx);
  Dataset all;
  if (c.task == "synthetic") {
    iwp_dataset_spec spec;
    iwp_dataset_spec_default(&spec);
    spec.n = c.synthetic.n;
    spec.p = c.synthetic.p;
    spec.class_separation = c.synthetic.class_separation;
    spec.label_balance = c.synthetic.label_balance;
    spec.informative = c.synthetic.informative;
    spec.seed = c.synthetic.seed;
    iwp_dataset* d = nullptr;
    Call(iwp_dataset_generate(&spec, &d), "datagen");
    all.reset(d);
  } else {
    std::vector<const char*> names;
    std::vector<iwp_column_role> roles;
    names.push_back(c.csv.label_column.c_str());
    roles.push_back(IWP_COLUMN_LABEL);
    for (const std::string& f : c.csv.feature_columns) {
      names.push_back(f.c_str());
      roles.push_back(IWP_COLUMN_FEATURE);
    }
    std::vector<const char*> values;
    std::vector<double> targets;
    for (const std::string& v : c.csv.positive_values) {
      values.push_back(v.c_str());
      targets.push_back(1.0);
    }
    for (const std::string& v : c.csv.negative_values) {
      values.push_back(v.c_str());
      targets.push_back(-1.0);
    }
    iwp_column_schema schema{};
    schema.column_names = names.data();
    schema.column_roles = roles.data();
    schema.n_columns = names.size();
    schema.default_role = c.csv.feature_columns.empty() ? IWP_COLUMN_FEATURE
                                                        : IWP_COLUMN_IGNORE;
    schema.label_values = values.data();
    schema.label_targets = targets.data();
    schema.n_labels = values.size();
    schema.mode = IWP_LABEL_BINARY;
    const double bound = c.budget.norm_bound > 0.0 ? c.budget.norm_bound : 1.0;
    iwp_dataset* d = nullptr;
    double row_scale = 1.0;
    Call(iwp_dataset_ingest_csv(c.csv.path.c_str(), &schema, bound, &d,
                                &row_scale),
         "ingest " + c.csv.path);
    all.reset(d);
  }
  iwp_dataset* train = nullptr;
  iwp_dataset* test = nullptr;
  Call(iwp_dataset_split(all.get(), c.experiment.test_fraction,
                         c.experiment.seed, &train, &test),
       "split");
  Dataset train_owner(train), test_owner(test);
  const std::vector<std::string> header = ctx.Header();
  const std::vector<const char*> lines = CStrings(header);
  for (const auto& [name, d] :
       {std::pair{"train.csv", train}, std::pair{"test.csv", test}}) {
    const fs::path path = ctx.out / name;
    Call(iwp_dataset_write_csv(d, path.string().c_str(), lines.data(),
                               lines.size()),
         path.string());
  }
  int64_t n_train = 0, n_test = 0;
  Call(iwp_dataset_shape(train, &n_train, nullptr), "train");
  Call(iwp_dataset_shape(test, &n_test, nullptr), "test");
  std::cout << "wrote " << n_train << " train and " << n_test
            << " test records to " << ctx.out.string() << '\n';
  return kExitOk;
}

int CmdRelease(const Options& o) {
  Context ctx = MakeContext(o, "release");
  const ExperimentConfig& c = ctx.config;
  Dataset train = ReadDataset(ctx.out / "train.csv");
  const int p = DatasetDim(train.get());
  Budget budget = MakeBudget(c, p);
  if (!o.force) {
    for (int k = 0; k < c.experiment.n_seeds; ++k) {
      if (fs::exists(ReleasePath(ctx, k))) {
        Throw(kExitIo, ReleasePath(ctx, k).string() +
                           " exists; every record is released once, pass "
                           "--force to replace the release");
      }
    }
  }
  const std::vector<std::string> header = ctx.Header();
  const std::vector<const char*> lines = CStrings(header);
  const std::string source = NormBoundSource(c);
  double sigma2 = 0.0;
  for (int k = 0; k < c.experiment.n_seeds; ++k) {
    iwp_release* r = nullptr;
    Call(iwp_release_create(train.get(), budget.get(),
                            RepetitionSeed(c.experiment.seed, k), &r),
         "release");
    Release release(r);
    Call(iwp_release_set_norm_bound_source(r, source.c_str()), "release");
    const fs::path path = ReleasePath(ctx, k);
    Call(iwp_release_write_csv(r, path.string().c_str(), lines.data(),
                               lines.size()),
         path.string());
    iwp_manifest m;
    Call(iwp_release_manifest(r, &m), "manifest");
    sigma2 = m.sigma_squared;
  }
  std::cout << "released " << c.experiment.n_seeds << " copies, sigma^2 = "
            << Num(sigma2) << '\n';
  return kExitOk;
}

struct SeedResult {
  std::vector<double> theta;
  double risk = 0.0;
  double accuracy = 0.0;
};

iwp_sgd_options SgdOptions(const ExperimentConfig& c, std::uint64_t seed) {
  iwp_sgd_options o;
  iwp_sgd_options_default(&o);
  o.step_size = c.sgd.step_size;
  o.schedule = c.sgd.schedule == "log_over_n" ? IWP_SCHEDULE_LOG_OVER_N
                                              : IWP_SCHEDULE_CONSTANT;
  o.batch_size = c.sgd.batch_size;
  o.radius = c.sgd.radius;
  o.lambda = c.sgd.lambda;
  o.seed = seed;
  o.init_radius = c.sgd.init_radius;
  o.mu = c.sgd.mu;
  o.smoothness = c.sgd.smoothness;
  o.variance_bound = c.sgd.variance_bound;
  o.initial_distance_sq = c.sgd.initial_distance_sq;
  o.eval_every = c.sgd.eval_every;
  return o;
}

std::string TraceCsv(const iwp_trace* trace) {
  std::ostringstream out;
  out << "batch_index,mean_train_estimator_value,test_risk,test_accuracy,"
         "theta_norm\n";
  const size_t rows = iwp_trace_row_count(trace);
  for (size_t i = 0; i < rows; ++i) {
    iwp_trace_row r;
    Call(iwp_trace_get_row(trace, i, &r), "trace");
    out << r.batch_index << ',' << Num(r.mean_train_estimator_value) << ','
        << Num(r.test_risk) << ',' << Num(r.test_accuracy) << ','
        << Num(r.theta_norm) << '\n';
  }
  return out.str();
}

int CmdTrain(const Options& o) {
  Context ctx = MakeContext(o, "train");
  const ExperimentConfig& c = ctx.config;
  iwp_method method;
  if (o.method == "real") {
    method = IWP_METHOD_REAL;
  } else if (o.method == "noisy") {
    method = IWP_METHOD_NOISY;
  } else if (o.method == "iwp") {
    method = IWP_METHOD_IWP;
  } else {
    Throw(kExitUsage, "--method must be real, noisy or iwp");
  }
  ctx.command = "train method=" + o.method;
  Dataset train = ReadDataset(ctx.out / "train.csv");
  Dataset test = ReadDataset(ctx.out / "test.csv");
  const int p = DatasetDim(train.get());
  Budget budget = MakeBudget(c, p);
  Loss loss = MakeLoss(c);
  const int n_seeds = c.experiment.n_seeds;
  if (method != IWP_METHOD_REAL) {
    for (int k = 0; k < n_seeds; ++k) {
      if (!fs::exists(ReleasePath(ctx, k))) {
        Throw(kExitIo, "missing release " + ReleasePath(ctx, k).string() +
                           " (run release first)");
      }
    }
  }
  const std::vector<std::string> header = ctx.Header();

  // Seeds are independent; each worker writes its own trace file and the
  // summary is assembled afterwards in seed order.
  std::vector<SeedResult> results(n_seeds);
  std::optional<CliError> failure;
  std::mutex mu;
  int next = 0;
  auto worker = [&] {
    while (true) {
      int k;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failure || next >= n_seeds) return;
        k = next++;
      }
      try {
        Release release;
        if (method != IWP_METHOD_REAL) {
          iwp_release* r = nullptr;
          Call(iwp_release_read_csv(ReleasePath(ctx, k).string().c_str(), &r),
               ReleasePath(ctx, k).string());
          release.reset(r);
        }
        const iwp_sgd_options opts =
            SgdOptions(c, RepetitionSeed(c.experiment.seed, k));
        iwp_trace* t = nullptr;
        Call(iwp_train(method, loss.get(), budget.get(), train.get(),
                       release.get(), test.get(), &opts, &t),
             "train seed " + std::to_string(k));
        Trace trace(t);
        SeedResult& res = results[k];
        res.theta.resize(iwp_trace_dimension(t));
        Call(iwp_trace_theta(t, res.theta.data()), "trace");
        Call(iwp_evaluate(res.theta.data(), res.theta.size(), test.get(),
                          loss.get(), c.sgd.lambda, &res.risk, &res.accuracy),
             "evaluate");
        WriteTextFile(ctx.out / ("trace_" + o.method + "_seed" +
                                 std::to_string(k) + ".csv"),
                      header, TraceCsv(t));
      } catch (const CliError& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = e;
      }
    }
  };
  const int n_threads = std::clamp<int>(
      static_cast<int>(std::thread::hardware_concurrency()), 1, n_seeds);
  std::vector<std::thread> threads;
  for (int i = 1; i < n_threads; ++i) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  if (failure) throw *failure;

  std::vector<double> mean_theta(p, 0.0);
  double mean_risk = 0.0, mean_acc = 0.0;
  for (const SeedResult& r : results) {
    for (int j = 0; j < p; ++j) mean_theta[j] += r.theta[j] / n_seeds;
    mean_risk += r.risk / n_seeds;
    mean_acc += r.accuracy / n_seeds;
  }
  double var_risk = 0.0, var_acc = 0.0;
  if (n_seeds > 1) {
    for (const SeedResult& r : results) {
      var_risk += (r.risk - mean_risk) * (r.risk - mean_risk) / (n_seeds - 1);
      var_acc += (r.accuracy - mean_acc) * (r.accuracy - mean_acc) / (n_seeds - 1);
    }
  }
  double avg_risk = 0.0, avg_acc = 0.0;
  Call(iwp_evaluate(mean_theta.data(), mean_theta.size(), test.get(),
                    loss.get(), c.sgd.lambda, &avg_risk, &avg_acc),
       "evaluate");

  std::ostringstream body;
  body << "row,seed,final_risk,final_accuracy,final_theta_norm,risk_variance,"
          "accuracy_variance,averaged_model_risk,averaged_model_accuracy";
  for (int j = 0; j < p; ++j) body << ",theta_" << j + 1;
  body << '\n';
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  const std::string nan = "nan";
  for (int k = 0; k < n_seeds; ++k) {
    const SeedResult& r = results[k];
    body << "seed," << k << ',' << Num(r.risk) << ',' << Num(r.accuracy) << ','
         << Num(norm(r.theta)) << ',' << nan << ',' << nan << ',' << nan << ','
         << nan;
    for (double v : r.theta) body << ',' << Num(v);
    body << '\n';
  }
  body << "aggregate,," << Num(mean_risk) << ',' << Num(mean_acc) << ','
       << Num(norm(mean_theta)) << ',' << Num(var_risk) << ',' << Num(var_acc)
       << ',' << Num(avg_risk) << ',' << Num(avg_acc);
  for (double v : mean_theta) body << ',' << Num(v);
  body << '\n';
  WriteTextFile(ctx.out / ("summary_" + o.method + ".csv"), header, body.str());
  std::cout << o.method << ": mean final risk " << Num(mean_risk)
            << ", averaged-model risk " << Num(avg_risk) << " over " << n_seeds
            << " seeds\n";
  return kExitOk;
}

int CmdValidate(const Options& o) {
  Context ctx = MakeContext(o, "validate suite=" + o.suite);
  const ExperimentConfig& c = ctx.config;
  bool known = false;
  for (size_t i = 0; i < iwp_suite_count(); ++i) {
    if (o.suite == iwp_suite_name(i)) known = true;
  }
  if (!known) Throw(kExitUsage, "unknown suite '" + o.suite + "'");
  EnsureOutDir(ctx);
  Budget budget = MakeBudget(c, c.validate.p);
  Loss loss = MakeLoss(c);
  iwp_suite_options opts;
  iwp_suite_options_default(&opts);
  opts.seed = c.experiment.seed;
  opts.n_samples = c.validate.n_samples;
  opts.p = c.validate.p;
  opts.n_points = c.validate.n_points;
  opts.theta_radius = c.validate.theta_radius;
  opts.z_threshold = c.validate.z_threshold;
  std::vector<std::string> header = ctx.Header();
  if (o.corrupt_inverse_weight != 1.0) {
    header.push_back("inverse weight corrupted by factor " +
                     Num(o.corrupt_inverse_weight));
  }
  iwp_testing_set_inverse_weight_scale(o.corrupt_inverse_weight);
  iwp_report* r = nullptr;
  const iwp_status status =
      iwp_validate(o.suite.c_str(), loss.get(), budget.get(), &opts, &r);
  iwp_testing_set_inverse_weight_scale(1.0);
  Call(status, "validate");
  Report report(r);
  const fs::path path = ctx.out / ("validate_" + o.suite + ".csv");
  const std::vector<const char*> lines = CStrings(header);
  Call(iwp_report_write_csv(r, path.string().c_str(), lines.data(),
                            lines.size()),
       path.string());
  size_t hard_failures = 0, soft_failures = 0;
  for (size_t i = 0; i < iwp_report_count(r); ++i) {
    iwp_check check;
    Call(iwp_report_get(r, i, &check), "report");
    if (check.passed) continue;
    (check.hard ? hard_failures : soft_failures)++;
    std::cout << (check.hard ? "FAIL " : "warn ") << check.check_id << ' '
              << check.params << " estimate=" << Num(check.estimate)
              << " target=" << Num(check.target) << " z=" << Num(check.z_score)
              << '\n';
  }
  std::cout << iwp_report_count(r) << " checks, " << hard_failures
            << " hard failures, " << soft_failures << " soft failures; report "
            << path.string() << '\n';
  return iwp_report_any_hard_failure(r) ? kExitValidation : kExitOk;
}

std::vector<int> ParseOrders(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    int k = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), k);
    if (item.empty() || r.ec != std::errc() ||
        r.ptr != item.data() + item.size() || k < 0) {
      Throw(kExitUsage, "--orders expects comma-separated nonnegative ints");
    }
    out.push_back(k);
  }
  if (out.empty()) Throw(kExitUsage, "--orders is empty");
  return out;
}

int CmdBiasScan(const Options& o) {
  Context ctx = MakeContext(o, "bias-scan");
  if (!o.orders.empty()) ctx.config.bias_scan.orders = ParseOrders(o.orders);
  ctx.hash = ConfigHash(ctx.config);
  const ExperimentConfig& c = ctx.config;
  EnsureOutDir(ctx);
  Loss loss = MakeLoss(c);
  iwp_bias_table* t = nullptr;
  Call(iwp_bias_scan(loss.get(), c.bias_scan.orders.data(),
                     c.bias_scan.orders.size(), c.bias_scan.variances.data(),
                     c.bias_scan.variances.size(), nullptr, 0,
                     c.bias_scan.eval_radius, c.bias_scan.mc_samples,
                     c.experiment.seed, &t),
       "bias-scan");
  BiasTable table(t);
  std::ostringstream body;
  body << "loss,variance,truncation_order,bias,std_error,worst_point\n";
  for (size_t i = 0; i < iwp_bias_table_count(t); ++i) {
    iwp_bias_row r;
    Call(iwp_bias_table_get(t, i, &r), "bias-scan");
    body << iwp_loss_name(loss.get()) << ',' << Num(r.variance) << ','
         << r.truncation_order << ',' << Num(r.bias) << ','
         << Num(r.std_error) << ',' << Num(r.worst_point) << '\n';
  }
  const fs::path path = ctx.out / "bias_scan.csv";
  WriteTextFile(path, ctx.Header(), body.str());
  std::cout << "wrote " << iwp_bias_table_count(t) << " rows to "
            << path.string() << '\n';
  return kExitOk;
}

int CmdConfig(const Options& o) {
  Context ctx = MakeContext(o, "config");
  std::cout << "; config_sha256=" << ctx.hash << '\n'
            << SerializeConfig(ctx.config);
  return kExitOk;
}

}  // namespace
}  // namespace iwp_cli

int main(int argc, char** argv) {
  using namespace iwp_cli;
  CLI::App app{"Bias-corrected learning from one-shot LDP releases"};
  app.set_version_flag("--version", std::string(iwp_version()));
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Experiment config (INI)");
    sub->add_option("--seed", o.seed, "Override experiment.seed");
    sub->add_option("--out", o.out_dir, "Override experiment.out_dir");
    sub->add_flag("--desk", o.desk, "Desk preset: n = 1e5, 20 seeds");
  };
  CLI::App* datagen = app.add_subcommand("datagen", "Write train/test CSVs");
  common(datagen);
  CLI::App* release = app.add_subcommand("release", "One-shot LDP release");
  common(release);
  release->add_flag("--force", o.force, "Replace an existing release");
  CLI::App* train = app.add_subcommand("train", "Run SGD over all seeds");
  common(train);
  train->add_option("--method", o.method, "real | noisy | iwp")
      ->required()
      ->check(CLI::IsMember({"real", "noisy", "iwp"}));
  CLI::App* validate = app.add_subcommand("validate", "Monte-Carlo checks");
  common(validate);
  validate->add_option("--suite", o.suite, "Suite name or 'all'");
  validate
      ->add_option("--test-corrupt-inverse-weight", o.corrupt_inverse_weight,
                   "Scale the inverse weight (failure-path testing)")
      ->group("");
  CLI::App* bias_scan =
      app.add_subcommand("bias-scan", "Tabulate truncation bias");
  common(bias_scan);
  bias_scan->add_option("--orders", o.orders, "Comma-separated K list");
  CLI::App* config = app.add_subcommand("config", "Print effective config");
  common(config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*datagen) return CmdDatagen(o);
    if (*release) return CmdRelease(o);
    if (*train) return CmdTrain(o);
    if (*validate) return CmdValidate(o);
    if (*bias_scan) return CmdBiasScan(o);
    if (*config) return CmdConfig(o);
  } catch (const CliError& e) {
    std::cerr << "iwp: " << e.message << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "iwp: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
