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

// Experiment configuration for the iwp command-line tool.
//
// The on-disk format is INI: sections [task], [synthetic], [csv], [budget],
// [loss], [sgd], [experiment], [validate] and [bias_scan]. Unknown keys are
// rejected so typos do not silently fall back to defaults. Serialize() writes
// every field in a fixed order with shortest round-trip numbers, so
// Parse(Serialize(c)) == c and the SHA-256 of Serialize() identifies a run.

#ifndef IWP_TOOLS_CONFIG_H_
#define IWP_TOOLS_CONFIG_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwp_cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SyntheticSection {
  std::int64_t n = 1000000;
  int p = 2;
  double class_separation = 1.0;
  double label_balance = 0.5;
  int informative = -1;
  std::uint64_t seed = 0;
  bool operator==(const SyntheticSection&) const = default;
};

struct CsvSection {
  std::string path;
  std::string label_column = "label";
  std::vector<std::string> positive_values;
  std::vector<std::string> negative_values;
  // Empty: every column except the label is a feature.
  std::vector<std::string> feature_columns;
  bool operator==(const CsvSection&) const = default;
};

struct BudgetSection {
  double epsilon = 2.0;  // total, split by feature_share
  double feature_share = 0.5;
  double delta = 1e-5;
  // 0 selects the default: sqrt(p) for synthetic data in [-1, 1]^p, 1 for
  // CSV data.
  double norm_bound = 0.0;
  bool operator==(const BudgetSection&) const = default;
};

struct LossSection {
  std::string kind = "exponential";  // quadratic | exponential | logistic
  int truncation_order = -1;         // logistic only; -1 picks by variance
  bool operator==(const LossSection&) const = default;
};

struct SgdSection {
  double step_size = 1e-4;
  std::string schedule = "constant";  // constant | log_over_n
  int batch_size = 128;
  double radius = 1.0;
  double lambda = 5.0;
  double init_radius = 0.0;
  int eval_every = 1;
  double mu = 0.0;
  double smoothness = 0.0;
  double variance_bound = 1.0;
  double initial_distance_sq = 1.0;
  bool operator==(const SgdSection&) const = default;
};

struct ExperimentSection {
  int n_seeds = 100;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  double test_fraction = 0.2;
  bool operator==(const ExperimentSection&) const = default;
};

struct ValidateSection {
  std::int64_t n_samples = 100000;
  int p = 2;
  int n_points = 3;
  double theta_radius = 1.0;
  double z_threshold = 4.0;
  bool operator==(const ValidateSection&) const = default;
};

struct BiasScanSection {
  std::vector<int> orders = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> variances = {0.5, 1, 2, 5, 10, 20, 50};
  double eval_radius = 3.0;
  std::int64_t mc_samples = 20000;
  bool operator==(const BiasScanSection&) const = default;
};

struct ExperimentConfig {
  std::string task = "synthetic";  // synthetic | csv
  SyntheticSection synthetic;
  CsvSection csv;
  BudgetSection budget;
  LossSection loss;
  SgdSection sgd;
  ExperimentSection experiment;
  ValidateSection validate;
  BiasScanSection bias_scan;
  bool operator==(const ExperimentConfig&) const = default;
};

// Shrinks the run for a workstation: n = 1e5 records and 20 seeds.
void ApplyDeskPreset(ExperimentConfig& config);

// Throws ConfigError on malformed text, unknown keys or invalid values.
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::string& path);

std::string SerializeConfig(const ExperimentConfig& config);
// Lowercase hex SHA-256 of SerializeConfig(config).
std::string ConfigHash(const ExperimentConfig& config);

// Range and consistency checks shared by ParseConfig and the commands.
void ValidateConfig(const ExperimentConfig& config);

}  // namespace iwp_cli

#endif  // IWP_TOOLS_CONFIG_H_
