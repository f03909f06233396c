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

#include "config.h"

#include <gtest/gtest.h>

#include <string>

namespace iwp_cli {
namespace {

// SHA-256 of the serialized default configuration, computed with hashlib.
constexpr char kDefaultHash[] =
    "e973dff89d003386b07fc2531b276155ba60dbd8181d0d45cc3b9e40fab4d9c1";

TEST(ConfigTest, DefaultsMatchExperimentSettings) {
  const ExperimentConfig c;
  EXPECT_EQ(c.synthetic.n, 1000000);
  EXPECT_EQ(c.synthetic.p, 2);
  EXPECT_EQ(c.budget.epsilon, 2.0);
  EXPECT_EQ(c.budget.delta, 1e-5);
  EXPECT_EQ(c.sgd.step_size, 1e-4);
  EXPECT_EQ(c.sgd.batch_size, 128);
  EXPECT_EQ(c.sgd.lambda, 5.0);
  EXPECT_EQ(c.experiment.n_seeds, 100);
  ExperimentConfig desk;
  ApplyDeskPreset(desk);
  EXPECT_EQ(desk.synthetic.n, 100000);
  EXPECT_EQ(desk.experiment.n_seeds, 20);
}

TEST(ConfigTest, EmptyTextGivesDefaults) {
  EXPECT_EQ(ParseConfig(""), ExperimentConfig{});
}

TEST(ConfigTest, ParsesSectionsAndLists) {
  const ExperimentConfig c = ParseConfig(
      "[task]\ntype = csv\n"
      "[csv]\npath = data.csv\nlabel_column = income\n"
      "positive_values = yes, high\nnegative_values = no\n"
      "[budget]\nepsilon = 4\nnorm_bound = 1.5\n"
      "[loss]\nkind = logistic\ntruncation_order = 3\n"
      "[sgd]\nschedule = log_over_n\nmu = 0.5\nsmoothness = 2\n"
      "[bias_scan]\norders = 1,2,3\nvariances = 0.25\n");
  EXPECT_EQ(c.task, "csv");
  EXPECT_EQ(c.csv.label_column, "income");
  EXPECT_EQ(c.csv.positive_values, (std::vector<std::string>{"yes", "high"}));
  EXPECT_EQ(c.budget.epsilon, 4.0);
  EXPECT_EQ(c.budget.norm_bound, 1.5);
  EXPECT_EQ(c.loss.truncation_order, 3);
  EXPECT_EQ(c.sgd.schedule, "log_over_n");
  EXPECT_EQ(c.bias_scan.orders, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(c.bias_scan.variances, (std::vector<double>{0.25}));
}

TEST(ConfigTest, RoundTripsThroughText) {
  ExperimentConfig c;
  c.task = "csv";
  c.csv.path = "x.csv";
  c.csv.feature_columns = {"a", "b"};
  c.synthetic.seed = 18446744073709551615ull;
  c.budget.delta = 1.0 / 3.0;
  c.sgd.step_size = 0.1 + 0.2;
  c.bias_scan.variances = {0.1, 1e-300, 7.25};
  c.validate.n_samples = 123456789012;
  const ExperimentConfig back = ParseConfig(SerializeConfig(c));
  EXPECT_EQ(back, c);
  EXPECT_EQ(SerializeConfig(back), SerializeConfig(c));
}

TEST(ConfigTest, RejectsUnknownKeysAndSections) {
  EXPECT_THROW(ParseConfig("[sgd]\nstep = 1\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[optimizer]\nstep_size = 1\n"), ConfigError);
  EXPECT_THROW(ParseConfig("stray = 1\n"), ConfigError);
  try {
    ParseConfig("[sgd]\nbatchsize = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("batchsize"), std::string::npos);
  }
}

TEST(ConfigTest, RejectsInvalidValues) {
  EXPECT_THROW(ParseConfig("[sgd]\nbatch_size = 0\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[sgd]\nbatch_size = 2x\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[budget]\nepsilon = -1\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[budget]\ndelta = 1\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[loss]\nkind = hinge\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[task]\ntype = csv\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[sgd]\nschedule = log_over_n\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[bias_scan]\norders = 1,-2\n"), ConfigError);
  EXPECT_THROW(ParseConfig("[experiment]\ntest_fraction = 1\n"), ConfigError);
  EXPECT_THROW(LoadConfig("/nonexistent/iwp.ini"), ConfigError);
}

TEST(ConfigTest, HashIsStableAndSensitive) {
  const ExperimentConfig c;
  EXPECT_EQ(ConfigHash(c), kDefaultHash);
  EXPECT_EQ(ConfigHash(ParseConfig(SerializeConfig(c))), kDefaultHash);
  ExperimentConfig d = c;
  d.sgd.lambda = 5.000000000000001;
  EXPECT_NE(ConfigHash(d), kDefaultHash);
  EXPECT_EQ(ConfigHash(c).size(), 64u);
}

}  // namespace
}  // namespace iwp_cli
