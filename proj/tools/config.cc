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

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

namespace iwp_cli {
namespace {

namespace pt = boost::property_tree;

// Calls f(section, key, field) for every field, in serialization order.
template <typename Config, typename F>
void VisitFields(Config& c, F&& f) {
  f("task", "type", c.task);

  f("synthetic", "n", c.synthetic.n);
  f("synthetic", "p", c.synthetic.p);
  f("synthetic", "class_separation", c.synthetic.class_separation);
  f("synthetic", "label_balance", c.synthetic.label_balance);
  f("synthetic", "informative", c.synthetic.informative);
  f("synthetic", "seed", c.synthetic.seed);

  f("csv", "path", c.csv.path);
  f("csv", "label_column", c.csv.label_column);
  f("csv", "positive_values", c.csv.positive_values);
  f("csv", "negative_values", c.csv.negative_values);
  f("csv", "feature_columns", c.csv.feature_columns);

  f("budget", "epsilon", c.budget.epsilon);
  f("budget", "feature_share", c.budget.feature_share);
  f("budget", "delta", c.budget.delta);
  f("budget", "norm_bound", c.budget.norm_bound);

  f("loss", "kind", c.loss.kind);
  f("loss", "truncation_order", c.loss.truncation_order);

  f("sgd", "step_size", c.sgd.step_size);
  f("sgd", "schedule", c.sgd.schedule);
  f("sgd", "batch_size", c.sgd.batch_size);
  f("sgd", "radius", c.sgd.radius);
  f("sgd", "lambda", c.sgd.lambda);
  f("sgd", "init_radius", c.sgd.init_radius);
  f("sgd", "eval_every", c.sgd.eval_every);
  f("sgd", "mu", c.sgd.mu);
  f("sgd", "smoothness", c.sgd.smoothness);
  f("sgd", "variance_bound", c.sgd.variance_bound);
  f("sgd", "initial_distance_sq", c.sgd.initial_distance_sq);

  f("experiment", "n_seeds", c.experiment.n_seeds);
  f("experiment", "seed", c.experiment.seed);
  f("experiment", "out_dir", c.experiment.out_dir);
  f("experiment", "test_fraction", c.experiment.test_fraction);

  f("validate", "n_samples", c.validate.n_samples);
  f("validate", "p", c.validate.p);
  f("validate", "n_points", c.validate.n_points);
  f("validate", "theta_radius", c.validate.theta_radius);
  f("validate", "z_threshold", c.validate.z_threshold);

  f("bias_scan", "orders", c.bias_scan.orders);
  f("bias_scan", "variances", c.bias_scan.variances);
  f("bias_scan", "eval_radius", c.bias_scan.eval_radius);
  f("bias_scan", "mc_samples", c.bias_scan.mc_samples);
}

std::string Format(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

template <typename T>
std::string Format(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) {
    return v;
  } else if constexpr (std::is_arithmetic_v<T>) {
    return std::to_string(v);
  } else {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) out += ',';
      out += Format(v[i]);
    }
    return out;
  }
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  if (Trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(Trim(std::string_view(text).substr(
        start, comma == std::string::npos ? std::string::npos
                                          : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
void ParseValue(const std::string& where, const std::string& text, T& out) {
  if constexpr (std::is_same_v<T, std::string>) {
    out = text;
  } else if constexpr (std::is_arithmetic_v<T>) {
    const std::string t = Trim(text);
    const char* end = t.data() + t.size();
    const auto r = std::from_chars(t.data(), end, out);
    if (t.empty() || r.ec != std::errc() || r.ptr != end) {
      throw ConfigError(where + ": cannot parse '" + text + "'");
    }
  } else {
    out.clear();
    for (const std::string& item : SplitList(text)) {
      typename T::value_type v{};
      ParseValue(where, item, v);
      out.push_back(v);
    }
  }
}

void Check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool Finite(double v) { return std::isfinite(v); }

}  // namespace

void ApplyDeskPreset(ExperimentConfig& config) {
  config.synthetic.n = 100000;
  config.experiment.n_seeds = 20;
}

ExperimentConfig ParseConfig(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  ExperimentConfig config;
  std::map<std::string, std::set<std::string>> known;
  VisitFields(config, [&](const char* section, const char* key, auto& field) {
    known[section].insert(key);
    const auto value = tree.get_optional<std::string>(
        pt::ptree::path_type(std::string(section) + "/" + key, '/'));
    if (value) ParseValue(std::string(section) + "." + key, *value, field);
  });
  for (const auto& [section, keys] : tree) {
    const auto it = known.find(section);
    Check(it != known.end(), "config: unknown section [" + section + "]");
    Check(keys.data().empty(),
          "config: key '" + section + "' outside any section");
    for (const auto& [key, value] : keys) {
      Check(it->second.contains(key),
            "config: unknown key '" + key + "' in [" + section + "]");
    }
  }
  ValidateConfig(config);
  return config;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

std::string SerializeConfig(const ExperimentConfig& config) {
  std::ostringstream out;
  std::string current;
  VisitFields(config, [&](const char* section, const char* key,
                          const auto& field) {
    if (current != section) {
      if (!current.empty()) out << '\n';
      out << '[' << section << "]\n";
      current = section;
    }
    out << key << " = " << Format(field) << '\n';
  });
  return out.str();
}

std::string ConfigHash(const ExperimentConfig& config) {
  const std::string text = SerializeConfig(config);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw ConfigError("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 15];
  }
  return hex;
}

void ValidateConfig(const ExperimentConfig& c) {
  Check(c.task == "synthetic" || c.task == "csv",
        "task.type must be synthetic or csv");
  Check(c.synthetic.n > 0, "synthetic.n must be positive");
  Check(c.synthetic.p > 0, "synthetic.p must be positive");
  Check(Finite(c.synthetic.class_separation) &&
            c.synthetic.class_separation >= 0.0,
        "synthetic.class_separation must be nonnegative");
  Check(c.synthetic.label_balance > 0.0 && c.synthetic.label_balance < 1.0,
        "synthetic.label_balance must lie in (0, 1)");
  Check(c.synthetic.informative == -1 ||
            (c.synthetic.informative >= 1 &&
             c.synthetic.informative <= c.synthetic.p),
        "synthetic.informative must be -1 or in [1, p]");
  if (c.task == "csv") {
    Check(!c.csv.path.empty(), "csv.path is required for task csv");
    Check(!c.csv.label_column.empty(), "csv.label_column is required");
    Check(c.csv.positive_values.empty() == c.csv.negative_values.empty(),
          "csv.positive_values and csv.negative_values go together");
  }
  Check(Finite(c.budget.epsilon) && c.budget.epsilon > 0.0,
        "budget.epsilon must be positive");
  Check(c.budget.feature_share > 0.0 && c.budget.feature_share < 1.0,
        "budget.feature_share must lie in (0, 1)");
  Check(c.budget.delta > 0.0 && c.budget.delta < 1.0,
        "budget.delta must lie in (0, 1)");
  Check(Finite(c.budget.norm_bound) && c.budget.norm_bound >= 0.0,
        "budget.norm_bound must be nonnegative (0 selects the default)");
  Check(c.loss.kind == "quadratic" || c.loss.kind == "exponential" ||
            c.loss.kind == "logistic",
        "loss.kind must be quadratic, exponential or logistic");
  Check(c.loss.truncation_order >= -1, "loss.truncation_order must be >= -1");
  Check(Finite(c.sgd.step_size) && c.sgd.step_size > 0.0,
        "sgd.step_size must be positive");
  Check(c.sgd.schedule == "constant" || c.sgd.schedule == "log_over_n",
        "sgd.schedule must be constant or log_over_n");
  Check(c.sgd.batch_size > 0, "sgd.batch_size must be positive");
  Check(Finite(c.sgd.radius) && c.sgd.radius > 0.0,
        "sgd.radius must be positive");
  Check(Finite(c.sgd.lambda) && c.sgd.lambda >= 0.0,
        "sgd.lambda must be nonnegative");
  Check(Finite(c.sgd.init_radius) && c.sgd.init_radius >= 0.0,
        "sgd.init_radius must be nonnegative");
  Check(c.sgd.eval_every >= 0, "sgd.eval_every must be nonnegative");
  if (c.sgd.schedule == "log_over_n") {
    Check(c.sgd.mu > 0.0 && c.sgd.smoothness >= c.sgd.mu,
          "log_over_n needs 0 < sgd.mu <= sgd.smoothness");
    Check(c.sgd.variance_bound > 0.0 && c.sgd.initial_distance_sq > 0.0,
          "log_over_n needs positive variance_bound and "
          "initial_distance_sq");
  }
  Check(c.experiment.n_seeds > 0, "experiment.n_seeds must be positive");
  Check(!c.experiment.out_dir.empty(), "experiment.out_dir is required");
  Check(c.experiment.test_fraction >= 0.0 && c.experiment.test_fraction < 1.0,
        "experiment.test_fraction must lie in [0, 1)");
  Check(c.validate.n_samples >= 2, "validate.n_samples must be >= 2");
  Check(c.validate.p > 0, "validate.p must be positive");
  Check(c.validate.n_points > 0, "validate.n_points must be positive");
  Check(c.validate.theta_radius > 0.0, "validate.theta_radius must be positive");
  Check(c.validate.z_threshold > 0.0, "validate.z_threshold must be positive");
  Check(!c.bias_scan.orders.empty(), "bias_scan.orders must not be empty");
  for (int k : c.bias_scan.orders) {
    Check(k >= 0, "bias_scan.orders must be nonnegative");
  }
  Check(!c.bias_scan.variances.empty(), "bias_scan.variances must not be empty");
  for (double v : c.bias_scan.variances) {
    Check(Finite(v) && v >= 0.0, "bias_scan.variances must be nonnegative");
  }
  Check(c.bias_scan.eval_radius > 0.0, "bias_scan.eval_radius must be positive");
  Check(c.bias_scan.mc_samples >= 2, "bias_scan.mc_samples must be >= 2");
  // Strings must survive the INI round trip.
  VisitFields(c, [](const char* section, const char* key, const auto& field) {
    using T = std::decay_t<decltype(field)>;
    auto ok = [](const std::string& s) {
      return s.find_first_of("\n\r") == std::string::npos && s == Trim(s);
    };
    if constexpr (std::is_same_v<T, std::string>) {
      Check(ok(field), std::string(section) + "." + key +
                           " must be one line without surrounding spaces");
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      for (const std::string& s : field) {
        Check(ok(s) && !s.empty() && s.find(',') == std::string::npos,
              std::string(section) + "." + key +
                  " items must be non-empty and comma-free");
      }
    }
  });
}

}  // namespace iwp_cli
