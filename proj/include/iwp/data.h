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

// Datasets: the synthetic generator, CSV ingestion with scaling into the
// feature norm bound, splitting, and the one-shot release with its manifest.

#ifndef IWP_DATA_H_
#define IWP_DATA_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "iwp/mechanisms.h"
#include "iwp/vector_ops.h"

namespace iwp {

struct DatasetSpec {
  std::int64_t n = 1000;
  int p = 2;
  // Cluster centres sit at +-class_separation * u for a random unit u.
  double class_separation = 1.0;
  // P(y = +1).
  double label_balance = 0.5;
  // Features beyond this count are noisy linear combinations of the
  // informative ones. -1 means all p features are informative.
  int informative = -1;
  std::uint64_t seed = 0;
};

// Gaussian clusters (identity covariance) around +-separation * u, then one
// global rescaling so every coordinate lies in [-1, 1]. Record ids are the
// row indices. Throws kInvalidSpec.
std::vector<RawRecord> GenerateSynthetic(const DatasetSpec& spec);

enum class ColumnRole { kFeature, kLabel, kIgnore };

struct ColumnSpec {
  std::string name;
  ColumnRole role = ColumnRole::kFeature;
};

struct ColumnSchema {
  // Columns not listed here default to `default_role`.
  std::vector<ColumnSpec> columns;
  ColumnRole default_role = ColumnRole::kIgnore;
  // Raw label text -> +-1. Empty means the label column is numeric and used
  // as is (classification then requires +-1 values).
  std::map<std::string, double> label_mapping;
  LabelMode mode = LabelMode::kBinary;
};

struct ColumnScaling {
  std::string name;
  double min = 0.0;
  double max = 0.0;
};

struct IngestResult {
  std::vector<RawRecord> records;
  std::vector<ColumnScaling> scaling;  // per feature column, in output order
  double row_scale = 1.0;              // global factor applied after min-max
  double norm_bound = 1.0;
};

// Parses a header-first comma-separated file, maps labels, rescales every
// feature column to [-1, 1] by its min and max (a constant column becomes
// 0), then scales all rows by one factor and clips the few that rounding
// leaves above norm_bound. Errors: kIoError, kParseError (with line number),
// kUnknownLabelValue, kMissingColumn.
IngestResult IngestCsv(const std::string& path, const ColumnSchema& schema,
                       double norm_bound);
IngestResult IngestCsvText(std::string_view text, const ColumnSchema& schema,
                           double norm_bound);

struct SplitResult {
  std::vector<RawRecord> train;
  std::vector<RawRecord> test;
};

// Seeded shuffle; the test part has floor(f n) records.
SplitResult Split(const std::vector<RawRecord>& records, double test_fraction,
                  std::uint64_t seed);

struct ReleaseManifest {
  double epsilon_x = 0.0;
  double epsilon_y = 0.0;
  double delta = 0.0;
  double delta_x = 0.0;
  double feature_norm_bound = 0.0;
  double label_norm_bound = 0.0;
  LabelMode label_mode = LabelMode::kBinary;
  double sigma_squared = 0.0;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  int p = 0;
  // How feature_norm_bound was chosen, e.g. "box-sqrt-p" or "l2".
  std::string norm_bound_source = "l2";
  std::string timestamp;  // UTC, ISO 8601

  // The budget the release was made under.
  PrivacyBudget Budget() const;
  // True when `budget` has the same epsilons, deltas and bounds.
  bool Matches(const PrivacyBudget& budget) const;
};

struct ReleasedDataset {
  ReleaseManifest manifest;
  std::vector<LdpRecord> records;
};

// Releases every record once under a fresh account. Record i draws its noise
// from a stream seeded with DeriveSeed(seed, i).
ReleasedDataset ReleaseDataset(const std::vector<RawRecord>& train,
                               const PrivacyBudget& budget, std::uint64_t seed);
// Same, charging an existing account; releasing a record the account has
// already seen throws kBudgetSpent.
ReleasedDataset ReleaseDataset(const std::vector<RawRecord>& train,
                               BudgetAccount& account, std::uint64_t seed);

// Clean ridge solution of mean (theta^T x - y)^2 / 2 + lambda ||theta||^2 / 2.
Vector RidgeSolution(const std::vector<RawRecord>& records, double lambda);

// Treats released records as clean ones (for the naive noisy baseline).
std::vector<RawRecord> AsRawRecords(const std::vector<LdpRecord>& records);

// File formats. Numbers are written in shortest round-trip form, so reading
// a written file returns bit-identical values. Lines starting with '#' are
// comments; `comments` are written (each prefixed by "# ") before the header.
void WriteRawCsv(std::ostream& out, const std::vector<RawRecord>& records,
                 const std::vector<std::string>& comments = {});
std::vector<RawRecord> ReadRawCsv(std::istream& in);

// The manifest goes on the first line as "# manifest key=value ...".
void WriteReleasedCsv(std::ostream& out, const ReleasedDataset& data,
                      const std::vector<std::string>& comments = {});
ReleasedDataset ReadReleasedCsv(std::istream& in);

void WriteRawCsvFile(const std::string& path,
                     const std::vector<RawRecord>& records,
                     const std::vector<std::string>& comments = {});
std::vector<RawRecord> ReadRawCsvFile(const std::string& path);
void WriteReleasedCsvFile(const std::string& path, const ReleasedDataset& data,
                          const std::vector<std::string>& comments = {});
ReleasedDataset ReadReleasedCsvFile(const std::string& path);

std::string FormatDouble(double value);
double ParseDouble(std::string_view text, std::int64_t line);

}  // namespace iwp

#endif  // IWP_DATA_H_
