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

#include "iwp/data.h"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "iwp/error.h"
#include "iwp/random.h"

namespace iwp {
namespace {

constexpr std::string_view kManifestPrefix = "# manifest ";
constexpr std::string_view kManifestFormat = "iwp-release-1";

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

[[noreturn]] void ParseFail(std::int64_t line, const std::string& message) {
  Fail(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + message);
}

bool IsBlank(std::string_view line) { return Trim(line).empty(); }

// Scales x into the ball of radius `bound`; the loop absorbs the rare case
// where rounding leaves the scaled norm one ulp above the bound.
void ClipToBall(Vector& x, double bound) {
  double norm = Norm(x);
  while (norm > bound) {
    const double f = std::nextafter(bound / norm, 0.0);
    for (double& v : x) v *= f;
    norm = Norm(x);
  }
}

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CsvTable {
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::int64_t> line_numbers;
};

CsvTable ReadTable(std::istream& in) {
  CsvTable t;
  std::string line;
  std::int64_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      t.comments.push_back(line.substr(1));
      continue;
    }
    if (IsBlank(line)) continue;
    std::vector<std::string_view> fields = SplitFields(line);
    if (!have_header) {
      for (std::string_view f : fields) t.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      ParseFail(line_no, "expected " + std::to_string(t.header.size()) +
                             " fields, found " + std::to_string(fields.size()));
    }
    t.rows.emplace_back(fields.begin(), fields.end());
    t.line_numbers.push_back(line_no);
  }
  if (in.bad()) Fail(ErrorCode::kIoError, "read failed");
  if (!have_header) Fail(ErrorCode::kParseError, "missing header row");
  return t;
}

void CheckFeatureHeader(const CsvTable& t, std::size_t first, int p) {
  for (int j = 0; j < p; ++j) {
    if (t.header[first + j] != "x_" + std::to_string(j + 1)) {
      Fail(ErrorCode::kParseError,
           "unexpected column '" + t.header[first + j] + "'");
    }
  }
  if (t.header.back() != "y") {
    Fail(ErrorCode::kParseError, "last column must be 'y'");
  }
}

std::string LabelModeName(LabelMode mode) {
  return mode == LabelMode::kBinary ? "binary" : "continuous";
}

std::string ManifestLine(const ReleaseManifest& m) {
  std::ostringstream os;
  os << kManifestPrefix << "format=" << kManifestFormat
     << " epsilon_x=" << FormatDouble(m.epsilon_x)
     << " epsilon_y=" << FormatDouble(m.epsilon_y)
     << " delta=" << FormatDouble(m.delta)
     << " delta_x=" << FormatDouble(m.delta_x)
     << " feature_norm_bound=" << FormatDouble(m.feature_norm_bound)
     << " label_norm_bound=" << FormatDouble(m.label_norm_bound)
     << " label_mode=" << LabelModeName(m.label_mode)
     << " sigma_squared=" << FormatDouble(m.sigma_squared) << " seed=" << m.seed
     << " n=" << m.n << " p=" << m.p
     << " norm_bound_source=" << m.norm_bound_source
     << " timestamp=" << m.timestamp;
  return os.str();
}

ReleaseManifest ParseManifest(std::string_view body) {
  std::unordered_map<std::string, std::string> kv;
  std::istringstream is{std::string(body)};
  std::string token;
  while (is >> token) {
    const std::size_t eq = token.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kParseError, "malformed manifest entry '" + token + "'");
    }
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) {
      Fail(ErrorCode::kParseError, "manifest is missing '" + key + "'");
    }
    return it->second;
  };
  if (get("format") != kManifestFormat) {
    Fail(ErrorCode::kParseError, "unsupported manifest format");
  }
  ReleaseManifest m;
  m.epsilon_x = ParseDouble(get("epsilon_x"), 1);
  m.epsilon_y = ParseDouble(get("epsilon_y"), 1);
  m.delta = ParseDouble(get("delta"), 1);
  m.delta_x = ParseDouble(get("delta_x"), 1);
  m.feature_norm_bound = ParseDouble(get("feature_norm_bound"), 1);
  m.label_norm_bound = ParseDouble(get("label_norm_bound"), 1);
  const std::string& mode = get("label_mode");
  if (mode == "binary") {
    m.label_mode = LabelMode::kBinary;
  } else if (mode == "continuous") {
    m.label_mode = LabelMode::kContinuous;
  } else {
    Fail(ErrorCode::kParseError, "unknown label_mode '" + mode + "'");
  }
  m.sigma_squared = ParseDouble(get("sigma_squared"), 1);
  m.seed = std::stoull(get("seed"));
  m.n = std::stoll(get("n"));
  m.p = std::stoi(get("p"));
  m.norm_bound_source = get("norm_bound_source");
  m.timestamp = get("timestamp");
  return m;
}

int CommonDimension(const std::vector<RawRecord>& records) {
  if (records.empty()) Fail(ErrorCode::kEmptyDataset, "no records");
  const std::size_t p = records.front().features.size();
  for (const RawRecord& r : records) {
    if (r.features.size() != p) {
      Fail(ErrorCode::kDimensionMismatch, "records have differing dimensions");
    }
  }
  return static_cast<int>(p);
}

std::ofstream OpenForWrite(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
  return out;
}

std::ifstream OpenForRead(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open '" + path + "'");
  return in;
}

void FinishWrite(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) Fail(ErrorCode::kIoError, "write to '" + path + "' failed");
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::string_view text, std::int64_t line) {
  text = Trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    ParseFail(line, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<RawRecord> GenerateSynthetic(const DatasetSpec& spec) {
  if (spec.n < 1 || spec.p < 1) {
    Fail(ErrorCode::kInvalidSpec, "n and p must be positive");
  }
  if (!(spec.class_separation >= 0.0) || !std::isfinite(spec.class_separation)) {
    Fail(ErrorCode::kInvalidSpec, "class_separation must be >= 0");
  }
  if (!(spec.label_balance > 0.0 && spec.label_balance < 1.0)) {
    Fail(ErrorCode::kInvalidSpec, "label_balance must lie in (0, 1)");
  }
  const int informative = spec.informative < 0 ? spec.p : spec.informative;
  if (informative < 1 || informative > spec.p) {
    Fail(ErrorCode::kInvalidSpec, "informative must lie in [1, p]");
  }

  Rng rng = MakeRng(spec.seed, 0);
  std::normal_distribution<double> normal;
  std::bernoulli_distribution positive(spec.label_balance);

  Vector u(informative);
  double norm = 0.0;
  while (norm < 1e-12) {
    for (double& v : u) v = normal(rng);
    norm = Norm(u);
  }
  for (double& v : u) v /= norm;

  const int redundant = spec.p - informative;
  std::vector<Vector> mix(redundant, Vector(informative));
  for (Vector& row : mix) {
    for (double& v : row) v = normal(rng) / std::sqrt(informative);
  }

  std::vector<RawRecord> records(static_cast<std::size_t>(spec.n));
  double max_abs = 0.0;
  for (std::int64_t i = 0; i < spec.n; ++i) {
    RawRecord& r = records[i];
    r.id = static_cast<std::uint64_t>(i);
    r.label = positive(rng) ? 1.0 : -1.0;
    r.features.resize(spec.p);
    for (int j = 0; j < informative; ++j) {
      r.features[j] = r.label * spec.class_separation * u[j] + normal(rng);
    }
    for (int j = 0; j < redundant; ++j) {
      r.features[informative + j] =
          Dot(mix[j], std::span<const double>(r.features).first(informative)) +
          0.1 * normal(rng);
    }
    for (double v : r.features) max_abs = std::max(max_abs, std::abs(v));
  }
  if (max_abs > 0.0) {
    for (RawRecord& r : records) {
      for (double& v : r.features) v /= max_abs;
    }
  }
  return records;
}

IngestResult IngestCsv(const std::string& path, const ColumnSchema& schema,
                       double norm_bound) {
  std::ifstream in = OpenForRead(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return IngestCsvText(buf.str(), schema, norm_bound);
}

IngestResult IngestCsvText(std::string_view text, const ColumnSchema& schema,
                           double norm_bound) {
  if (!(norm_bound > 0.0) || !std::isfinite(norm_bound)) {
    Fail(ErrorCode::kInvalidArgument, "norm_bound must be positive");
  }
  std::istringstream in{std::string(text)};
  const CsvTable t = ReadTable(in);

  std::vector<ColumnRole> roles(t.header.size(), schema.default_role);
  for (const ColumnSpec& c : schema.columns) {
    auto it = std::find(t.header.begin(), t.header.end(), c.name);
    if (it == t.header.end()) {
      Fail(ErrorCode::kMissingColumn, "column '" + c.name + "' not in header");
    }
    roles[it - t.header.begin()] = c.role;
  }
  std::vector<std::size_t> features;
  std::size_t label_col = 0;
  int n_labels = 0;
  for (std::size_t j = 0; j < roles.size(); ++j) {
    if (roles[j] == ColumnRole::kFeature) features.push_back(j);
    if (roles[j] == ColumnRole::kLabel) {
      label_col = j;
      ++n_labels;
    }
  }
  if (n_labels == 0) Fail(ErrorCode::kMissingColumn, "no label column");
  if (n_labels > 1) Fail(ErrorCode::kInvalidSpec, "more than one label column");
  if (features.empty()) Fail(ErrorCode::kMissingColumn, "no feature columns");
  if (t.rows.empty()) Fail(ErrorCode::kEmptyDataset, "no data rows");

  IngestResult result;
  result.norm_bound = norm_bound;
  result.records.resize(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::vector<std::string>& row = t.rows[i];
    const std::int64_t line = t.line_numbers[i];
    RawRecord& r = result.records[i];
    r.id = i;
    r.features.resize(features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
      r.features[j] = ParseDouble(row[features[j]], line);
    }
    const std::string& raw_label = row[label_col];
    if (!schema.label_mapping.empty()) {
      auto it = schema.label_mapping.find(raw_label);
      if (it == schema.label_mapping.end()) {
        Fail(ErrorCode::kUnknownLabelValue,
             "line " + std::to_string(line) + ": label '" + raw_label +
                 "' has no mapping");
      }
      r.label = it->second;
    } else {
      r.label = ParseDouble(raw_label, line);
    }
    if (schema.mode == LabelMode::kBinary && r.label != 1.0 &&
        r.label != -1.0) {
      Fail(ErrorCode::kUnknownLabelValue,
           "line " + std::to_string(line) + ": label '" + raw_label +
               "' is not +1 or -1");
    }
  }

  for (std::size_t j = 0; j < features.size(); ++j) {
    ColumnScaling s{t.header[features[j]], result.records[0].features[j],
                    result.records[0].features[j]};
    for (const RawRecord& r : result.records) {
      s.min = std::min(s.min, r.features[j]);
      s.max = std::max(s.max, r.features[j]);
    }
    const double range = s.max - s.min;
    for (RawRecord& r : result.records) {
      double& v = r.features[j];
      v = range > 0.0 ? std::clamp(2.0 * (v - s.min) / range - 1.0, -1.0, 1.0)
                      : 0.0;
    }
    result.scaling.push_back(s);
  }

  double max_norm = 0.0;
  for (const RawRecord& r : result.records) {
    max_norm = std::max(max_norm, Norm(r.features));
  }
  result.row_scale = max_norm > norm_bound ? norm_bound / max_norm : 1.0;
  for (RawRecord& r : result.records) {
    for (double& v : r.features) v *= result.row_scale;
    ClipToBall(r.features, norm_bound);
  }
  return result;
}

SplitResult Split(const std::vector<RawRecord>& records, double test_fraction,
                  std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "test_fraction must lie in [0, 1)");
  }
  const std::size_t n = records.size();
  const auto n_test = static_cast<std::size_t>(
      std::floor(test_fraction * static_cast<double>(n) + 1e-9));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = MakeRng(seed, 1);
  std::shuffle(order.begin(), order.end(), rng);
  SplitResult out;
  out.test.reserve(n_test);
  out.train.reserve(n - n_test);
  for (std::size_t i = 0; i < n; ++i) {
    (i < n_test ? out.test : out.train).push_back(records[order[i]]);
  }
  return out;
}

PrivacyBudget ReleaseManifest::Budget() const {
  if (label_mode == LabelMode::kBinary) {
    return PrivacyBudget::Create(epsilon_x, epsilon_y, delta,
                                 feature_norm_bound);
  }
  return PrivacyBudget::CreateRegression(epsilon_x, epsilon_y, delta,
                                         feature_norm_bound, label_norm_bound,
                                         delta_x / delta);
}

bool ReleaseManifest::Matches(const PrivacyBudget& budget) const {
  return budget.epsilon_x() == epsilon_x && budget.epsilon_y() == epsilon_y &&
         budget.delta() == delta && budget.delta_x() == delta_x &&
         budget.feature_norm_bound() == feature_norm_bound &&
         budget.label_norm_bound() == label_norm_bound &&
         budget.label_mode() == label_mode;
}

ReleasedDataset ReleaseDataset(const std::vector<RawRecord>& train,
                               const PrivacyBudget& budget,
                               std::uint64_t seed) {
  BudgetAccount account(budget);
  return ReleaseDataset(train, account, seed);
}

ReleasedDataset ReleaseDataset(const std::vector<RawRecord>& train,
                               BudgetAccount& account, std::uint64_t seed) {
  const int p = CommonDimension(train);
  const PrivacyBudget& b = account.budget();
  ReleasedDataset out;
  out.manifest.epsilon_x = b.epsilon_x();
  out.manifest.epsilon_y = b.epsilon_y();
  out.manifest.delta = b.delta();
  out.manifest.delta_x = b.delta_x();
  out.manifest.feature_norm_bound = b.feature_norm_bound();
  out.manifest.label_norm_bound = b.label_norm_bound();
  out.manifest.label_mode = b.label_mode();
  out.manifest.sigma_squared = b.sigma_squared();
  out.manifest.seed = seed;
  out.manifest.n = static_cast<std::int64_t>(train.size());
  out.manifest.p = p;
  out.manifest.timestamp = UtcTimestamp();
  out.records.reserve(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    Rng rng(DeriveSeed(seed, i));
    out.records.push_back(LdpRelease(train[i], account, rng));
  }
  return out;
}

Vector RidgeSolution(const std::vector<RawRecord>& records, double lambda) {
  const int p = CommonDimension(records);
  if (!(lambda >= 0.0)) Fail(ErrorCode::kInvalidArgument, "lambda must be >= 0");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(p);
  for (const RawRecord& r : records) {
    const Eigen::Map<const Eigen::VectorXd> x(r.features.data(), p);
    a.selfadjointView<Eigen::Lower>().rankUpdate(x);
    b += r.label * x;
  }
  const double n = static_cast<double>(records.size());
  Eigen::MatrixXd gram = a.selfadjointView<Eigen::Lower>();
  gram /= n;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd theta =
      gram.completeOrthogonalDecomposition().solve(b / n);
  return Vector(theta.data(), theta.data() + p);
}

std::vector<RawRecord> AsRawRecords(const std::vector<LdpRecord>& records) {
  std::vector<RawRecord> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i] = {records[i].features_noisy, records[i].label_noisy, i};
  }
  return out;
}

void WriteRawCsv(std::ostream& out, const std::vector<RawRecord>& records,
                 const std::vector<std::string>& comments) {
  const int p = CommonDimension(records);
  for (const std::string& c : comments) out << "# " << c << '\n';
  out << "id";
  for (int j = 1; j <= p; ++j) out << ",x_" << j;
  out << ",y\n";
  for (const RawRecord& r : records) {
    out << r.id;
    for (double v : r.features) out << ',' << FormatDouble(v);
    out << ',' << FormatDouble(r.label) << '\n';
  }
}

std::vector<RawRecord> ReadRawCsv(std::istream& in) {
  const CsvTable t = ReadTable(in);
  if (t.header.size() < 3 || t.header.front() != "id") {
    Fail(ErrorCode::kParseError, "raw dataset header must be id,x_1..x_p,y");
  }
  const int p = static_cast<int>(t.header.size()) - 2;
  CheckFeatureHeader(t, 1, p);
  std::vector<RawRecord> out(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::int64_t line = t.line_numbers[i];
    const std::vector<std::string>& row = t.rows[i];
    std::uint64_t id = 0;
    const auto res =
        std::from_chars(row[0].data(), row[0].data() + row[0].size(), id);
    if (res.ec != std::errc() || res.ptr != row[0].data() + row[0].size()) {
      ParseFail(line, "bad id '" + row[0] + "'");
    }
    out[i].id = id;
    out[i].features.resize(p);
    for (int j = 0; j < p; ++j) out[i].features[j] = ParseDouble(row[1 + j], line);
    out[i].label = ParseDouble(row.back(), line);
  }
  return out;
}

void WriteReleasedCsv(std::ostream& out, const ReleasedDataset& data,
                      const std::vector<std::string>& comments) {
  out << ManifestLine(data.manifest) << '\n';
  for (const std::string& c : comments) out << "# " << c << '\n';
  const int p = data.manifest.p;
  for (int j = 1; j <= p; ++j) out << (j > 1 ? "," : "") << "x_" << j;
  out << ",y\n";
  for (const LdpRecord& r : data.records) {
    for (std::size_t j = 0; j < r.features_noisy.size(); ++j) {
      out << (j > 0 ? "," : "") << FormatDouble(r.features_noisy[j]);
    }
    out << ',' << FormatDouble(r.label_noisy) << '\n';
  }
}

ReleasedDataset ReadReleasedCsv(std::istream& in) {
  const CsvTable t = ReadTable(in);
  ReleasedDataset out;
  bool found = false;
  const std::string_view prefix = kManifestPrefix.substr(1);  // drop '#'
  for (const std::string& c : t.comments) {
    if (std::string_view(c).starts_with(prefix)) {
      out.manifest = ParseManifest(std::string_view(c).substr(prefix.size()));
      found = true;
      break;
    }
  }
  if (!found) Fail(ErrorCode::kParseError, "released file has no manifest");
  const int p = static_cast<int>(t.header.size()) - 1;
  if (p < 1 || p != out.manifest.p) {
    Fail(ErrorCode::kParseError, "column count disagrees with manifest p");
  }
  CheckFeatureHeader(t, 0, p);
  if (static_cast<std::int64_t>(t.rows.size()) != out.manifest.n) {
    Fail(ErrorCode::kParseError, "row count disagrees with manifest n");
  }
  out.records.resize(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const std::int64_t line = t.line_numbers[i];
    out.records[i].features_noisy.resize(p);
    for (int j = 0; j < p; ++j) {
      out.records[i].features_noisy[j] = ParseDouble(t.rows[i][j], line);
    }
    out.records[i].label_noisy = ParseDouble(t.rows[i][p], line);
  }
  return out;
}

void WriteRawCsvFile(const std::string& path,
                     const std::vector<RawRecord>& records,
                     const std::vector<std::string>& comments) {
  std::ofstream out = OpenForWrite(path);
  WriteRawCsv(out, records, comments);
  FinishWrite(out, path);
}

std::vector<RawRecord> ReadRawCsvFile(const std::string& path) {
  std::ifstream in = OpenForRead(path);
  return ReadRawCsv(in);
}

void WriteReleasedCsvFile(const std::string& path, const ReleasedDataset& data,
                          const std::vector<std::string>& comments) {
  std::ofstream out = OpenForWrite(path);
  WriteReleasedCsv(out, data, comments);
  FinishWrite(out, path);
}

ReleasedDataset ReadReleasedCsvFile(const std::string& path) {
  std::ifstream in = OpenForRead(path);
  return ReadReleasedCsv(in);
}

}  // namespace iwp
