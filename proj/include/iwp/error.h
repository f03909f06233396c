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

#ifndef IWP_ERROR_H_
#define IWP_ERROR_H_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace iwp {

// Error categories raised by the core library. The numeric values are the
// ones exposed through the C API (see iwp.h) and must stay stable.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kInvalidBudget = 2,
  kInvalidLabel = 3,
  kNormViolation = 4,
  kDimensionMismatch = 5,
  kOrderExceeded = 6,
  kParseError = 7,
  kIoError = 8,
  kEmptyDataset = 9,
  kBudgetSpent = 10,
  kModeMismatch = 11,
  kBudgetMismatch = 12,
  kUnknownLabelValue = 13,
  kMissingColumn = 14,
  kInvalidSpec = 15,
  kInternal = 99,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

// Non-fatal diagnostics (validity guards, schedule fallbacks, tiny budgets).
// The default handler writes "warning: <message>" to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void SetWarningHandler(WarningHandler handler);
void Warn(std::string_view message);

}  // namespace iwp

#endif  // IWP_ERROR_H_
