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

#include "iwp/error.h"

#include <iostream>
#include <mutex>
#include <utility>

namespace iwp {
namespace {

std::mutex& HandlerMutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& Handler() {
  static WarningHandler handler;
  return handler;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "ok";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidBudget: return "invalid-budget";
    case ErrorCode::kInvalidLabel: return "invalid-label";
    case ErrorCode::kNormViolation: return "norm-violation";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kOrderExceeded: return "order-exceeded";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kIoError: return "io-error";
    case ErrorCode::kEmptyDataset: return "empty-dataset";
    case ErrorCode::kBudgetSpent: return "budget-spent";
    case ErrorCode::kModeMismatch: return "mode-mismatch";
    case ErrorCode::kBudgetMismatch: return "budget-mismatch";
    case ErrorCode::kUnknownLabelValue: return "unknown-label-value";
    case ErrorCode::kMissingColumn: return "missing-column";
    case ErrorCode::kInvalidSpec: return "invalid-spec";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(ErrorCodeName(code)) + ": " + message);
}

void SetWarningHandler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  Handler() = std::move(handler);
}

void Warn(std::string_view message) {
  std::lock_guard<std::mutex> lock(HandlerMutex());
  if (Handler()) {
    Handler()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace iwp
