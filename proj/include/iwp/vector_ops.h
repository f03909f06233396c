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

#ifndef IWP_VECTOR_OPS_H_
#define IWP_VECTOR_OPS_H_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "iwp/error.h"

namespace iwp {

using Vector = std::vector<double>;

inline void CheckSameSize(std::span<const double> a, std::span<const double> b,
                          const char* what) {
  if (a.size() != b.size()) {
    Fail(ErrorCode::kDimensionMismatch,
         std::string(what) + ": " + std::to_string(a.size()) + " vs " +
             std::to_string(b.size()));
  }
}

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double SquaredNorm(std::span<const double> a) { return Dot(a, a); }

inline double Norm(std::span<const double> a) {
  return std::sqrt(SquaredNorm(a));
}

// y += alpha * x
inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline double SquaredDistance(std::span<const double> a,
                              std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace iwp

#endif  // IWP_VECTOR_OPS_H_
