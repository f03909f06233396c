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

#ifndef IWP_RANDOM_H_
#define IWP_RANDOM_H_

#include <cstdint>
#include <random>

namespace iwp {

using Rng = std::mt19937_64;

namespace internal {
inline std::uint64_t SplitMix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace internal

// Seed for the stream owned by record `index` of a release seeded with
// `master`. The master is mixed before the index is folded in, so distinct
// (master, index) pairs do not collide the way master ^ index would
// (releases under seeds s and s' must not share noise streams).
inline std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  return internal::SplitMix64(internal::SplitMix64(master) ^
                              internal::SplitMix64(~index));
}

inline Rng MakeRng(std::uint64_t master, std::uint64_t stream = 0) {
  return Rng(DeriveSeed(master, stream));
}

}  // namespace iwp

#endif  // IWP_RANDOM_H_
