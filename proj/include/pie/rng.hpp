//
// Copyright 2026 The piebench Authors
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
//

#ifndef PIE_RNG_HPP_
#define PIE_RNG_HPP_

#include <cstdint>
#include <string_view>

#include "pie/core.hpp"

namespace pie {

// SplitMix64 (Steele, Lea & Flood 2014). Chosen over std::mt19937 because
// its output is fully specified by this header alone: identical sequences on
// every platform and standard library, which the reproducibility guarantees
// of the generator and the defenses depend on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += UINT64_C(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound); bound must be > 0. Uses rejection sampling so the
  // distribution is exact.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  int next_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(
                    next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

// Derives a child seed from a parent seed and an index or label, so that
// per-profile streams are independent of each other and of draw order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (UINT64_C(0x9E3779B97F4A7C15) * (index + 1)));
  return mix.next();
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  return derive_seed(seed, fnv1a64(label));
}

}  // namespace pie

#endif  // PIE_RNG_HPP_
