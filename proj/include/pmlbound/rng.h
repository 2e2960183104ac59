//
// Copyright 2026 The pmlbound Authors
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

#ifndef PMLBOUND_RNG_H_
#define PMLBOUND_RNG_H_

#include <cstdint>
#include <random>

#include "absl/strings/string_view.h"

namespace pmlbound {

// Seeded 64-bit generator with reductions that do not depend on the standard
// library's distribution implementations, so a seed reproduces the same draws
// on every platform. The engine is std::mt19937_64, whose output sequence is
// fixed by the C++ standard.
class Rng {
 public:
  static constexpr absl::string_view kName = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform01() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Unbiased uniform integer in {0, ..., n - 1}; n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);

  // Draw from Laplace(0, scale) by inverting the CDF.
  double Laplace(double scale);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pmlbound

#endif  // PMLBOUND_RNG_H_
