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

#include "pmlbound/log_math.h"

#include <algorithm>
#include <cassert>
#include <limits>

namespace pmlbound {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

double LogSumExp(std::span<const double> args) {
  if (args.empty()) return kNegInf;
  const double shift = *std::max_element(args.begin(), args.end());
  if (shift == kNegInf) return kNegInf;
  CompensatedSum sum;
  for (double a : args) sum.Add(std::exp(a - shift));
  return shift + std::log(sum.Total());
}

double LogWeightedSumExp(std::span<const double> weights,
                         std::span<const double> args) {
  assert(weights.size() == args.size());
  double shift = kNegInf;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (weights[i] > 0) shift = std::max(shift, args[i]);
  }
  if (shift == kNegInf) return kNegInf;
  CompensatedSum sum;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (weights[i] > 0) sum.Add(weights[i] * std::exp(args[i] - shift));
  }
  return shift + std::log(sum.Total());
}

}  // namespace pmlbound
