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

#ifndef PMLBOUND_LOG_MATH_H_
#define PMLBOUND_LOG_MATH_H_

#include <cmath>
#include <span>

namespace pmlbound {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// log(sum_i exp(args[i])), shifting by the largest argument first. Returns
// -infinity for an empty span or when every argument is -infinity.
double LogSumExp(std::span<const double> args);

// log(sum_i weights[i] * exp(args[i])) for nonnegative weights.
double LogWeightedSumExp(std::span<const double> weights,
                         std::span<const double> args);

}  // namespace pmlbound

#endif  // PMLBOUND_LOG_MATH_H_
