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

#ifndef PMLBOUND_CALIBRATION_H_
#define PMLBOUND_CALIBRATION_H_

#include <optional>

#include "absl/status/statusor.h"
#include "pmlbound/bounds.h"
#include "pmlbound/workload.h"

namespace pmlbound {

struct CalibrationOptions {
  // Bisection stops once the bracket's width is at most tol_rel times its
  // upper end. Must lie in (0, 1e-2].
  double tol_rel = 1e-6;
  int max_iterations = 200;
  // Budgets at or above log(1/alpha) - tol_abs need no noise at all.
  double tol_abs = 1e-12;
  // Points of the geometric grid used to check that the bound is
  // nonincreasing in b across the bracket.
  int monotone_grid_points = 16;
  // Points of the fallback scan used when that check fails.
  int dense_scan_points = 1024;
  // Return FailedPrecondition (NonMonotoneBracket) instead of falling back.
  bool fail_on_non_monotone = false;
  ExactBoundOptions exact;
};

struct CalibrationResult {
  // Smallest Laplace scale whose bound is at most the target; 0 when no noise
  // is needed.
  double b_min = 0.0;
  // Bound value at b_min; absent when b_min == 0.
  std::optional<double> achieved;
  int iterations = 0;
  BoundKind bound_kind = BoundKind::kDp;
  bool monotone_verified = true;
};

// Minimal noise scale b such that bound_kind(W, b) <= eps_target.
//
// kDp is solved in closed form as sensitivity / eps_target. The PML kinds
// return 0 once eps_target reaches log(1/alpha); otherwise the solver brackets
// the root by halving/doubling from sensitivity / eps_target, checks that the
// bound is nonincreasing on a geometric grid over the bracket, and bisects.
// If the grid check fails it scans the bracket densely instead and reports
// monotone_verified = false. Bracket expansion beyond a factor of 2^64 yields
// OutOfRange (BracketFailure). kTrivial does not depend on b and is rejected.
absl::StatusOr<CalibrationResult> MinNoiseForEpsilon(
    const Workload& w, double eps_target,
    const std::optional<PriorClass>& prior, BoundKind bound_kind,
    const CalibrationOptions& options = {});

}  // namespace pmlbound

#endif  // PMLBOUND_CALIBRATION_H_
