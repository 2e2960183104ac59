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

#include "pmlbound/calibration.h"

#include <cmath>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace pmlbound {
namespace {

constexpr double kMonotoneSlack = 1e-12;
// 2^64: the furthest the bracket may move from the initial guess.
constexpr double kMaxExpansion = 18446744073709551616.0;

std::vector<double> GeometricGrid(double lo, double hi, int points) {
  std::vector<double> grid(points);
  const double ratio = std::log(hi / lo);
  for (int i = 0; i < points; ++i) {
    grid[i] = lo * std::exp(ratio * i / (points - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace

absl::StatusOr<CalibrationResult> MinNoiseForEpsilon(
    const Workload& w, double eps_target,
    const std::optional<PriorClass>& prior, BoundKind bound_kind,
    const CalibrationOptions& options) {
  if (!(eps_target > 0) || !std::isfinite(eps_target)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "target epsilon must be positive and finite, got ", eps_target));
  }
  if (!(options.tol_rel > 0) || options.tol_rel > 1e-2) {
    return absl::InvalidArgumentError(
        absl::StrCat("tol_rel must lie in (0, 1e-2], got ", options.tol_rel));
  }
  if (options.monotone_grid_points < 2 || options.dense_scan_points < 2) {
    return absl::InvalidArgumentError("scan grids need at least 2 points");
  }
  if (bound_kind == BoundKind::kTrivial) {
    return absl::InvalidArgumentError(
        "the trivial bound does not depend on the noise scale");
  }

  CalibrationResult result;
  result.bound_kind = bound_kind;
  const double sensitivity = SensitivityL1(w).value;

  if (bound_kind == BoundKind::kDp) {
    if (prior.has_value()) {
      return absl::InvalidArgumentError("dp calibration takes no prior class");
    }
    if (sensitivity > 0) {
      result.b_min = sensitivity / eps_target;
      result.achieved = sensitivity / result.b_min;
    }
    return result;
  }

  if (!prior.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat(BoundKindName(bound_kind), " requires a prior class"));
  }
  if (prior->num_classes() != w.num_classes()) {
    return absl::InvalidArgumentError(
        absl::StrCat("prior has k=", prior->num_classes(), " but workload has ",
                     w.num_classes(), " classes"));
  }
  // Every admissible budget at or above log(1/alpha) holds without noise, and
  // workloads with identical columns leak nothing.
  if (eps_target >= -std::log(prior->alpha()) - options.tol_abs ||
      sensitivity == 0) {
    return result;
  }

  absl::Status error = absl::OkStatus();
  auto bound_at = [&](double b) -> double {
    auto r = EvaluateBound(bound_kind, w, b, prior, options.exact);
    if (!r.ok()) {
      if (error.ok()) error = r.status();
      return 0.0;
    }
    return r->value;
  };

  // Bracket: bound(lo) > eps_target >= bound(hi).
  const double guess = sensitivity / eps_target;
  double hi = guess;
  while (bound_at(hi) > eps_target) {
    if (!error.ok()) return error;
    hi *= 2;
    ++result.iterations;
    if (hi > guess * kMaxExpansion) {
      return absl::OutOfRangeError(absl::StrCat(
          "BracketFailure: bound stays above ", eps_target, " up to b = ", hi));
    }
  }
  double lo = hi / 2;
  while (bound_at(lo) <= eps_target) {
    if (!error.ok()) return error;
    hi = lo;
    lo /= 2;
    ++result.iterations;
    if (lo < guess / kMaxExpansion) {
      return absl::OutOfRangeError(
          absl::StrCat("BracketFailure: bound stays below ", eps_target,
                       " down to b = ", lo));
    }
  }
  if (!error.ok()) return error;

  const std::vector<double> grid =
      GeometricGrid(lo, hi, options.monotone_grid_points);
  double previous = bound_at(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double current = bound_at(grid[i]);
    if (current > previous + kMonotoneSlack) result.monotone_verified = false;
    previous = current;
  }
  if (!error.ok()) return error;

  if (!result.monotone_verified) {
    if (options.fail_on_non_monotone) {
      return absl::FailedPreconditionError(
          absl::StrCat("NonMonotoneBracket: bound increases somewhere in [", lo,
                       ", ", hi, "]"));
    }
    // Narrow the bracket to the first scanned crossing.
    const std::vector<double> scan =
        GeometricGrid(lo, hi, options.dense_scan_points);
    for (std::size_t i = 1; i < scan.size(); ++i) {
      if (bound_at(scan[i]) <= eps_target) {
        lo = scan[i - 1];
        hi = scan[i];
        break;
      }
    }
    if (!error.ok()) return error;
  }

  int steps = 0;
  while (hi - lo > options.tol_rel * hi && steps < options.max_iterations) {
    const double mid = 0.5 * (lo + hi);
    if (bound_at(mid) > eps_target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++steps;
  }
  if (!error.ok()) return error;
  result.iterations += steps;
  result.b_min = hi;
  result.achieved = bound_at(hi);
  if (!error.ok()) return error;
  return result;
}

}  // namespace pmlbound
