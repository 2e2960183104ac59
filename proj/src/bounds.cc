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

#include "pmlbound/bounds.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pmlbound/log_math.h"

namespace pmlbound {
namespace {

// Candidates within this relative distance of the incumbent count as ties.
constexpr double kTieRelTol = 1e-13;

// Incremental coefficient updates are replaced by a fresh recomputation
// whenever the Gray-code step toggles a row at or above this index, which
// bounds rounding drift to 2^kRefreshBit consecutive updates.
constexpr int kRefreshBit = 10;

// Rounding slack on the alpha <= 1/k check, so that computed grid endpoints
// such as exp(log(1/k)) are accepted.
constexpr double kAlphaSlack = 1e-12;

bool Exceeds(double candidate, double incumbent) {
  return candidate >
         incumbent + kTieRelTol * std::max(1.0, std::fabs(incumbent));
}

bool Ties(double candidate, double incumbent) {
  return !Exceeds(candidate, incumbent) && !Exceeds(incumbent, candidate);
}

absl::Status CheckScale(double b) {
  if (!(b > 0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise scale b must be positive and finite, got ", b));
  }
  return absl::OkStatus();
}

absl::Status CheckPriorMatches(const Workload& w, const PriorClass& prior) {
  if (prior.num_classes() != w.num_classes()) {
    return absl::InvalidArgumentError(
        absl::StrCat("prior has k=", prior.num_classes(), " but workload has ",
                     w.num_classes(), " classes"));
  }
  return absl::OkStatus();
}

void FillCoefficients(const Workload& w, std::uint64_t mask,
                      std::vector<double>& c) {
  std::fill(c.begin(), c.end(), 0.0);
  for (int l = 0; l < w.num_queries(); ++l) {
    const double sign = (mask >> l) & 1 ? 1.0 : -1.0;
    const auto row = w.query(l);
    for (int j = 0; j < w.num_classes(); ++j) c[j] += sign * row[j];
  }
}

}  // namespace

absl::StatusOr<PriorClass> PriorClass::Create(double alpha, int k) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("prior class needs k >= 2, got ", k));
  }
  if (!(alpha > 0) || alpha * k > 1.0 + kAlphaSlack) {
    return absl::InvalidArgumentError(absl::StrCat(
        "alpha must lie in (0, 1/k] = (0, ", 1.0 / k, "], got ", alpha));
  }
  return PriorClass(alpha, k);
}

double PriorClass::excess_mass() const {
  return std::max(0.0, 1.0 - k_ * alpha_);
}

RowSubset RowSubset::FromMask(std::uint64_t mask, int num_rows) {
  RowSubset subset(num_rows);
  for (int l = 0; l < num_rows && l < 64; ++l) {
    if ((mask >> l) & 1) subset.insert(l);
  }
  return subset;
}

RowSubset RowSubset::All(int num_rows) {
  RowSubset subset(num_rows);
  for (int l = 0; l < num_rows; ++l) subset.insert(l);
  return subset;
}

std::vector<int> RowSubset::rows() const {
  std::vector<int> out;
  for (int l = 0; l < universe_size(); ++l) {
    if (members_[l]) out.push_back(l);
  }
  return out;
}

std::optional<std::uint64_t> RowSubset::mask() const {
  if (universe_size() > 64) return std::nullopt;
  std::uint64_t mask = 0;
  for (int l = 0; l < universe_size(); ++l) {
    if (members_[l]) mask |= std::uint64_t{1} << l;
  }
  return mask;
}

absl::string_view BoundKindName(BoundKind kind) {
  switch (kind) {
    case BoundKind::kExactPml:
      return "exact_pml";
    case BoundKind::kSimplifiedPml:
      return "simplified_pml";
    case BoundKind::kDp:
      return "dp";
    case BoundKind::kTrivial:
      return "trivial";
  }
  return "unknown";
}

absl::StatusOr<BoundKind> ParseBoundKind(absl::string_view name) {
  for (BoundKind kind : {BoundKind::kExactPml, BoundKind::kSimplifiedPml,
                         BoundKind::kDp, BoundKind::kTrivial}) {
    if (BoundKindName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown bound kind '", name,
                   "' (expected exact_pml, simplified_pml, dp or trivial)"));
}

std::string WitnessString(const BoundResult& result) {
  if (const auto* subset = std::get_if<SubsetWitness>(&result.witness)) {
    return absl::StrCat(subset->mask);
  }
  if (const auto* pair = std::get_if<ColumnPair>(&result.witness)) {
    return absl::StrCat(pair->j1, ":", pair->j2);
  }
  return "";
}

absl::StatusOr<double> SubsetCoefficient(const Workload& w,
                                         const RowSubset& subset, int cls) {
  if (cls < 0 || cls >= w.num_classes()) {
    return absl::OutOfRangeError(absl::StrCat(
        "class index ", cls, " out of range for k=", w.num_classes()));
  }
  auto all = SubsetCoefficients(w, subset);
  if (!all.ok()) return all.status();
  return (*all)[cls];
}

absl::StatusOr<std::vector<double>> SubsetCoefficients(
    const Workload& w, const RowSubset& subset) {
  if (subset.universe_size() != w.num_queries()) {
    return absl::OutOfRangeError(
        absl::StrCat("row subset covers ", subset.universe_size(),
                     " rows, workload has ", w.num_queries()));
  }
  std::vector<double> c(w.num_classes(), 0.0);
  for (int l = 0; l < w.num_queries(); ++l) {
    const double sign = subset.contains(l) ? 1.0 : -1.0;
    const auto row = w.query(l);
    for (int j = 0; j < w.num_classes(); ++j) c[j] += sign * row[j];
  }
  return c;
}

SubsetTerm EvaluateSubsetTerm(std::span<const double> coefficients, double b,
                              const PriorClass& prior) {
  SubsetTerm term;
  for (int j = 1; j < static_cast<int>(coefficients.size()); ++j) {
    if (coefficients[j] < coefficients[term.argmin_class]) {
      term.argmin_class = j;
    }
    if (coefficients[j] > coefficients[term.argmax_class]) {
      term.argmax_class = j;
    }
  }
  // Every exponent is shifted by the largest one, -c_min / b, so each
  // exponential lies in (0, 1] and the alpha-weighted sum is at least alpha.
  const double c_min = coefficients[term.argmin_class];
  CompensatedSum sum;
  for (double c : coefficients) sum.Add(std::exp((c_min - c) / b));
  const double denominator =
      prior.alpha() * sum.Total() +
      prior.excess_mass() *
          std::exp((c_min - coefficients[term.argmax_class]) / b);
  term.value = -std::log(denominator);
  return term;
}

absl::StatusOr<BoundResult> ExactPmlBound(const Workload& w, double b,
                                          const PriorClass& prior,
                                          const ExactBoundOptions& options) {
  if (absl::Status s = CheckScale(b); !s.ok()) return s;
  if (absl::Status s = CheckPriorMatches(w, prior); !s.ok()) return s;
  if (options.subset_cap < 1 || options.subset_cap > 62) {
    return absl::InvalidArgumentError(absl::StrCat(
        "subset cap must lie in [1, 62], got ", options.subset_cap));
  }
  const int m = w.num_queries();
  if (m > options.subset_cap) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "SubsetExplosion: workload has ", m,
        " queries, exact enumeration is capped at ", options.subset_cap));
  }

  std::vector<double> c(w.num_classes());
  FillCoefficients(w, 0, c);
  SubsetTerm best = EvaluateSubsetTerm(c, b, prior);
  std::uint64_t best_mask = 0;

  // Gray-code walk: step i toggles row ctz(i), so each step changes every
  // coefficient by +-2 w_{lj}.
  const std::uint64_t total = std::uint64_t{1} << m;
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int row = std::countr_zero(i);
    gray ^= std::uint64_t{1} << row;
    if (row >= kRefreshBit) {
      FillCoefficients(w, gray, c);
    } else {
      const double step = (gray >> row) & 1 ? 2.0 : -2.0;
      const auto weights = w.query(row);
      for (int j = 0; j < w.num_classes(); ++j) c[j] += step * weights[j];
    }
    const SubsetTerm term = EvaluateSubsetTerm(c, b, prior);
    if (Exceeds(term.value, best.value) ||
        (Ties(term.value, best.value) && gray < best_mask)) {
      best = term;
      best_mask = gray;
    }
  }

  // Report the value recomputed from scratch at the witness so that it is
  // reproducible from the witness alone.
  FillCoefficients(w, best_mask, c);
  best = EvaluateSubsetTerm(c, b, prior);
  return BoundResult{
      .value = best.value,
      .kind = BoundKind::kExactPml,
      .witness = SubsetWitness{.mask = best_mask,
                               .argmin_class = best.argmin_class,
                               .argmax_class = best.argmax_class},
      .alpha = prior.alpha(),
      .b = b,
  };
}

absl::StatusOr<BoundResult> SimplifiedPmlBound(const Workload& w, double b,
                                               const PriorClass& prior) {
  if (absl::Status s = CheckScale(b); !s.ok()) return s;
  if (absl::Status s = CheckPriorMatches(w, prior); !s.ok()) return s;
  const int k = w.num_classes();
  std::vector<double> scaled(static_cast<std::size_t>(k) * k, 0.0);
  auto dist = [&](int a, int c) -> double& {
    return scaled[static_cast<std::size_t>(a) * k + c];
  };
  for (int a = 0; a < k; ++a) {
    for (int c = a + 1; c < k; ++c) {
      dist(a, c) = dist(c, a) = *ColumnL1Distance(w, a, c) / b;
    }
  }

  double best_value = 0.0;
  ColumnPair best_pair;
  for (int j1 = 0; j1 < k; ++j1) {
    CompensatedSum sum;
    int farthest = 0;
    for (int j = 0; j < k; ++j) {
      sum.Add(std::exp(-dist(j, j1)));
      if (dist(j1, j) > dist(j1, farthest)) farthest = j;
    }
    const double value =
        -std::log(prior.alpha() * sum.Total() +
                  prior.excess_mass() * std::exp(-dist(j1, farthest)));
    if (j1 == 0 || Exceeds(value, best_value)) {
      best_value = value;
      best_pair = {.j1 = j1, .j2 = farthest};
    }
  }
  return BoundResult{.value = best_value,
                     .kind = BoundKind::kSimplifiedPml,
                     .witness = best_pair,
                     .alpha = prior.alpha(),
                     .b = b};
}

absl::StatusOr<BoundResult> DpEpsilon(const Workload& w, double b) {
  if (absl::Status s = CheckScale(b); !s.ok()) return s;
  const Sensitivity sensitivity = SensitivityL1(w);
  return BoundResult{
      .value = sensitivity.value / b,
      .kind = BoundKind::kDp,
      .witness = ColumnPair{.j1 = sensitivity.j1, .j2 = sensitivity.j2},
      .alpha = std::nullopt,
      .b = b};
}

BoundResult TrivialBound(const PriorClass& prior) {
  return BoundResult{.value = -std::log(prior.alpha()),
                     .kind = BoundKind::kTrivial,
                     .witness = std::monostate{},
                     .alpha = prior.alpha(),
                     .b = std::nullopt};
}

absl::StatusOr<RowSubset> DpWitnessSubset(const Workload& w, int j1, int j2) {
  const int k = w.num_classes();
  if (j1 < 0 || j1 >= k || j2 < 0 || j2 >= k) {
    return absl::OutOfRangeError(absl::StrCat("column pair (", j1, ", ", j2,
                                              ") out of range for k=", k));
  }
  RowSubset subset(w.num_queries());
  for (int l = 0; l < w.num_queries(); ++l) {
    if (w.weight(l, j1) >= w.weight(l, j2)) subset.insert(l);
  }
  return subset;
}

absl::StatusOr<std::vector<double>> BuildExtremalPrior(
    std::span<const double> coefficients, const PriorClass& prior) {
  const int k = prior.num_classes();
  if (static_cast<int>(coefficients.size()) != k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", k, " coefficients, got ", coefficients.size()));
  }
  const auto largest =
      std::max_element(coefficients.begin(), coefficients.end()) -
      coefficients.begin();
  std::vector<double> p(k, prior.alpha());
  p[largest] = 1.0 - (k - 1) * prior.alpha();
  return p;
}

absl::StatusOr<bool> SimplifiedTightnessCheck(
    const Workload& w, double b, const PriorClass& prior, double tol,
    const ExactBoundOptions& options) {
  auto exact = ExactPmlBound(w, b, prior, options);
  if (!exact.ok()) return exact.status();
  auto simplified = SimplifiedPmlBound(w, b, prior);
  if (!simplified.ok()) return simplified.status();
  return std::fabs(exact->value - simplified->value) <= tol;
}

absl::StatusOr<BoundResult> EvaluateBound(
    BoundKind kind, const Workload& w, double b,
    const std::optional<PriorClass>& prior, const ExactBoundOptions& options) {
  if (kind != BoundKind::kDp && !prior.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat(BoundKindName(kind), " requires a prior class"));
  }
  switch (kind) {
    case BoundKind::kExactPml:
      return ExactPmlBound(w, b, *prior, options);
    case BoundKind::kSimplifiedPml:
      return SimplifiedPmlBound(w, b, *prior);
    case BoundKind::kDp:
      return DpEpsilon(w, b);
    case BoundKind::kTrivial:
      return TrivialBound(*prior);
  }
  return absl::InternalError("unhandled bound kind");
}

}  // namespace pmlbound
