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

#ifndef PMLBOUND_BOUNDS_H_
#define PMLBOUND_BOUNDS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pmlbound/workload.h"

namespace pmlbound {

// The prior family in which every record falls into each of the k classes with
// probability at least alpha, 0 < alpha <= 1/k.
class PriorClass {
 public:
  static absl::StatusOr<PriorClass> Create(double alpha, int k);

  double alpha() const { return alpha_; }
  int num_classes() const { return k_; }

  // 1 - k * alpha, clamped at zero so that alpha = 1/k never goes negative
  // through rounding.
  double excess_mass() const;

 private:
  PriorClass(double alpha, int k) : alpha_(alpha), k_(k) {}

  double alpha_;
  int k_;
};

// A subset of the query rows {0, ..., m-1}.
class RowSubset {
 public:
  explicit RowSubset(int num_rows) : members_(num_rows, false) {}
  // Bit l of `mask` selects row l. Requires num_rows <= 64.
  static RowSubset FromMask(std::uint64_t mask, int num_rows);
  static RowSubset All(int num_rows);

  int universe_size() const { return static_cast<int>(members_.size()); }
  bool contains(int row) const { return members_[row]; }
  void insert(int row) { members_[row] = true; }
  void erase(int row) { members_[row] = false; }

  std::vector<int> rows() const;
  // Present when universe_size() <= 64.
  std::optional<std::uint64_t> mask() const;

  friend bool operator==(const RowSubset&, const RowSubset&) = default;

 private:
  std::vector<bool> members_;
};

enum class BoundKind { kExactPml, kSimplifiedPml, kDp, kTrivial };

absl::string_view BoundKindName(BoundKind kind);
absl::StatusOr<BoundKind> ParseBoundKind(absl::string_view name);

// Maximizing subset of the exact bound together with the classes attaining the
// smallest and largest subset coefficient.
struct SubsetWitness {
  std::uint64_t mask = 0;
  int argmin_class = 0;
  int argmax_class = 0;
  friend bool operator==(const SubsetWitness&, const SubsetWitness&) = default;
};

struct ColumnPair {
  int j1 = 0;
  int j2 = 0;
  friend bool operator==(const ColumnPair&, const ColumnPair&) = default;
};

using BoundWitness = std::variant<std::monostate, SubsetWitness, ColumnPair>;

// A leakage bound in nats.
struct BoundResult {
  double value = 0.0;
  BoundKind kind = BoundKind::kTrivial;
  BoundWitness witness;
  std::optional<double> alpha;  // absent for kDp
  std::optional<double> b;      // absent for kTrivial
};

// Flat witness encoding: the subset bitmask as a decimal integer, "j1:j2" for
// column pairs, and an empty string for the trivial bound.
std::string WitnessString(const BoundResult& result);

inline constexpr int kDefaultSubsetCap = 20;

struct ExactBoundOptions {
  // Largest number of queries whose 2^m subsets are enumerated; must be in
  // [1, 62].
  int subset_cap = kDefaultSubsetCap;
};

// sum_{l in I} w_{lj} - sum_{l not in I} w_{lj}.
absl::StatusOr<double> SubsetCoefficient(const Workload& w,
                                         const RowSubset& subset, int cls);

// All k coefficients of `subset` at once.
absl::StatusOr<std::vector<double>> SubsetCoefficients(const Workload& w,
                                                       const RowSubset& subset);

// Value of the exact bound's objective for one fixed subset, given its
// coefficient vector c (length k):
//   log( e^{-c_min/b} / (alpha sum_j e^{-c_j/b} + (1 - k alpha) e^{-c_max/b}) )
// evaluated after shifting every exponent by -c_min/b.
struct SubsetTerm {
  double value = 0.0;
  int argmin_class = 0;
  int argmax_class = 0;
};
SubsetTerm EvaluateSubsetTerm(std::span<const double> coefficients, double b,
                              const PriorClass& prior);

// Maximum over all subsets I of the query rows of EvaluateSubsetTerm. Ties go
// to the numerically smallest mask. Returns ResourceExhausted when the
// workload has more than options.subset_cap queries.
absl::StatusOr<BoundResult> ExactPmlBound(
    const Workload& w, double b, const PriorClass& prior,
    const ExactBoundOptions& options = {});

// Pairwise relaxation of the exact bound:
//   max_{j1,j2} -log( alpha sum_j e^{-D(j,j1)} + (1 - k alpha) e^{-D(j1,j2)} )
// with D(j,j') = ||w_{:,j} - w_{:,j'}||_1 / b. Costs O(k^2 m).
absl::StatusOr<BoundResult> SimplifiedPmlBound(const Workload& w, double b,
                                               const PriorClass& prior);

// Sensitivity / b, the pure DP guarantee of the Laplace mechanism.
absl::StatusOr<BoundResult> DpEpsilon(const Workload& w, double b);

// log(1/alpha), the leakage of an unrandomized release.
BoundResult TrivialBound(const PriorClass& prior);

// {l : w_{l,j1} >= w_{l,j2}}, the subset on which c_{j1} - c_{j2} equals
// ||w_{:,j1} - w_{:,j2}||_1.
absl::StatusOr<RowSubset> DpWitnessSubset(const Workload& w, int j1, int j2);

// The prior in the class that minimizes sum_j p_j e^{-c_j/b}: alpha on every
// class except the (first) largest coefficient, which takes 1 - (k-1) alpha.
absl::StatusOr<std::vector<double>> BuildExtremalPrior(
    std::span<const double> coefficients, const PriorClass& prior);

// True when the exact and simplified bounds agree to within `tol` nats.
absl::StatusOr<bool> SimplifiedTightnessCheck(
    const Workload& w, double b, const PriorClass& prior, double tol,
    const ExactBoundOptions& options = {});

// Evaluates `kind` at noise scale b. kTrivial ignores b and kDp ignores prior.
absl::StatusOr<BoundResult> EvaluateBound(
    BoundKind kind, const Workload& w, double b,
    const std::optional<PriorClass>& prior,
    const ExactBoundOptions& options = {});

}  // namespace pmlbound

#endif  // PMLBOUND_BOUNDS_H_
