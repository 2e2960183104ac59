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

#ifndef PMLBOUND_ORACLE_H_
#define PMLBOUND_ORACLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "pmlbound/bounds.h"
#include "pmlbound/workload.h"

// Exact ground truth for small instances: n i.i.d. records over k classes, the
// Laplace mechanism Y = W x + N applied to their histogram x, and the
// pointwise leakage of the first record's class.
namespace pmlbound::oracle {

inline constexpr std::uint64_t kEnumerationCap = 1'000'000;

// Records are i.i.d. with class probabilities p, each at least alpha_floor.
class ProductPrior {
 public:
  static absl::StatusOr<ProductPrior> Create(int n, std::vector<double> p,
                                             double alpha_floor);

  int num_records() const { return n_; }
  int num_classes() const { return static_cast<int>(p_.size()); }
  std::span<const double> probabilities() const { return p_; }
  double alpha_floor() const { return alpha_floor_; }

 private:
  ProductPrior(int n, std::vector<double> p, double alpha_floor)
      : n_(n), p_(std::move(p)), alpha_floor_(alpha_floor) {}

  int n_;
  std::vector<double> p_;
  double alpha_floor_;
};

// Class counts of a dataset.
struct HistogramState {
  std::vector<int> counts;
  friend bool operator==(const HistogramState&,
                         const HistogramState&) = default;
};

// Every k-vector of nonnegative integers summing to n, in lexicographic order.
// ResourceExhausted (EnumerationTooLarge) when there are more than
// kEnumerationCap of them.
absl::StatusOr<std::vector<HistogramState>> EnumerateHistograms(int n, int k);

// Multinomial probability n! / prod(h_j!) * prod(p_j^h_j).
absl::StatusOr<double> HistogramProb(const HistogramState& h,
                                     const ProductPrior& prior);

// The mixture sum_x P(x) prod_l Lap(y_l - (W x)_l; b) and its conditional
// versions, precomputed for one (workload, b, prior) so that many outputs can
// be evaluated cheaply. All densities are handled as logarithms.
class LeakageModel {
 public:
  static absl::StatusOr<LeakageModel> Create(const Workload& w, double b,
                                             const ProductPrior& prior);

  int num_queries() const { return m_; }
  int num_classes() const { return k_; }

  double LogOutputDensity(std::span<const double> y) const;
  // Density of y given that record 1 belongs to class r.
  double LogConditionalDensity(std::span<const double> y, int r) const;
  // log max_r f(y | r) / f(y) over classes with p_r > 0.
  double PointwiseLeakage(std::span<const double> y) const;

 private:
  struct Component {
    double log_weight;
    std::vector<double> mean;
  };

  LeakageModel(int m, int k, double b, std::vector<double> p)
      : m_(m), k_(k), b_(b), p_(std::move(p)) {}

  double LogMixture(const std::vector<Component>& components,
                    std::span<const double> y) const;

  int m_;
  int k_;
  double b_;
  std::vector<double> p_;
  std::vector<Component> full_;
  // conditional_[r]: the other n - 1 records with record 1 pinned to class r.
  std::vector<std::vector<Component>> conditional_;
};

absl::StatusOr<double> OutputDensity(std::span<const double> y,
                                     const Workload& w, double b,
                                     const ProductPrior& prior);
absl::StatusOr<double> ConditionalDensity(std::span<const double> y,
                                          const Workload& w, double b,
                                          const ProductPrior& prior, int r);
absl::StatusOr<double> PointwiseLeakage(std::span<const double> y,
                                        const Workload& w, double b,
                                        const ProductPrior& prior);

// A point inside the region where every |y_l - (W x)_l| has a fixed sign for
// all datasets of n records: n * min_j w_{lj} - margin on rows in the subset,
// n * max_j w_{lj} + margin elsewhere.
absl::StatusOr<std::vector<double>> ExtremeOutputs(const Workload& w, int n,
                                                   const RowSubset& subset,
                                                   double margin);

// W * h + N with N_l i.i.d. Laplace(0, b).
absl::StatusOr<std::vector<double>> SampleMechanism(const HistogramState& h,
                                                    const Workload& w, double b,
                                                    std::uint64_t seed);

struct CertifyReport {
  int trials = 0;
  int violations = 0;
  double max_leakage_nats = 0.0;
  double bound_nats = 0.0;
  // bound minus the leakage of the extremal construction.
  double attainment_gap_nats = 0.0;
  std::uint64_t seed = 0;
  // Largest leakage - bound over the trials (negative when none violate).
  double worst_excess_nats = 0.0;
};

inline constexpr double kDominanceSlack = 1e-9;

// Compares pointwise leakage against the exact PML bound.
//
// Dominance: each trial draws a prior from the class (half of them at a vertex
// of the class, half uniformly inside it) and an output, alternately sampled
// from the mechanism on a dataset drawn from that prior and uniformly from a
// box inside a randomly chosen extreme-output region. A violation is a
// leakage above bound + kDominanceSlack.
//
// Attainment: evaluates the leakage at ExtremeOutputs of the bound's witness
// subset under the extremal prior built from that subset's coefficients.
absl::StatusOr<CertifyReport> CertifyBound(
    const Workload& w, double b, const PriorClass& prior_class, int n,
    int trials, std::uint64_t seed, const ExactBoundOptions& options = {});

}  // namespace pmlbound::oracle

#endif  // PMLBOUND_ORACLE_H_
