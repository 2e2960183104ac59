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

#ifndef PMLBOUND_WORKLOAD_H_
#define PMLBOUND_WORKLOAD_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pmlbound/matrix.h"

namespace pmlbound {

// A linear query workload: m queries (rows) over k data classes (columns).
// Answering the workload on a histogram x of class counts yields W * x.
class Workload {
 public:
  // Requires m >= 1 and k >= 2; the Matrix type already guarantees finiteness.
  static absl::StatusOr<Workload> Create(Matrix weights);

  int num_queries() const { return weights_.rows(); }
  int num_classes() const { return weights_.cols(); }

  double weight(int query, int cls) const { return weights_(query, cls); }
  std::span<const double> query(int l) const { return weights_.row(l); }
  std::vector<double> class_column(int j) const { return weights_.column(j); }

  const Matrix& matrix() const { return weights_; }

  // W * x for a vector of length k.
  std::vector<double> Apply(std::span<const double> x) const;

  friend bool operator==(const Workload&, const Workload&) = default;

 private:
  explicit Workload(Matrix weights) : weights_(std::move(weights)) {}

  Matrix weights_;
};

// The k x k identity: one counting query per class.
absl::StatusOr<Workload> MakeHistogramWorkload(int k);

// m random range queries over k ordered classes. Row l has ones exactly on the
// 0-based columns L..R, where L is uniform on {0, ..., k-1} and R is uniform on
// {L, ..., k-1}; both draws come from Rng(seed), row by row, L before R.
absl::StatusOr<Workload> MakeRangeWorkload(int k, int m, std::uint64_t seed);

// The unnormalized k x k Haar matrix: the all-ones row followed, for depth
// t = 1..log2(k), by the rows of I_{2^(t-1)} (x) [1, -1] (x) 1_{k/2^t}.
// k must be a power of two.
absl::StatusOr<Workload> MakeHaarWorkload(int k);

// ||w_{:,j1} - w_{:,j2}||_1.
absl::StatusOr<double> ColumnL1Distance(const Workload& w, int j1, int j2);

struct Sensitivity {
  double value = 0.0;
  // Lexicographically smallest maximizing pair with j1 < j2.
  int j1 = 0;
  int j2 = 1;
};

// The l1 sensitivity max_{j1,j2} ||w_{:,j1} - w_{:,j2}||_1 under replacement of
// one record.
Sensitivity SensitivityL1(const Workload& w);

// Workload CSV: one line per query, k comma-separated decimal numbers, no
// header. Blank trailing lines and lines starting with '#' are skipped. Errors
// carry "line L, column C" positions (1-based).
absl::StatusOr<Workload> ParseWorkloadCsv(absl::string_view text);
absl::StatusOr<Workload> ReadWorkloadCsv(const std::string& path);

// Shortest round-trip decimal representation of each entry.
std::string FormatWorkloadCsv(const Workload& w);

}  // namespace pmlbound

#endif  // PMLBOUND_WORKLOAD_H_
