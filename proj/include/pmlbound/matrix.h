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

#ifndef PMLBOUND_MATRIX_H_
#define PMLBOUND_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace pmlbound {

// Dense row-major matrix of finite doubles. Immutable after construction.
class Matrix {
 public:
  // Builds a matrix from equally sized rows. Rejects empty input, ragged rows
  // and non-finite entries.
  static absl::StatusOr<Matrix> FromRows(
      const std::vector<std::vector<double>>& rows);

  // `values` holds rows * cols entries in row-major order.
  static absl::StatusOr<Matrix> FromRowMajor(int rows, int cols,
                                             std::vector<double> values);

  static Matrix Identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::span<const double> row(int r) const {
    return {values_.data() + static_cast<std::size_t>(r) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::vector<double> column(int c) const;

  std::span<const double> values() const { return values_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Matrix(int rows, int cols, std::vector<double> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {}

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

// Kronecker product. The result is (a.rows * b.rows) x (a.cols * b.cols) and
// block (i, j) equals a(i, j) * b.
absl::StatusOr<Matrix> Kron(const Matrix& a, const Matrix& b);

// Stacks matrices with equal column counts on top of each other.
absl::StatusOr<Matrix> VStack(std::span<const Matrix> blocks);

}  // namespace pmlbound

#endif  // PMLBOUND_MATRIX_H_
