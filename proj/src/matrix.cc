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

#include "pmlbound/matrix.h"

#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace pmlbound {
namespace {

absl::Status CheckFinite(std::span<const double> values, int cols) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      return absl::InvalidArgumentError(absl::StrCat(
          "matrix entry (", i / cols, ", ", i % cols, ") is not finite"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Matrix> Matrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    return absl::InvalidArgumentError("matrix must have at least one entry");
  }
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", r, " has ", rows[r].size(), " entries, expected ", cols));
    }
    values.insert(values.end(), rows[r].begin(), rows[r].end());
  }
  return FromRowMajor(static_cast<int>(rows.size()), static_cast<int>(cols),
                      std::move(values));
}

absl::StatusOr<Matrix> Matrix::FromRowMajor(int rows, int cols,
                                            std::vector<double> values) {
  if (rows < 1 || cols < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "matrix dimensions must be positive, got ", rows, "x", cols));
  }
  if (values.size() != static_cast<std::size_t>(rows) * cols) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", static_cast<std::size_t>(rows) * cols,
                     " values, got ", values.size()));
  }
  if (absl::Status s = CheckFinite(values, cols); !s.ok()) return s;
  return Matrix(rows, cols, std::move(values));
}

Matrix Matrix::Identity(int n) {
  std::vector<double> values(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i) * n + i] = 1.0;
  return Matrix(n, n, std::move(values));
}

std::vector<double> Matrix::column(int c) const {
  std::vector<double> out(rows_);
  for (int r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

absl::StatusOr<Matrix> Kron(const Matrix& a, const Matrix& b) {
  const int rows = a.rows() * b.rows();
  const int cols = a.cols() * b.cols();
  std::vector<double> values(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const double scale = a(i, j);
      for (int p = 0; p < b.rows(); ++p) {
        for (int q = 0; q < b.cols(); ++q) {
          const int r = i * b.rows() + p;
          const int c = j * b.cols() + q;
          values[static_cast<std::size_t>(r) * cols + c] = scale * b(p, q);
        }
      }
    }
  }
  // Products of finite values can still overflow.
  return Matrix::FromRowMajor(rows, cols, std::move(values));
}

absl::StatusOr<Matrix> VStack(std::span<const Matrix> blocks) {
  if (blocks.empty()) return absl::InvalidArgumentError("nothing to stack");
  const int cols = blocks.front().cols();
  int rows = 0;
  std::vector<double> values;
  for (const Matrix& block : blocks) {
    if (block.cols() != cols) {
      return absl::InvalidArgumentError(
          absl::StrCat("cannot stack a ", block.cols(), "-column block under ",
                       cols, " columns"));
    }
    rows += block.rows();
    values.insert(values.end(), block.values().begin(), block.values().end());
  }
  return Matrix::FromRowMajor(rows, cols, std::move(values));
}

}  // namespace pmlbound
