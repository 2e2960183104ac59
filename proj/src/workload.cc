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

#include "pmlbound/workload.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "pmlbound/rng.h"

namespace pmlbound {

absl::StatusOr<Workload> Workload::Create(Matrix weights) {
  if (weights.cols() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "workload needs at least 2 classes, got ", weights.cols()));
  }
  return Workload(std::move(weights));
}

std::vector<double> Workload::Apply(std::span<const double> x) const {
  std::vector<double> out(num_queries(), 0.0);
  for (int l = 0; l < num_queries(); ++l) {
    const auto row = query(l);
    double acc = 0.0;
    for (int j = 0; j < num_classes(); ++j) acc += row[j] * x[j];
    out[l] = acc;
  }
  return out;
}

absl::StatusOr<Workload> MakeHistogramWorkload(int k) {
  if (k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("histogram workload needs k >= 2, got ", k));
  }
  return Workload::Create(Matrix::Identity(k));
}

absl::StatusOr<Workload> MakeRangeWorkload(int k, int m, std::uint64_t seed) {
  if (k < 2 || m < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "range workload needs k >= 2 and m >= 1, got k=", k, " m=", m));
  }
  Rng rng(seed);
  std::vector<double> values(static_cast<std::size_t>(m) * k, 0.0);
  for (int l = 0; l < m; ++l) {
    const auto lo = static_cast<int>(rng.UniformInt(k));
    const auto hi = lo + static_cast<int>(rng.UniformInt(k - lo));
    for (int j = lo; j <= hi; ++j) {
      values[static_cast<std::size_t>(l) * k + j] = 1.0;
    }
  }
  auto matrix = Matrix::FromRowMajor(m, k, std::move(values));
  if (!matrix.ok()) return matrix.status();
  return Workload::Create(*std::move(matrix));
}

absl::StatusOr<Workload> MakeHaarWorkload(int k) {
  if (k < 2 || (k & (k - 1)) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Haar workload needs a power of two k >= 2, got ", k));
  }
  auto diff = Matrix::FromRows({{1.0, -1.0}});
  if (!diff.ok()) return diff.status();

  std::vector<Matrix> blocks;
  blocks.push_back(*Matrix::FromRows({std::vector<double>(k, 1.0)}));
  // Depth t splits blocks of width k / 2^(t-1); coarsest level first.
  for (int width = k; width >= 2; width /= 2) {
    const int copies = k / width;
    const int repeat = width / 2;
    auto ones = Matrix::FromRows({std::vector<double>(repeat, 1.0)});
    if (!ones.ok()) return ones.status();
    auto inner = Kron(*diff, *ones);
    if (!inner.ok()) return inner.status();
    auto level = Kron(Matrix::Identity(copies), *inner);
    if (!level.ok()) return level.status();
    blocks.push_back(*std::move(level));
  }
  auto stacked = VStack(blocks);
  if (!stacked.ok()) return stacked.status();
  return Workload::Create(*std::move(stacked));
}

absl::StatusOr<double> ColumnL1Distance(const Workload& w, int j1, int j2) {
  const int k = w.num_classes();
  if (j1 < 0 || j1 >= k || j2 < 0 || j2 >= k) {
    return absl::OutOfRangeError(absl::StrCat("column pair (", j1, ", ", j2,
                                              ") out of range for k=", k));
  }
  double total = 0.0;
  for (int l = 0; l < w.num_queries(); ++l) {
    total += std::fabs(w.weight(l, j1) - w.weight(l, j2));
  }
  return total;
}

Sensitivity SensitivityL1(const Workload& w) {
  Sensitivity best{.value = -1.0, .j1 = 0, .j2 = 1};
  for (int j1 = 0; j1 < w.num_classes(); ++j1) {
    for (int j2 = j1 + 1; j2 < w.num_classes(); ++j2) {
      const double d = *ColumnL1Distance(w, j1, j2);
      if (d > best.value) best = {.value = d, .j1 = j1, .j2 = j2};
    }
  }
  return best;
}

absl::StatusOr<Workload> ParseWorkloadCsv(absl::string_view text) {
  std::vector<std::vector<double>> rows;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    if (line.front() == '#') continue;
    std::vector<double> row;
    int col_no = 0;
    for (absl::string_view token : absl::StrSplit(line, ',')) {
      ++col_no;
      token = absl::StripAsciiWhitespace(token);
      double value = 0.0;
      const char* end = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(token.data(), end, value);
      if (token.empty() || ec != std::errc() || ptr != end) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ", column ", col_no,
                         ": not a number: '", token, "'"));
      }
      if (!std::isfinite(value)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "line ", line_no, ", column ", col_no, ": non-finite value"));
      }
      row.push_back(value);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_no, ", column ", row.size(), ": ragged row, expected ",
          rows.front().size(), " columns"));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return absl::InvalidArgumentError("workload CSV is empty");
  auto matrix = Matrix::FromRows(rows);
  if (!matrix.ok()) return matrix.status();
  return Workload::Create(*std::move(matrix));
}

absl::StatusOr<Workload> ReadWorkloadCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto parsed = ParseWorkloadCsv(buffer.str());
  if (!parsed.ok()) {
    return absl::Status(parsed.status().code(),
                        absl::StrCat(path, ": ", parsed.status().message()));
  }
  return parsed;
}

std::string FormatWorkloadCsv(const Workload& w) {
  std::string out;
  std::array<char, 64> buf;
  for (int l = 0; l < w.num_queries(); ++l) {
    for (int j = 0; j < w.num_classes(); ++j) {
      if (j > 0) out.push_back(',');
      // Avoid printing "-0".
      const double v = w.weight(l, j) == 0.0 ? 0.0 : w.weight(l, j);
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      out.append(buf.data(), ptr);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace pmlbound
