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
#include <optional>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "pmlbound/bounds.h"
#include "pmlbound/rng.h"
#include "pmlbound/workload.h"

namespace pmlbound {
namespace {

using ::testing::HasSubstr;

std::optional<PriorClass> Prior(double alpha, int k) {
  return *PriorClass::Create(alpha, k);
}

// Inverse of -log(alpha + (1 - alpha) e^{-2/b}) in b.
double IdentityInverse(double eps, double alpha) {
  return -2.0 / std::log((std::exp(-eps) - alpha) / (1 - alpha));
}

TEST(CalibrationTest, DpClosedForm) {
  auto haar = MinNoiseForEpsilon(*MakeHaarWorkload(8), 1.0, std::nullopt,
                                 BoundKind::kDp);
  ASSERT_TRUE(haar.ok());
  EXPECT_EQ(haar->b_min, 6.0);
  EXPECT_EQ(haar->achieved, 1.0);
  auto hist = MinNoiseForEpsilon(*MakeHistogramWorkload(8), 0.5, std::nullopt,
                                 BoundKind::kDp);
  ASSERT_TRUE(hist.ok());
  EXPECT_EQ(hist->b_min, 4.0);
}

TEST(CalibrationTest, DpRejectsPrior) {
  EXPECT_FALSE(MinNoiseForEpsilon(*MakeHaarWorkload(8), 1.0, Prior(0.1, 8),
                                  BoundKind::kDp)
                   .ok());
}

TEST(CalibrationTest, IdentityMatchesClosedFormInverse) {
  Workload w = *MakeHistogramWorkload(8);
  for (double alpha : {0.01, 0.05, 0.125}) {
    for (double eps : {0.1, 0.5, 1.0, 1.5}) {
      if (eps >= std::log(1 / alpha)) continue;
      for (BoundKind kind : {BoundKind::kExactPml, BoundKind::kSimplifiedPml}) {
        auto r = MinNoiseForEpsilon(w, eps, Prior(alpha, 8), kind);
        ASSERT_TRUE(r.ok()) << r.status();
        const double expected = IdentityInverse(eps, alpha);
        EXPECT_NEAR(r->b_min, expected, 2e-6 * expected);
        EXPECT_TRUE(r->monotone_verified);
      }
    }
  }
}

TEST(CalibrationTest, InvertsIdentityBoundAtUnitScale) {
  const double eps = -std::log(0.125 + 0.875 * std::exp(-2.0));
  auto r = MinNoiseForEpsilon(*MakeHistogramWorkload(8), eps, Prior(0.125, 8),
                              BoundKind::kExactPml);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r->b_min, 1.0, 1e-6);
}

TEST(CalibrationTest, AchievedBoundWithinRelativeTolerance) {
  Workload w = *MakeHaarWorkload(8);
  for (double eps : {0.1, 0.4, 1.0, 1.7, 2.0}) {
    for (BoundKind kind : {BoundKind::kExactPml, BoundKind::kSimplifiedPml}) {
      auto r = MinNoiseForEpsilon(w, eps, Prior(0.125, 8), kind);
      ASSERT_TRUE(r.ok()) << r.status();
      ASSERT_TRUE(r->achieved.has_value());
      EXPECT_LE(*r->achieved, eps);
      EXPECT_LE(eps - *r->achieved, eps * 1e-6);
      auto recomputed = EvaluateBound(kind, w, r->b_min, Prior(0.125, 8));
      EXPECT_EQ(recomputed->value, *r->achieved);
    }
  }
}

TEST(CalibrationTest, ResultIsNearMinimal) {
  Workload w = *MakeHaarWorkload(8);
  auto prior = Prior(0.125, 8);
  auto r = MinNoiseForEpsilon(w, 1.0, prior, BoundKind::kExactPml);
  ASSERT_TRUE(r.ok());
  const double below = r->b_min * (1 - 2e-6);
  EXPECT_GT(ExactPmlBound(w, below, *prior)->value, 1.0);
}

TEST(CalibrationTest, OrderingExactSimplifiedDp) {
  Rng rng(211);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 1 + static_cast<int>(rng.UniformInt(8));
    const int k = 2 + static_cast<int>(rng.UniformInt(5));
    std::vector<double> values(m * k);
    for (double& v : values) v = rng.Uniform(-1, 1);
    Workload w = *Workload::Create(*Matrix::FromRowMajor(m, k, values));
    const double alpha = 0.5 / k;
    const double eps = rng.Uniform(0.05, std::log(1 / alpha) - 0.05);
    auto exact =
        MinNoiseForEpsilon(w, eps, Prior(alpha, k), BoundKind::kExactPml);
    auto simplified =
        MinNoiseForEpsilon(w, eps, Prior(alpha, k), BoundKind::kSimplifiedPml);
    auto dp = MinNoiseForEpsilon(w, eps, std::nullopt, BoundKind::kDp);
    ASSERT_TRUE(exact.ok() && simplified.ok() && dp.ok());
    // Both PML minima are found to relative precision 1e-6.
    EXPECT_LE(exact->b_min, simplified->b_min * (1 + 2e-6));
    EXPECT_LE(simplified->b_min, dp->b_min);
  }
}

TEST(CalibrationTest, NonincreasingInEpsilon) {
  Workload w = *MakeRangeWorkload(8, 8, 0);
  double previous = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const double eps = 0.1 + 0.1 * i;
    auto r = MinNoiseForEpsilon(w, eps, Prior(0.125, 8), BoundKind::kExactPml);
    ASSERT_TRUE(r.ok());
    EXPECT_LE(r->b_min, previous * (1 + 2e-6));
    previous = r->b_min;
  }
}

TEST(CalibrationTest, BudgetAboveTrivialNeedsNoNoise) {
  Workload w = *MakeHaarWorkload(8);
  for (double eps : {std::log(8.0), 2.1, 5.0}) {
    for (BoundKind kind : {BoundKind::kExactPml, BoundKind::kSimplifiedPml}) {
      auto r = MinNoiseForEpsilon(w, eps, Prior(0.125, 8), kind);
      ASSERT_TRUE(r.ok());
      EXPECT_EQ(r->b_min, 0.0);
      EXPECT_FALSE(r->achieved.has_value());
    }
  }
}

TEST(CalibrationTest, JustBelowTrivialNeedsLittleNoise) {
  Workload w = *MakeHistogramWorkload(8);
  const double eps = std::log(8.0) - 1e-3;
  auto r = MinNoiseForEpsilon(w, eps, Prior(0.125, 8), BoundKind::kExactPml);
  ASSERT_TRUE(r.ok());
  EXPECT_GT(r->b_min, 0.0);
  EXPECT_NEAR(r->b_min, IdentityInverse(eps, 0.125),
              2e-6 * IdentityInverse(eps, 0.125));
}

TEST(CalibrationTest, ConstantColumnsNeedNoNoise) {
  Workload w = *Workload::Create(*Matrix::FromRows({{1, 1, 1}, {2, 2, 2}}));
  auto r = MinNoiseForEpsilon(w, 0.1, Prior(0.1, 3), BoundKind::kExactPml);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->b_min, 0.0);
  auto dp = MinNoiseForEpsilon(w, 0.1, std::nullopt, BoundKind::kDp);
  ASSERT_TRUE(dp.ok());
  EXPECT_EQ(dp->b_min, 0.0);
}

TEST(CalibrationTest, StrictModeAcceptsMonotoneBounds) {
  CalibrationOptions options;
  options.fail_on_non_monotone = true;
  auto r = MinNoiseForEpsilon(*MakeHaarWorkload(8), 0.7, Prior(0.125, 8),
                              BoundKind::kExactPml, options);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_TRUE(r->monotone_verified);
}

TEST(CalibrationTest, CoarserToleranceUsesFewerIterations) {
  Workload w = *MakeHaarWorkload(8);
  CalibrationOptions coarse;
  coarse.tol_rel = 1e-3;
  auto fine = MinNoiseForEpsilon(w, 1.0, Prior(0.125, 8), BoundKind::kExactPml);
  auto rough =
      MinNoiseForEpsilon(w, 1.0, Prior(0.125, 8), BoundKind::kExactPml, coarse);
  ASSERT_TRUE(fine.ok() && rough.ok());
  EXPECT_LT(rough->iterations, fine->iterations);
  EXPECT_NEAR(rough->b_min, fine->b_min, 1e-3 * fine->b_min);
}

TEST(CalibrationTest, RejectsInvalidInputs) {
  Workload w = *MakeHaarWorkload(8);
  EXPECT_FALSE(
      MinNoiseForEpsilon(w, 0.0, Prior(0.1, 8), BoundKind::kExactPml).ok());
  EXPECT_FALSE(
      MinNoiseForEpsilon(w, -1.0, Prior(0.1, 8), BoundKind::kExactPml).ok());
  EXPECT_FALSE(
      MinNoiseForEpsilon(w, NAN, Prior(0.1, 8), BoundKind::kExactPml).ok());
  EXPECT_FALSE(
      MinNoiseForEpsilon(w, 1.0, std::nullopt, BoundKind::kExactPml).ok());
  EXPECT_FALSE(
      MinNoiseForEpsilon(w, 1.0, Prior(0.1, 4), BoundKind::kExactPml).ok());
  auto trivial = MinNoiseForEpsilon(w, 1.0, Prior(0.1, 8), BoundKind::kTrivial);
  EXPECT_EQ(trivial.status().code(), absl::StatusCode::kInvalidArgument);
  CalibrationOptions bad;
  bad.tol_rel = 0.5;
  EXPECT_FALSE(
      MinNoiseForEpsilon(w, 1.0, Prior(0.1, 8), BoundKind::kExactPml, bad)
          .ok());
}

TEST(CalibrationTest, PropagatesSubsetExplosion) {
  std::vector<std::vector<double>> rows(21, {1.0, 0.0});
  Workload w = *Workload::Create(*Matrix::FromRows(rows));
  auto r = MinNoiseForEpsilon(w, 1.0, Prior(0.25, 2), BoundKind::kExactPml);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kResourceExhausted);
  EXPECT_THAT(r.status().message(), HasSubstr("SubsetExplosion"));
}

}  // namespace
}  // namespace pmlbound
