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

#include "pmlbound/records.h"

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace pmlbound::records {

std::string FormatReal(double value) { return absl::StrFormat("%.16e", value); }

std::string FormatReal(const std::optional<double>& value) {
  return value.has_value() ? FormatReal(*value) : std::string();
}

std::string BoundHeader() {
  return "kind,value_nats,alpha,b,witness,argmin_class,argmax_class";
}

std::string BoundRow(const BoundResult& result) {
  std::string argmin, argmax;
  if (const auto* subset = std::get_if<SubsetWitness>(&result.witness)) {
    argmin = absl::StrCat(subset->argmin_class);
    argmax = absl::StrCat(subset->argmax_class);
  }
  return absl::StrCat(BoundKindName(result.kind), ",", FormatReal(result.value),
                      ",", FormatReal(result.alpha), ",", FormatReal(result.b),
                      ",", WitnessString(result), ",", argmin, ",", argmax);
}

std::string CalibrationHeader() {
  return "bound_kind,epsilon,b_min,achieved_nats,iterations,monotone_verified";
}

std::string CalibrationRow(double epsilon, const CalibrationResult& result) {
  return absl::StrCat(BoundKindName(result.bound_kind), ",",
                      FormatReal(epsilon), ",", FormatReal(result.b_min), ",",
                      FormatReal(result.achieved), ",", result.iterations, ",",
                      result.monotone_verified ? "true" : "false");
}

std::string CertifyHeader() {
  return "trials,violations,max_leakage_nats,bound_nats,attainment_gap_nats,"
         "seed";
}

std::string CertifyRow(const oracle::CertifyReport& report) {
  return absl::StrCat(report.trials, ",", report.violations, ",",
                      FormatReal(report.max_leakage_nats), ",",
                      FormatReal(report.bound_nats), ",",
                      FormatReal(report.attainment_gap_nats), ",", report.seed);
}

}  // namespace pmlbound::records
