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

#ifndef PMLBOUND_RECORDS_H_
#define PMLBOUND_RECORDS_H_

#include <optional>
#include <string>

#include "pmlbound/bounds.h"
#include "pmlbound/calibration.h"
#include "pmlbound/oracle.h"

// Flat CSV records for results. Reals use "%.16e" (17 significant digits,
// enough to round-trip any double); absent values are empty fields.
namespace pmlbound::records {

std::string FormatReal(double value);
std::string FormatReal(const std::optional<double>& value);

// kind,value_nats,alpha,b,witness,argmin_class,argmax_class
std::string BoundHeader();
std::string BoundRow(const BoundResult& result);

// bound_kind,epsilon,b_min,achieved_nats,iterations,monotone_verified
std::string CalibrationHeader();
std::string CalibrationRow(double epsilon, const CalibrationResult& result);

// trials,violations,max_leakage_nats,bound_nats,attainment_gap_nats,seed
std::string CertifyHeader();
std::string CertifyRow(const oracle::CertifyReport& report);

}  // namespace pmlbound::records

#endif  // PMLBOUND_RECORDS_H_
