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

#ifndef PMLBOUND_TOOLS_CLI_H_
#define PMLBOUND_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "pmlbound/bounds.h"
#include "pmlbound/workload.h"

namespace pmlbound::cli {

inline constexpr absl::string_view kVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

// "start:stop:points:lin|log". start and stop accept fractions such as 1/8.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  bool log_spaced = false;

  std::vector<double> Values() const;
};

absl::StatusOr<GridSpec> ParseGridSpec(absl::string_view text);

// A decimal number or a fraction "a/b".
absl::StatusOr<double> ParseReal(absl::string_view text);

// "histogram:k", "identity:k", "range:k[:m[:seed]]", "haar:k" or "@path.csv".
absl::StatusOr<Workload> ResolveWorkload(absl::string_view descriptor);

// Fully resolved settings of one invocation. Command-line flags override
// values loaded from a --config JSON file.
struct RunConfig {
  std::string command;
  std::string workload;
  std::optional<double> b;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<std::string> alpha_grid;
  std::optional<std::string> eps_grid;
  std::vector<std::string> kinds;
  int n = 2;
  int trials = 10000;
  std::uint64_t seed = 0;
  int subset_cap = kDefaultSubsetCap;
  double tol_rel = 1e-6;
  std::string out;

  // Canonical JSON of every field except `out`.
  std::string CanonicalJson() const;
  // FNV-1a 64 of CanonicalJson(), as 16 hex digits.
  std::string Hash() const;
};

// Loads a config JSON file. Unknown keys are errors.
absl::Status ApplyConfigFile(const std::string& path, RunConfig& config);

// Runs one invocation; args[0] is the program name. Results go to the --out
// file when given and to `out` otherwise; diagnostics go to `err` as a single
// "error: code=<CODE> message=<text>" line. Returns one of the exit codes
// above.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pmlbound::cli

#endif  // PMLBOUND_TOOLS_CLI_H_
