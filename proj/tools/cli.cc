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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "pmlbound/calibration.h"
#include "pmlbound/oracle.h"
#include "pmlbound/records.h"
#include "pmlbound/rng.h"

namespace pmlbound::cli {
namespace {

using json = nlohmann::json;

// An error that maps to a specific exit code.
struct Failure {
  int exit_code;
  absl::Status status;
};

Failure Usage(absl::Status status) { return {kExitUsage, std::move(status)}; }
Failure Usage(absl::string_view message) {
  return Usage(absl::InvalidArgumentError(message));
}
Failure Numeric(absl::Status status) {
  return {kExitNumeric, std::move(status)};
}

std::string OneLine(absl::string_view text) {
  return absl::StrReplaceAll(text, {{"\n", " "}, {"\r", " "}});
}

void ReportFailure(const Failure& failure, std::ostream& err) {
  const std::string code =
      failure.exit_code == kExitUsage &&
              failure.status.code() == absl::StatusCode::kInvalidArgument
          ? "USAGE"
          : absl::StatusCodeToString(failure.status.code());
  err << "error: code=" << code
      << " message=" << OneLine(failure.status.message()) << "\n";
}

// Worker count for sweeps. Only affects scheduling, never results.
int WorkerCount() {
  const char* env = std::getenv("PMLBOUND_WORKERS");
  int workers = 1;
  if (env != nullptr && absl::SimpleAtoi(env, &workers)) {
    return std::clamp(workers, 1, 64);
  }
  return 1;
}

// Computes rows[i] = fn(i) on a bounded pool; rows keep grid order.
std::vector<std::string> ComputeRows(
    int count, const std::function<std::string(int)>& fn) {
  std::vector<std::string> rows(count);
  const int workers = std::min(WorkerCount(), std::max(count, 1));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) rows[i] = fn(i);
    return rows;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) rows[i] = fn(i);
    });
  }
  for (std::thread& th : pool) th.join();
  return rows;
}

std::string MetadataLine(const RunConfig& config) {
  return absl::StrCat("# pmlbound ", kVersion, " command=", config.command,
                      " config_hash=", config.Hash(), " seed=", config.seed,
                      " rng=", Rng::kName, "\n");
}

absl::StatusOr<std::vector<BoundKind>> ParseKinds(
    const std::vector<std::string>& names) {
  std::vector<BoundKind> kinds;
  for (const std::string& name : names) {
    auto kind = ParseBoundKind(name);
    if (!kind.ok()) return kind.status();
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end()) {
      kinds.push_back(*kind);
    }
  }
  return kinds;
}

bool Contains(const std::vector<BoundKind>& kinds, BoundKind kind) {
  return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

std::string Sanitize(absl::string_view message) {
  return absl::StrReplaceAll(OneLine(message), {{",", ";"}});
}

// --- commands --------------------------------------------------------------

struct Context {
  const RunConfig& config;
  const Workload& workload;
};

std::string CommandGen(const Context& ctx) {
  return absl::StrCat(MetadataLine(ctx.config),
                      FormatWorkloadCsv(ctx.workload));
}

std::optional<Failure> RequireAlpha(const RunConfig& config,
                                    std::optional<PriorClass>& prior, int k) {
  if (!config.alpha.has_value()) {
    return Usage(absl::StrCat(config.command, " needs --alpha"));
  }
  auto created = PriorClass::Create(*config.alpha, k);
  if (!created.ok()) return Usage(created.status());
  prior = *created;
  return std::nullopt;
}

std::variant<std::string, Failure> CommandBound(const Context& ctx) {
  const RunConfig& config = ctx.config;
  auto kinds = ParseKinds(config.kinds);
  if (!kinds.ok()) return Usage(kinds.status());
  std::optional<PriorClass> prior;
  const bool needs_prior =
      std::any_of(kinds->begin(), kinds->end(),
                  [](BoundKind k) { return k != BoundKind::kDp; });
  if (needs_prior) {
    if (auto f = RequireAlpha(config, prior, ctx.workload.num_classes())) {
      return *f;
    }
  }
  std::string text =
      absl::StrCat(MetadataLine(config), records::BoundHeader(), "\n");
  const ExactBoundOptions options{.subset_cap = config.subset_cap};
  for (BoundKind kind : *kinds) {
    auto result = EvaluateBound(kind, ctx.workload, *config.b, prior, options);
    if (!result.ok()) return Numeric(result.status());
    absl::StrAppend(&text, records::BoundRow(*result), "\n");
  }
  return text;
}

std::variant<std::string, Failure> CommandCalibrate(const Context& ctx) {
  const RunConfig& config = ctx.config;
  if (!config.epsilon.has_value()) return Usage("calibrate needs --epsilon");
  auto kinds = ParseKinds(config.kinds);
  if (!kinds.ok()) return Usage(kinds.status());
  if (Contains(*kinds, BoundKind::kTrivial)) {
    return Usage("the trivial bound cannot be calibrated");
  }
  std::optional<PriorClass> prior;
  const bool needs_prior =
      std::any_of(kinds->begin(), kinds->end(),
                  [](BoundKind k) { return k != BoundKind::kDp; });
  if (needs_prior) {
    if (auto f = RequireAlpha(config, prior, ctx.workload.num_classes())) {
      return *f;
    }
  }
  CalibrationOptions options;
  options.tol_rel = config.tol_rel;
  options.exact.subset_cap = config.subset_cap;
  std::string text =
      absl::StrCat(MetadataLine(config), records::CalibrationHeader(), "\n");
  for (BoundKind kind : *kinds) {
    auto result = MinNoiseForEpsilon(
        ctx.workload, *config.epsilon,
        kind == BoundKind::kDp ? std::nullopt : prior, kind, options);
    if (!result.ok()) {
      if (result.status().code() == absl::StatusCode::kInvalidArgument) {
        return Usage(result.status());
      }
      return Numeric(result.status());
    }
    absl::StrAppend(&text, records::CalibrationRow(*config.epsilon, *result),
                    "\n");
  }
  return text;
}

std::variant<std::string, Failure> CommandSweepAlpha(const Context& ctx) {
  const RunConfig& config = ctx.config;
  const int k = ctx.workload.num_classes();
  auto grid = ParseGridSpec(*config.alpha_grid);
  if (!grid.ok()) return Usage(grid.status());
  const std::vector<double> alphas = grid->Values();
  for (double alpha : alphas) {
    if (!PriorClass::Create(alpha, k).ok()) {
      return Usage(absl::StrCat("alpha grid leaves (0, 1/", k, "] at ", alpha));
    }
  }
  auto kinds = ParseKinds(config.kinds);
  if (!kinds.ok()) return Usage(kinds.status());
  auto dp = DpEpsilon(ctx.workload, *config.b);
  if (!dp.ok()) return Usage(dp.status());
  if (Contains(*kinds, BoundKind::kExactPml) &&
      ctx.workload.num_queries() > config.subset_cap) {
    return Numeric(absl::ResourceExhaustedError(absl::StrCat(
        "SubsetExplosion: workload has ", ctx.workload.num_queries(),
        " queries, exact enumeration is capped at ", config.subset_cap)));
  }

  const ExactBoundOptions options{.subset_cap = config.subset_cap};
  std::vector<std::string> errors(alphas.size());
  const std::vector<std::string> rows =
      ComputeRows(static_cast<int>(alphas.size()), [&](int i) {
        const PriorClass prior = *PriorClass::Create(alphas[i], k);
        std::string exact, exact_mask, exact_min, exact_max;
        std::string simplified, simplified_pair, dp_value, dp_pair, trivial;
        if (Contains(*kinds, BoundKind::kExactPml)) {
          auto r = ExactPmlBound(ctx.workload, *config.b, prior, options);
          if (!r.ok()) {
            errors[i] = std::string(r.status().message());
          } else {
            const auto& w = std::get<SubsetWitness>(r->witness);
            exact = records::FormatReal(r->value);
            exact_mask = absl::StrCat(w.mask);
            exact_min = absl::StrCat(w.argmin_class);
            exact_max = absl::StrCat(w.argmax_class);
          }
        }
        if (Contains(*kinds, BoundKind::kSimplifiedPml)) {
          auto r = SimplifiedPmlBound(ctx.workload, *config.b, prior);
          if (r.ok()) {
            simplified = records::FormatReal(r->value);
            simplified_pair = WitnessString(*r);
          }
        }
        if (Contains(*kinds, BoundKind::kDp)) {
          dp_value = records::FormatReal(dp->value);
          dp_pair = WitnessString(*dp);
        }
        if (Contains(*kinds, BoundKind::kTrivial)) {
          trivial = records::FormatReal(TrivialBound(prior).value);
        }
        return absl::StrCat(records::FormatReal(alphas[i]), ",", exact, ",",
                            simplified, ",", dp_value, ",", trivial, ",",
                            exact_mask, ",", exact_min, ",", exact_max, ",",
                            simplified_pair, ",", dp_pair);
      });
  for (const std::string& e : errors) {
    if (!e.empty()) return Numeric(absl::InternalError(e));
  }
  return absl::StrCat(
      MetadataLine(config),
      "alpha,exact_pml_nats,simplified_pml_nats,dp_nats,trivial_nats,"
      "exact_witness_mask,exact_argmin_class,exact_argmax_class,"
      "simplified_witness,dp_witness\n",
      absl::StrJoin(rows, "\n"), "\n");
}

std::variant<std::string, Failure> CommandSweepEpsilon(const Context& ctx) {
  const RunConfig& config = ctx.config;
  auto grid = ParseGridSpec(*config.eps_grid);
  if (!grid.ok()) return Usage(grid.status());
  auto kinds = ParseKinds(config.kinds);
  if (!kinds.ok()) return Usage(kinds.status());
  if (Contains(*kinds, BoundKind::kTrivial)) {
    return Usage("the trivial bound cannot be calibrated");
  }
  auto prior = PriorClass::Create(*config.alpha, ctx.workload.num_classes());
  if (!prior.ok()) return Usage(prior.status());
  CalibrationOptions options;
  options.tol_rel = config.tol_rel;
  options.exact.subset_cap = config.subset_cap;

  const std::vector<double> epsilons = grid->Values();
  const std::vector<std::string> rows =
      ComputeRows(static_cast<int>(epsilons.size()), [&](int i) {
        std::vector<std::string> errors;
        auto solve = [&](BoundKind kind, std::string& b_out,
                         std::string* monotone_out) {
          if (!Contains(*kinds, kind)) return;
          auto r = MinNoiseForEpsilon(ctx.workload, epsilons[i],
                                      kind == BoundKind::kDp
                                          ? std::nullopt
                                          : std::optional<PriorClass>(*prior),
                                      kind, options);
          if (!r.ok()) {
            errors.push_back(absl::StrCat(BoundKindName(kind), ": ",
                                          Sanitize(r.status().message())));
            return;
          }
          b_out = records::FormatReal(r->b_min);
          if (monotone_out != nullptr) {
            *monotone_out = r->monotone_verified ? "true" : "false";
          }
        };
        std::string b_exact, b_simplified, b_dp, mono_exact, mono_simplified;
        solve(BoundKind::kExactPml, b_exact, &mono_exact);
        solve(BoundKind::kSimplifiedPml, b_simplified, &mono_simplified);
        solve(BoundKind::kDp, b_dp, nullptr);
        return absl::StrCat(records::FormatReal(epsilons[i]), ",", b_exact, ",",
                            b_simplified, ",", b_dp, ",", mono_exact, ",",
                            mono_simplified, ",", absl::StrJoin(errors, " | "));
      });
  return absl::StrCat(MetadataLine(config),
                      "epsilon,b_exact_pml,b_simplified_pml,b_dp,"
                      "monotone_exact_pml,monotone_simplified_pml,error\n",
                      absl::StrJoin(rows, "\n"), "\n");
}

std::variant<std::string, Failure> CommandCertify(const Context& ctx) {
  const RunConfig& config = ctx.config;
  std::optional<PriorClass> prior;
  if (auto f = RequireAlpha(config, prior, ctx.workload.num_classes())) {
    return *f;
  }
  if (config.n < 1 || config.trials < 1) {
    return Usage("certify needs --n >= 1 and --trials >= 1");
  }
  auto report = oracle::CertifyBound(
      ctx.workload, *config.b, *prior, config.n, config.trials, config.seed,
      ExactBoundOptions{.subset_cap = config.subset_cap});
  if (!report.ok()) return Numeric(report.status());
  return absl::StrCat(MetadataLine(config), records::CertifyHeader(), "\n",
                      records::CertifyRow(*report), "\n");
}

// Fills per-command defaults and checks cross-field constraints.
std::optional<Failure> Finalize(RunConfig& config, const Workload& w) {
  const int k = w.num_classes();
  const std::string& cmd = config.command;
  if (!config.b.has_value()) config.b = 1.0;
  if (!(*config.b > 0) || !std::isfinite(*config.b)) {
    return Usage("--b must be positive and finite");
  }
  if (config.subset_cap < 1 || config.subset_cap > 62) {
    return Usage("--subset-cap must lie in [1, 62]");
  }
  if (config.kinds.empty()) {
    if (cmd == "calibrate") {
      config.kinds = {"exact_pml"};
    } else if (cmd == "sweep-epsilon") {
      config.kinds = {"exact_pml", "simplified_pml", "dp"};
    } else {
      config.kinds = {"exact_pml", "simplified_pml", "dp", "trivial"};
    }
  }
  if (cmd == "sweep-alpha" && !config.alpha_grid.has_value()) {
    config.alpha_grid = absl::StrCat("0.001:1/", k, ":50:log");
  }
  if (cmd == "sweep-epsilon") {
    if (!config.eps_grid.has_value()) config.eps_grid = "0.1:2.2:30:lin";
    if (!config.alpha.has_value()) config.alpha = 1.0 / k;
  }
  return std::nullopt;
}

std::string DefaultWorkload(absl::string_view command) {
  if (command == "sweep-epsilon" || command == "gen") return "haar:8";
  if (command == "certify") return "histogram:2";
  return "histogram:8";
}

absl::Status WriteOutput(const RunConfig& config, const std::string& text,
                         std::ostream& out) {
  if (config.out.empty() || config.out == "-") {
    out << text;
    return absl::OkStatus();
  }
  std::ofstream file(config.out, std::ios::binary | std::ios::trunc);
  if (!file) {
    return absl::UnavailableError(
        absl::StrCat("cannot open ", config.out, " for writing"));
  }
  file << text;
  file.close();
  if (!file) {
    return absl::DataLossError(absl::StrCat("failed writing ", config.out));
  }
  return absl::OkStatus();
}

}  // namespace

std::vector<double> GridSpec::Values() const {
  std::vector<double> values(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    values[i] =
        log_spaced
            ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
            : start + t * (stop - start);
  }
  values.front() = start;
  values.back() = stop;
  return values;
}

absl::StatusOr<double> ParseReal(absl::string_view text) {
  text = absl::StripAsciiWhitespace(text);
  auto parse_plain = [](absl::string_view s) -> absl::StatusOr<double> {
    double value = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a finite number: '", s, "'"));
    }
    return value;
  };
  const auto slash = text.find('/');
  if (slash == absl::string_view::npos) return parse_plain(text);
  auto num = parse_plain(text.substr(0, slash));
  auto den = parse_plain(text.substr(slash + 1));
  if (!num.ok() || !den.ok() || *den == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("not a valid fraction: '", text, "'"));
  }
  return *num / *den;
}

absl::StatusOr<GridSpec> ParseGridSpec(absl::string_view text) {
  const std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  if (parts.size() != 4) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid '", text, "' is not start:stop:points:lin|log"));
  }
  GridSpec grid;
  auto start = ParseReal(parts[0]);
  if (!start.ok()) return start.status();
  auto stop = ParseReal(parts[1]);
  if (!stop.ok()) return stop.status();
  grid.start = *start;
  grid.stop = *stop;
  if (!absl::SimpleAtoi(parts[2], &grid.points) || grid.points < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid '", text, "' needs at least 2 points"));
  }
  if (parts[3] == "log") {
    grid.log_spaced = true;
  } else if (parts[3] != "lin") {
    return absl::InvalidArgumentError(
        absl::StrCat("grid spacing must be lin or log, got '", parts[3], "'"));
  }
  if (!(grid.stop > grid.start)) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid '", text, "' has no positive extent"));
  }
  if (grid.log_spaced && !(grid.start > 0)) {
    return absl::InvalidArgumentError("log grids need a positive start");
  }
  return grid;
}

absl::StatusOr<Workload> ResolveWorkload(absl::string_view descriptor) {
  if (!descriptor.empty() && descriptor.front() == '@') {
    return ReadWorkloadCsv(std::string(descriptor.substr(1)));
  }
  const std::vector<absl::string_view> parts = absl::StrSplit(descriptor, ':');
  auto bad = [&] {
    return absl::InvalidArgumentError(absl::StrCat(
        "workload '", descriptor,
        "' is not family:k[:m[:seed]] (histogram, identity, range, haar) or "
        "@path.csv"));
  };
  if (parts.size() < 2) return bad();
  int k = 0;
  if (!absl::SimpleAtoi(parts[1], &k)) return bad();
  const absl::string_view family = parts[0];
  if (family == "histogram" || family == "identity" || family == "haar") {
    if (parts.size() != 2) return bad();
    return family == "haar" ? MakeHaarWorkload(k) : MakeHistogramWorkload(k);
  }
  if (family == "range") {
    int m = k;
    std::uint64_t seed = 0;
    if (parts.size() > 4) return bad();
    if (parts.size() >= 3 && !absl::SimpleAtoi(parts[2], &m)) return bad();
    if (parts.size() == 4 && !absl::SimpleAtoi(parts[3], &seed)) return bad();
    return MakeRangeWorkload(k, m, seed);
  }
  return bad();
}

std::string RunConfig::CanonicalJson() const {
  json j;
  j["command"] = command;
  j["workload"] = workload;
  j["b"] = b.has_value() ? json(*b) : json(nullptr);
  j["alpha"] = alpha.has_value() ? json(*alpha) : json(nullptr);
  j["epsilon"] = epsilon.has_value() ? json(*epsilon) : json(nullptr);
  j["alpha_grid"] = alpha_grid.has_value() ? json(*alpha_grid) : json(nullptr);
  j["eps_grid"] = eps_grid.has_value() ? json(*eps_grid) : json(nullptr);
  j["kind"] = kinds;
  j["n"] = n;
  j["trials"] = trials;
  j["seed"] = seed;
  j["subset_cap"] = subset_cap;
  j["tol_rel"] = tol_rel;
  return j.dump();
}

std::string RunConfig::Hash() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : CanonicalJson()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return absl::StrFormat("%016x", hash);
}

absl::Status ApplyConfigFile(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": config must be a JSON object"));
  }
  auto real = [&](const json& v,
                  const std::string& key) -> absl::StatusOr<double> {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return ParseReal(v.get<std::string>());
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": '", key, "' must be a number"));
  };
  auto text = [&](const json& v,
                  const std::string& key) -> absl::StatusOr<std::string> {
    if (v.is_string()) return v.get<std::string>();
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": '", key, "' must be a string"));
  };
  auto integer = [&](const json& v,
                     const std::string& key) -> absl::StatusOr<std::int64_t> {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": '", key, "' must be an integer"));
  };
  for (const auto& [key, value] : j.items()) {
    absl::Status status = absl::OkStatus();
    auto set_real = [&](std::optional<double>& field) {
      auto r = real(value, key);
      if (r.ok())
        field = *r;
      else
        status = r.status();
    };
    auto set_text = [&](auto& field) {
      auto r = text(value, key);
      if (r.ok())
        field = *r;
      else
        status = r.status();
    };
    auto set_int = [&](auto& field) {
      auto r = integer(value, key);
      if (r.ok())
        field = static_cast<std::remove_reference_t<decltype(field)>>(*r);
      else
        status = r.status();
    };
    if (key == "command") {
      auto r = text(value, key);
      if (!r.ok()) return r.status();
      if (*r != config.command) {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ": config is for '", *r, "', not '", config.command, "'"));
      }
    } else if (key == "workload") {
      set_text(config.workload);
    } else if (key == "b") {
      set_real(config.b);
    } else if (key == "alpha") {
      set_real(config.alpha);
    } else if (key == "epsilon") {
      set_real(config.epsilon);
    } else if (key == "alpha_grid") {
      set_text(config.alpha_grid);
    } else if (key == "eps_grid") {
      set_text(config.eps_grid);
    } else if (key == "kind") {
      if (!value.is_array()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": 'kind' must be an array of strings"));
      }
      config.kinds.clear();
      for (const json& item : value) {
        auto r = text(item, key);
        if (!r.ok()) return r.status();
        config.kinds.push_back(*r);
      }
    } else if (key == "n") {
      set_int(config.n);
    } else if (key == "trials") {
      set_int(config.trials);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": 'seed' must be a nonnegative integer"));
      }
      config.seed = value.get<std::uint64_t>();
    } else if (key == "subset_cap") {
      set_int(config.subset_cap);
    } else if (key == "tol_rel") {
      auto r = real(value, key);
      if (r.ok())
        config.tol_rel = *r;
      else
        status = r.status();
    } else if (key == "out") {
      set_text(config.out);
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": unknown config key '", key, "'"));
    }
    if (!status.ok()) return status;
  }
  return absl::OkStatus();
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{
      "Context-aware leakage bounds for linear queries under the "
      "Laplace mechanism",
      "pmlbound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Flags {
    std::string workload, b, alpha, epsilon, alpha_grid, eps_grid, out, config,
        tol_rel;
    std::vector<std::string> kinds;
    int n = 0, trials = 0, subset_cap = 0;
    std::uint64_t seed = 0;
  } flags;
  std::map<std::string, CLI::Option*> options;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"gen", "Write a workload CSV"},
      {"bound", "Evaluate leakage bounds at one noise scale"},
      {"calibrate", "Find the minimal noise scale for a target budget"},
      {"sweep-alpha", "Tabulate every bound over a grid of alpha"},
      {"sweep-epsilon", "Tabulate minimal noise scales over a budget grid"},
      {"certify", "Check the exact bound against the exact leakage oracle"},
  };
  std::vector<CLI::App*> subcommands;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    subcommands.push_back(sub);
    auto add = [&](const std::string& flag, auto& target,
                   const std::string& text) {
      options[name + flag] = sub->add_option(flag, target, text);
    };
    add("--workload", flags.workload,
        "family:k[:m[:seed]] (histogram, identity, range, haar) or @path.csv");
    add("--config", flags.config, "JSON config file; flags override it");
    add("--out", flags.out, "Output file (default: stdout)");
    if (name == "gen") continue;
    add("--b", flags.b, "Laplace noise scale");
    add("--subset-cap", flags.subset_cap,
        "Largest query count for exact subset enumeration");
    if (name != "sweep-alpha") add("--alpha", flags.alpha, "Prior floor");
    if (name == "sweep-alpha") {
      add("--alpha-grid", flags.alpha_grid, "start:stop:points:lin|log");
    }
    if (name == "sweep-epsilon") {
      add("--eps-grid", flags.eps_grid, "start:stop:points:lin|log");
    }
    if (name == "calibrate") add("--epsilon", flags.epsilon, "Target budget");
    if (name == "calibrate" || name == "sweep-epsilon") {
      add("--tol-rel", flags.tol_rel, "Relative bisection tolerance");
    }
    if (name != "certify") {
      add("--kind", flags.kinds,
          "exact_pml | simplified_pml | dp | trivial (repeatable)");
    }
    if (name == "certify") {
      add("--n", flags.n, "Number of records");
      add("--trials", flags.trials, "Number of (prior, output) trials");
      add("--seed", flags.seed, "Random seed");
    }
  }

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    ReportFailure(Usage(e.what()), err);
    return kExitUsage;
  }

  CLI::App* active = nullptr;
  for (CLI::App* sub : subcommands) {
    if (sub->parsed()) active = sub;
  }
  RunConfig config;
  config.command = active->get_name();
  auto given = [&](const std::string& flag) {
    auto it = options.find(config.command + flag);
    return it != options.end() && it->second->count() > 0;
  };

  auto fail = [&](const Failure& f) {
    ReportFailure(f, err);
    return f.exit_code;
  };

  if (given("--config")) {
    if (absl::Status s = ApplyConfigFile(flags.config, config); !s.ok()) {
      return fail(Usage(s));
    }
  }
  auto override_real = [&](const std::string& flag, const std::string& text,
                           std::optional<double>& field) -> absl::Status {
    if (!given(flag)) return absl::OkStatus();
    auto r = ParseReal(text);
    if (!r.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(flag, ": ", r.status().message()));
    }
    field = *r;
    return absl::OkStatus();
  };
  for (absl::Status s :
       {override_real("--b", flags.b, config.b),
        override_real("--alpha", flags.alpha, config.alpha),
        override_real("--epsilon", flags.epsilon, config.epsilon)}) {
    if (!s.ok()) return fail(Usage(s));
  }
  if (given("--tol-rel")) {
    auto r = ParseReal(flags.tol_rel);
    if (!r.ok()) return fail(Usage(r.status()));
    config.tol_rel = *r;
  }
  if (given("--workload")) config.workload = flags.workload;
  if (given("--alpha-grid")) config.alpha_grid = flags.alpha_grid;
  if (given("--eps-grid")) config.eps_grid = flags.eps_grid;
  if (given("--kind")) config.kinds = flags.kinds;
  if (given("--n")) config.n = flags.n;
  if (given("--trials")) config.trials = flags.trials;
  if (given("--seed")) config.seed = flags.seed;
  if (given("--subset-cap")) config.subset_cap = flags.subset_cap;
  if (given("--out")) config.out = flags.out;
  if (config.workload.empty())
    config.workload = DefaultWorkload(config.command);

  auto workload = ResolveWorkload(config.workload);
  if (!workload.ok()) return fail(Usage(workload.status()));
  if (auto f = Finalize(config, *workload)) return fail(*f);

  const Context ctx{config, *workload};
  std::variant<std::string, Failure> result;
  if (config.command == "gen") {
    result = CommandGen(ctx);
  } else if (config.command == "bound") {
    result = CommandBound(ctx);
  } else if (config.command == "calibrate") {
    result = CommandCalibrate(ctx);
  } else if (config.command == "sweep-alpha") {
    result = CommandSweepAlpha(ctx);
  } else if (config.command == "sweep-epsilon") {
    result = CommandSweepEpsilon(ctx);
  } else {
    result = CommandCertify(ctx);
  }
  if (const auto* f = std::get_if<Failure>(&result)) return fail(*f);
  if (absl::Status s = WriteOutput(config, std::get<std::string>(result), out);
      !s.ok()) {
    return fail(Numeric(s));
  }
  return kExitOk;
}

}  // namespace pmlbound::cli
