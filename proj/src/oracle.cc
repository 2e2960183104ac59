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

#include "pmlbound/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "pmlbound/log_math.h"
#include "pmlbound/rng.h"

namespace pmlbound::oracle {
namespace {

constexpr double kProbabilitySumTol = 1e-12;

// C(n + k - 1, k - 1), saturating just above `cap`.
std::uint64_t CountHistograms(int n, int k, std::uint64_t cap) {
  // Multiplicative formula; each partial product is itself a binomial.
  std::uint64_t count = 1;
  for (int i = 1; i < k; ++i) {
    count = count * static_cast<std::uint64_t>(n + i) / i;
    if (count > cap) return cap + 1;
  }
  return count;
}

void EnumerateInto(int remaining, int position, std::vector<int>& counts,
                   std::vector<HistogramState>& out) {
  if (position + 1 == static_cast<int>(counts.size())) {
    counts[position] = remaining;
    out.push_back({counts});
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    counts[position] = c;
    EnumerateInto(remaining - c, position + 1, counts, out);
  }
}

double LogMultinomial(std::span<const int> counts, std::span<const double> p) {
  int n = 0;
  double log_prob = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    n += counts[j];
    log_prob -= std::lgamma(counts[j] + 1.0);
    if (counts[j] > 0) log_prob += counts[j] * std::log(p[j]);
  }
  return log_prob + std::lgamma(n + 1.0);
}

absl::Status CheckOutput(std::span<const double> y, const Workload& w) {
  if (static_cast<int>(y.size()) != w.num_queries()) {
    return absl::InvalidArgumentError(
        absl::StrCat("output has ", y.size(), " coordinates, workload has ",
                     w.num_queries(), " queries"));
  }
  for (double v : y) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("output coordinates must be finite");
    }
  }
  return absl::OkStatus();
}

// Uniform draw from the prior class: alpha everywhere plus the remaining mass
// split by a flat Dirichlet, or entirely on one class when `vertex` is set.
std::vector<double> DrawPrior(const PriorClass& prior_class, bool vertex,
                              Rng& rng) {
  const int k = prior_class.num_classes();
  std::vector<double> p(k, prior_class.alpha());
  const double excess = prior_class.excess_mass();
  if (vertex) {
    p[rng.UniformInt(k)] += excess;
    return p;
  }
  std::vector<double> gaps(k);
  double total = 0.0;
  for (double& g : gaps) {
    g = -std::log1p(-rng.Uniform01());
    total += g;
  }
  for (int j = 0; j < k; ++j) p[j] += excess * gaps[j] / total;
  return p;
}

HistogramState DrawHistogram(std::span<const double> p, int n, Rng& rng) {
  HistogramState h{std::vector<int>(p.size(), 0)};
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform01();
    double cumulative = 0.0;
    std::size_t cls = p.size() - 1;
    for (std::size_t j = 0; j < p.size(); ++j) {
      cumulative += p[j];
      if (u < cumulative) {
        cls = j;
        break;
      }
    }
    ++h.counts[cls];
  }
  return h;
}

}  // namespace

absl::StatusOr<ProductPrior> ProductPrior::Create(int n, std::vector<double> p,
                                                  double alpha_floor) {
  const int k = static_cast<int>(p.size());
  if (n < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("number of records must be nonnegative, got ", n));
  }
  if (k < 2) return absl::InvalidArgumentError("prior needs k >= 2 classes");
  if (!(alpha_floor > 0) || alpha_floor * k > 1.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha floor must lie in (0, 1/k], got ", alpha_floor));
  }
  CompensatedSum total;
  for (int j = 0; j < k; ++j) {
    if (!(p[j] >= alpha_floor)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "p[", j, "] = ", p[j], " is below the floor ", alpha_floor));
    }
    total.Add(p[j]);
  }
  if (std::fabs(total.Total() - 1.0) > kProbabilitySumTol) {
    return absl::InvalidArgumentError(
        absl::StrCat("probabilities sum to ", total.Total(), ", not 1"));
  }
  return ProductPrior(n, std::move(p), alpha_floor);
}

absl::StatusOr<std::vector<HistogramState>> EnumerateHistograms(int n, int k) {
  if (n < 0 || k < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n >= 0 and k >= 2, got n=", n, " k=", k));
  }
  if (CountHistograms(n, k, kEnumerationCap) > kEnumerationCap) {
    return absl::ResourceExhaustedError(
        absl::StrCat("EnumerationTooLarge: more than ", kEnumerationCap,
                     " histograms for n=", n, " k=", k));
  }
  std::vector<HistogramState> out;
  std::vector<int> counts(k, 0);
  EnumerateInto(n, 0, counts, out);
  return out;
}

absl::StatusOr<double> HistogramProb(const HistogramState& h,
                                     const ProductPrior& prior) {
  if (static_cast<int>(h.counts.size()) != prior.num_classes()) {
    return absl::InvalidArgumentError(
        absl::StrCat("histogram has ", h.counts.size(), " classes, prior has ",
                     prior.num_classes()));
  }
  int n = 0;
  for (int c : h.counts) {
    if (c < 0) return absl::InvalidArgumentError("negative histogram count");
    n += c;
  }
  if (n != prior.num_records()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "histogram holds ", n, " records, prior has ", prior.num_records()));
  }
  return std::exp(LogMultinomial(h.counts, prior.probabilities()));
}

absl::StatusOr<LeakageModel> LeakageModel::Create(const Workload& w, double b,
                                                  const ProductPrior& prior) {
  if (!(b > 0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise scale b must be positive and finite, got ", b));
  }
  if (prior.num_classes() != w.num_classes()) {
    return absl::InvalidArgumentError(
        absl::StrCat("prior has k=", prior.num_classes(), " but workload has ",
                     w.num_classes(), " classes"));
  }
  const int n = prior.num_records();
  const int k = w.num_classes();
  auto full = EnumerateHistograms(n, k);
  if (!full.ok()) return full.status();

  LeakageModel model(
      w.num_queries(), k, b,
      {prior.probabilities().begin(), prior.probabilities().end()});
  auto component = [&](const std::vector<int>& counts) {
    const std::vector<double> x(counts.begin(), counts.end());
    return Component{LogMultinomial(counts, prior.probabilities()), w.Apply(x)};
  };
  for (const HistogramState& h : *full)
    model.full_.push_back(component(h.counts));

  if (n >= 1) {
    auto rest = EnumerateHistograms(n - 1, k);
    if (!rest.ok()) return rest.status();
    model.conditional_.resize(k);
    for (int r = 0; r < k; ++r) {
      for (const HistogramState& h : *rest) {
        Component c = component(h.counts);
        for (int l = 0; l < w.num_queries(); ++l) c.mean[l] += w.weight(l, r);
        model.conditional_[r].push_back(std::move(c));
      }
    }
  }
  return model;
}

double LeakageModel::LogMixture(const std::vector<Component>& components,
                                std::span<const double> y) const {
  const double log_norm = -m_ * std::log(2.0 * b_);
  std::vector<double> terms;
  terms.reserve(components.size());
  for (const Component& c : components) {
    double distance = 0.0;
    for (int l = 0; l < m_; ++l) distance += std::fabs(y[l] - c.mean[l]);
    terms.push_back(c.log_weight + log_norm - distance / b_);
  }
  return LogSumExp(terms);
}

double LeakageModel::LogOutputDensity(std::span<const double> y) const {
  return LogMixture(full_, y);
}

double LeakageModel::LogConditionalDensity(std::span<const double> y,
                                           int r) const {
  return LogMixture(conditional_[r], y);
}

double LeakageModel::PointwiseLeakage(std::span<const double> y) const {
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < k_; ++r) {
    if (p_[r] > 0) best = std::max(best, LogConditionalDensity(y, r));
  }
  return best - LogOutputDensity(y);
}

absl::StatusOr<double> OutputDensity(std::span<const double> y,
                                     const Workload& w, double b,
                                     const ProductPrior& prior) {
  if (absl::Status s = CheckOutput(y, w); !s.ok()) return s;
  auto model = LeakageModel::Create(w, b, prior);
  if (!model.ok()) return model.status();
  return std::exp(model->LogOutputDensity(y));
}

absl::StatusOr<double> ConditionalDensity(std::span<const double> y,
                                          const Workload& w, double b,
                                          const ProductPrior& prior, int r) {
  if (absl::Status s = CheckOutput(y, w); !s.ok()) return s;
  if (prior.num_records() < 1) {
    return absl::InvalidArgumentError("conditioning on a record needs n >= 1");
  }
  if (r < 0 || r >= w.num_classes()) {
    return absl::OutOfRangeError(absl::StrCat("class ", r, " out of range"));
  }
  auto model = LeakageModel::Create(w, b, prior);
  if (!model.ok()) return model.status();
  return std::exp(model->LogConditionalDensity(y, r));
}

absl::StatusOr<double> PointwiseLeakage(std::span<const double> y,
                                        const Workload& w, double b,
                                        const ProductPrior& prior) {
  if (absl::Status s = CheckOutput(y, w); !s.ok()) return s;
  if (prior.num_records() < 1) {
    return absl::InvalidArgumentError("leakage of a record needs n >= 1");
  }
  auto model = LeakageModel::Create(w, b, prior);
  if (!model.ok()) return model.status();
  return model->PointwiseLeakage(y);
}

absl::StatusOr<std::vector<double>> ExtremeOutputs(const Workload& w, int n,
                                                   const RowSubset& subset,
                                                   double margin) {
  if (subset.universe_size() != w.num_queries()) {
    return absl::OutOfRangeError(
        absl::StrCat("row subset covers ", subset.universe_size(),
                     " rows, workload has ", w.num_queries()));
  }
  if (n < 0 || !(margin > 0)) {
    return absl::InvalidArgumentError("need n >= 0 and a positive margin");
  }
  std::vector<double> y(w.num_queries());
  for (int l = 0; l < w.num_queries(); ++l) {
    const auto row = w.query(l);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    y[l] = subset.contains(l) ? n * *lo - margin : n * *hi + margin;
  }
  return y;
}

absl::StatusOr<std::vector<double>> SampleMechanism(const HistogramState& h,
                                                    const Workload& w, double b,
                                                    std::uint64_t seed) {
  if (!(b > 0) || !std::isfinite(b)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise scale b must be positive and finite, got ", b));
  }
  if (static_cast<int>(h.counts.size()) != w.num_classes()) {
    return absl::InvalidArgumentError("histogram and workload disagree on k");
  }
  const std::vector<double> x(h.counts.begin(), h.counts.end());
  std::vector<double> y = w.Apply(x);
  Rng rng(seed);
  for (double& v : y) v += rng.Laplace(b);
  return y;
}

absl::StatusOr<CertifyReport> CertifyBound(const Workload& w, double b,
                                           const PriorClass& prior_class, int n,
                                           int trials, std::uint64_t seed,
                                           const ExactBoundOptions& options) {
  if (n < 1 || trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("certification needs n >= 1 and trials >= 1, got n=", n,
                     " trials=", trials));
  }
  auto bound = ExactPmlBound(w, b, prior_class, options);
  if (!bound.ok()) return bound.status();
  // Fail fast on the enumeration cap before looping.
  if (auto probe = EnumerateHistograms(n, w.num_classes()); !probe.ok()) {
    return probe.status();
  }

  const int m = w.num_queries();
  std::vector<double> row_min(m), row_max(m);
  double widest = 0.0;
  for (int l = 0; l < m; ++l) {
    const auto row = w.query(l);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    row_min[l] = n * *lo;
    row_max[l] = n * *hi;
    widest = std::max(widest, row_max[l] - row_min[l]);
  }
  const double box_extent = 4.0 * b + widest;

  CertifyReport report{
      .trials = trials,
      .max_leakage_nats = -std::numeric_limits<double>::infinity(),
      .bound_nats = bound->value,
      .seed = seed,
      .worst_excess_nats = -std::numeric_limits<double>::infinity()};
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    auto prior = ProductPrior::Create(
        n, DrawPrior(prior_class, t % 2 == 0, rng), prior_class.alpha());
    if (!prior.ok()) return prior.status();
    auto model = LeakageModel::Create(w, b, *prior);
    if (!model.ok()) return model.status();

    std::vector<double> y;
    if ((t / 2) % 2 == 0) {
      const HistogramState h = DrawHistogram(prior->probabilities(), n, rng);
      auto sample = SampleMechanism(h, w, b, rng.NextU64());
      if (!sample.ok()) return sample.status();
      y = *std::move(sample);
    } else {
      y.resize(m);
      for (int l = 0; l < m; ++l) {
        y[l] = rng.UniformInt(2) == 1
                   ? rng.Uniform(row_min[l] - box_extent, row_min[l])
                   : rng.Uniform(row_max[l], row_max[l] + box_extent);
      }
    }
    const double leakage = model->PointwiseLeakage(y);
    report.max_leakage_nats = std::max(report.max_leakage_nats, leakage);
    report.worst_excess_nats =
        std::max(report.worst_excess_nats, leakage - bound->value);
    if (leakage > bound->value + kDominanceSlack) ++report.violations;
  }

  const auto& witness = std::get<SubsetWitness>(bound->witness);
  const RowSubset subset = RowSubset::FromMask(witness.mask, m);
  auto coefficients = SubsetCoefficients(w, subset);
  if (!coefficients.ok()) return coefficients.status();
  auto extremal = BuildExtremalPrior(*coefficients, prior_class);
  if (!extremal.ok()) return extremal.status();
  auto prior =
      ProductPrior::Create(n, *std::move(extremal), prior_class.alpha());
  if (!prior.ok()) return prior.status();
  auto model = LeakageModel::Create(w, b, *prior);
  if (!model.ok()) return model.status();
  auto y = ExtremeOutputs(w, n, subset, /*margin=*/1.0);
  if (!y.ok()) return y.status();
  report.attainment_gap_nats = bound->value - model->PointwiseLeakage(*y);
  return report;
}

}  // namespace pmlbound::oracle
