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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace pmlbound::cli {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "pmlbound");
  std::ostringstream out, err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Lines(const std::string& text) {
  return absl::StrSplit(text, '\n', absl::SkipEmpty());
}

std::vector<std::string> Fields(const std::string& line) {
  return absl::StrSplit(line, ',');
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

double ToDouble(const std::string& s) {
  double v = NAN;
  EXPECT_TRUE(absl::SimpleAtod(s, &v)) << s;
  return v;
}

TEST(ParseRealTest, DecimalsAndFractions) {
  EXPECT_EQ(*ParseReal("0.25"), 0.25);
  EXPECT_EQ(*ParseReal(" 1e-3 "), 1e-3);
  EXPECT_EQ(*ParseReal("1/8"), 0.125);
  EXPECT_FALSE(ParseReal("").ok());
  EXPECT_FALSE(ParseReal("abc").ok());
  EXPECT_FALSE(ParseReal("1/0").ok());
  EXPECT_FALSE(ParseReal("1/2/3").ok());
}

TEST(GridSpecTest, LinearAndLog) {
  auto lin = ParseGridSpec("0.1:2.2:30:lin");
  ASSERT_TRUE(lin.ok());
  auto values = lin->Values();
  ASSERT_EQ(values.size(), 30u);
  EXPECT_EQ(values.front(), 0.1);
  EXPECT_EQ(values.back(), 2.2);
  EXPECT_NEAR(values[1], 0.1 + 2.1 / 29, 1e-15);
  auto log = ParseGridSpec("1e-4:1/8:50:log");
  ASSERT_TRUE(log.ok());
  values = log->Values();
  EXPECT_EQ(values.back(), 0.125);
  EXPECT_NEAR(values[1] / values[0], values[2] / values[1], 1e-12);
}

TEST(GridSpecTest, RejectsMalformed) {
  EXPECT_FALSE(ParseGridSpec("0.1:2.2:30").ok());
  EXPECT_FALSE(ParseGridSpec("0.1:2.2:1:lin").ok());
  EXPECT_FALSE(ParseGridSpec("0.1:2.2:x:lin").ok());
  EXPECT_FALSE(ParseGridSpec("0.1:2.2:5:cubic").ok());
  EXPECT_FALSE(ParseGridSpec("0:1:5:log").ok());
}

TEST(ResolveWorkloadTest, Families) {
  EXPECT_EQ(ResolveWorkload("histogram:4")->num_classes(), 4);
  EXPECT_EQ(ResolveWorkload("identity:3")->num_queries(), 3);
  EXPECT_EQ(*ResolveWorkload("haar:8"), *MakeHaarWorkload(8));
  EXPECT_EQ(*ResolveWorkload("range:8"), *MakeRangeWorkload(8, 8, 0));
  EXPECT_EQ(*ResolveWorkload("range:6:3:9"), *MakeRangeWorkload(6, 3, 9));
  EXPECT_FALSE(ResolveWorkload("haar:6").ok());
  EXPECT_FALSE(ResolveWorkload("wavelet:8").ok());
  EXPECT_FALSE(ResolveWorkload("histogram").ok());
  EXPECT_FALSE(ResolveWorkload("@/nonexistent.csv").ok());
}

TEST(RunConfigTest, HashIgnoresOutputPath) {
  RunConfig a;
  a.command = "bound";
  a.workload = "haar:8";
  RunConfig b = a;
  b.out = "elsewhere.csv";
  EXPECT_EQ(a.Hash(), b.Hash());
  EXPECT_EQ(a.Hash().size(), 16u);
  b.seed = 1;
  EXPECT_NE(a.Hash(), b.Hash());
}

TEST(CliTest, NoSubcommandIsUsageError) {
  Outcome o = RunCli({});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_THAT(o.err, StartsWith("error: code=USAGE message="));
  EXPECT_EQ(Lines(o.err).size(), 1u);
}

TEST(CliTest, UnknownFlagIsUsageError) {
  Outcome o = RunCli({"bound", "--bogus", "1"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_THAT(o.err, StartsWith("error: code=USAGE"));
}

TEST(CliTest, VersionAndHelp) {
  Outcome v = RunCli({"--version"});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_EQ(v.out, "0.1.0\n");
  Outcome h = RunCli({"--help"});
  EXPECT_EQ(h.code, kExitOk);
  EXPECT_THAT(h.out, HasSubstr("sweep-alpha"));
}

TEST(CliTest, GenHaarMatchesWorkload) {
  Outcome o = RunCli({"gen", "--workload", "haar:8"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 9u);
  EXPECT_THAT(lines[0],
              StartsWith("# pmlbound 0.1.0 command=gen config_hash="));
  EXPECT_EQ(lines[2], "1,1,1,1,-1,-1,-1,-1");
  EXPECT_EQ(lines[5], "1,-1,0,0,0,0,0,0");
  auto parsed = ParseWorkloadCsv(o.out);
  ASSERT_TRUE(parsed.ok());
  EXPECT_EQ(*parsed, *MakeHaarWorkload(8));
}

TEST(CliTest, GenOutputIsReadableAsWorkload) {
  const std::string path = TempPath("range.csv");
  ASSERT_EQ(RunCli({"gen", "--workload", "range:8:5:3", "--out", path}).code,
            kExitOk);
  Outcome o = RunCli(
      {"bound", "--workload", "@" + path, "--alpha", "0.1", "--kind", "dp"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const double dp = DpEpsilon(*MakeRangeWorkload(8, 5, 3), 1.0)->value;
  EXPECT_EQ(ToDouble(Fields(Lines(o.out)[2])[1]), dp);
}

TEST(CliTest, BoundIdentityValue) {
  Outcome o = RunCli(
      {"bound", "--workload", "histogram:8", "--alpha", "1/8", "--b", "1"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[1],
            "kind,value_nats,alpha,b,witness,argmin_class,"
            "argmax_class");
  auto exact = Fields(lines[2]);
  EXPECT_EQ(exact[0], "exact_pml");
  EXPECT_NEAR(ToDouble(exact[1]), -std::log(0.125 + 0.875 * std::exp(-2.0)),
              1e-12);
  EXPECT_NEAR(ToDouble(exact[1]), 1.41297, 1e-5);
  EXPECT_EQ(Fields(lines[4])[0], "dp");
  EXPECT_EQ(ToDouble(Fields(lines[4])[1]), 2.0);
  EXPECT_EQ(Fields(lines[4])[2], "");
  EXPECT_NEAR(ToDouble(Fields(lines[5])[1]), std::log(8.0), 1e-15);
}

TEST(CliTest, BoundNeedsAlpha) {
  Outcome o = RunCli({"bound", "--workload", "haar:8"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_THAT(o.err, HasSubstr("--alpha"));
}

TEST(CliTest, BoundRejectsAlphaAboveOneOverK) {
  Outcome o = RunCli({"bound", "--workload", "haar:8", "--alpha", "0.2"});
  EXPECT_EQ(o.code, kExitUsage);
}

TEST(CliTest, SubsetExplosionIsNumericError) {
  Outcome o = RunCli({"bound", "--workload", "range:4:25:1", "--alpha", "0.1",
                      "--kind", "exact_pml"});
  EXPECT_EQ(o.code, kExitNumeric);
  EXPECT_THAT(o.err, StartsWith("error: code=RESOURCE_EXHAUSTED"));
  EXPECT_THAT(o.err, HasSubstr("SubsetExplosion"));
  Outcome raised = RunCli({"bound", "--workload", "range:4:21:1", "--alpha",
                           "0.1", "--kind", "exact_pml", "--subset-cap", "21"});
  EXPECT_EQ(raised.code, kExitOk) << raised.err;
}

TEST(CliTest, CalibrateHaar) {
  Outcome o = RunCli({"calibrate", "--workload", "haar:8", "--alpha", "0.125",
                      "--epsilon", "1", "--kind", "exact_pml", "--kind", "dp"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 4u);
  auto exact = Fields(lines[2]);
  EXPECT_EQ(exact[0], "exact_pml");
  EXPECT_LE(ToDouble(exact[3]), 1.0);
  EXPECT_GE(ToDouble(exact[3]), 1.0 - 1e-6);
  EXPECT_EQ(exact[5], "true");
  EXPECT_EQ(ToDouble(Fields(lines[3])[2]), 6.0);
}

TEST(CliTest, CalibrateRejectsTrivial) {
  Outcome o = RunCli(
      {"calibrate", "--alpha", "0.1", "--epsilon", "1", "--kind", "trivial"});
  EXPECT_EQ(o.code, kExitUsage);
}

TEST(CliTest, CertifyIdentity) {
  Outcome o =
      RunCli({"certify", "--workload", "histogram:2", "--alpha", "0.3", "--b",
              "1", "--n", "2", "--trials", "2000", "--seed", "5"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_THAT(lines[0], HasSubstr("seed=5"));
  EXPECT_EQ(lines[1],
            "trials,violations,max_leakage_nats,bound_nats,"
            "attainment_gap_nats,seed");
  auto f = Fields(lines[2]);
  EXPECT_EQ(f[0], "2000");
  EXPECT_EQ(f[1], "0");
  EXPECT_LE(std::fabs(ToDouble(f[4])), 1e-9);
  EXPECT_EQ(f[5], "5");
}

TEST(CliTest, CertifyEnumerationTooLarge) {
  Outcome o = RunCli({"certify", "--workload", "histogram:8", "--alpha", "0.1",
                      "--n", "40", "--trials", "10"});
  EXPECT_EQ(o.code, kExitNumeric);
  EXPECT_THAT(o.err, HasSubstr("EnumerationTooLarge"));
}

TEST(CliTest, SweepAlphaShape) {
  Outcome o = RunCli({"sweep-alpha", "--workload", "haar:8", "--alpha-grid",
                      "1e-4:1/8:50:log"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 52u);
  EXPECT_THAT(lines[1], StartsWith("alpha,exact_pml_nats,simplified_pml_nats,"
                                   "dp_nats,trivial_nats"));
  double previous = INFINITY;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto f = Fields(lines[i]);
    const double exact = ToDouble(f[1]);
    EXPECT_LE(exact, previous + 1e-12);
    EXPECT_LE(exact, ToDouble(f[2]) + 1e-12);
    EXPECT_LE(ToDouble(f[2]), ToDouble(f[3]));
    previous = exact;
  }
}

TEST(CliTest, SweepAlphaRejectsGridBeyondOneOverK) {
  Outcome o = RunCli({"sweep-alpha", "--workload", "haar:8", "--alpha-grid",
                      "0.01:0.5:5:lin"});
  EXPECT_EQ(o.code, kExitUsage);
}

TEST(CliTest, SweepEpsilonShape) {
  Outcome o =
      RunCli({"sweep-epsilon", "--workload", "haar:8", "--alpha", "1/8"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  auto lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 32u);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    auto f = Fields(lines[i]);
    const double eps = ToDouble(f[0]);
    EXPECT_LE(ToDouble(f[1]), ToDouble(f[2]));
    EXPECT_LE(ToDouble(f[2]), ToDouble(f[3]));
    EXPECT_NEAR(ToDouble(f[3]), 6 / eps, 1e-12 * 6 / eps);
    if (eps >= std::log(8.0)) EXPECT_EQ(ToDouble(f[1]), 0.0);
  }
}

TEST(CliTest, SweepsAreByteIdentical) {
  for (const std::string cmd : {"sweep-alpha", "sweep-epsilon"}) {
    const std::string a = TempPath(cmd + "_a.csv");
    const std::string b = TempPath(cmd + "_b.csv");
    ASSERT_EQ(RunCli({cmd, "--workload", "range:8", "--out", a}).code, kExitOk);
    ASSERT_EQ(RunCli({cmd, "--workload", "range:8", "--out", b}).code, kExitOk);
    const std::string first = ReadFile(a);
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, ReadFile(b));
  }
}

TEST(CliTest, ParallelSweepMatchesSerial) {
  Outcome serial = RunCli({"sweep-alpha", "--workload", "haar:8"});
  setenv("PMLBOUND_WORKERS", "3", 1);
  Outcome parallel = RunCli({"sweep-alpha", "--workload", "haar:8"});
  unsetenv("PMLBOUND_WORKERS");
  ASSERT_EQ(serial.code, kExitOk);
  EXPECT_EQ(serial.out, parallel.out);
}

TEST(CliTest, ConfigFileSuppliesValuesAndFlagsOverride) {
  const std::string path = TempPath("bound.json");
  std::ofstream(path) << R"({"command": "bound", "workload": "haar:8",
      "alpha": 0.125, "b": 2.0, "kind": ["dp"]})";
  Outcome o = RunCli({"bound", "--config", path});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(ToDouble(Fields(Lines(o.out)[2])[1]), 3.0);
  Outcome overridden = RunCli({"bound", "--config", path, "--b", "3"});
  ASSERT_EQ(overridden.code, kExitOk) << overridden.err;
  EXPECT_EQ(ToDouble(Fields(Lines(overridden.out)[2])[1]), 2.0);
  EXPECT_NE(Lines(o.out)[0], Lines(overridden.out)[0]);
}

TEST(CliTest, ConfigFileRejectsUnknownKey) {
  const std::string path = TempPath("unknown.json");
  std::ofstream(path) << R"({"workload": "haar:8", "colour": "blue"})";
  Outcome o = RunCli({"bound", "--config", path, "--alpha", "0.1"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_THAT(o.err, HasSubstr("colour"));
}

TEST(CliTest, ConfigFileRejectsOtherCommand) {
  const std::string path = TempPath("other.json");
  std::ofstream(path) << R"({"command": "certify"})";
  EXPECT_EQ(RunCli({"bound", "--config", path, "--alpha", "0.1"}).code,
            kExitUsage);
}

TEST(CliTest, ConfigFileRejectsMalformedJson) {
  const std::string path = TempPath("bad.json");
  std::ofstream(path) << "{not json";
  EXPECT_EQ(RunCli({"bound", "--config", path, "--alpha", "0.1"}).code,
            kExitUsage);
}

TEST(CliTest, MetadataRecordsSeedAndGenerator) {
  Outcome o =
      RunCli({"certify", "--alpha", "0.3", "--trials", "10", "--seed", "42"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_THAT(Lines(o.out)[0], HasSubstr("seed=42 rng=mt19937_64"));
}

TEST(CliTest, UnwritableOutputIsReported) {
  Outcome o = RunCli({"gen", "--out", "/nonexistent/dir/w.csv"});
  EXPECT_NE(o.code, kExitOk);
  EXPECT_THAT(o.err, StartsWith("error: code="));
}

}  // namespace
}  // namespace pmlbound::cli
