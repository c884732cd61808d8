// Copyright 2026 The causal-ot Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "causal_ot/json_io.hpp"
#include "cli.hpp"

namespace causal_ot::cli {
namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

TEST(Cli, ExitCodesOnFixtures) {
  EXPECT_EQ(run_cli({"solve", "fixtures/s2.json"}).code, kOk);
  EXPECT_EQ(run_cli({"dual", "fixtures/s2.json"}).code, kOk);
  EXPECT_EQ(run_cli({"bb", "fixtures/d1.json"}).code, kOk);
  EXPECT_EQ(run_cli({"interpolate", "fixtures/s2.json"}).code, kOk);
  EXPECT_EQ(run_cli({"cci-check", "fixtures/jump_path.json"}).code, kOk);
  EXPECT_EQ(run_cli({"speed", "fixtures/jump_path.json"}).code, kOk);
  EXPECT_EQ(run_cli({"solve", "fixtures/past_target.json"}).code, kInfeasible);
  EXPECT_EQ(run_cli({"feasible", "fixtures/past_target.json"}).code, kInfeasible);
  EXPECT_EQ(run_cli({"bb", "fixtures/past_target.json"}).code, kInfeasible);
  EXPECT_EQ(run_cli({"hopflax", "fixtures/chain.json"}).code, kViolation);
  EXPECT_EQ(run_cli({"solve", "fixtures/bad_schema.json"}).code, kParseError);
  EXPECT_EQ(run_cli({"frobnicate", "fixtures/s2.json"}).code, kParseError);
  EXPECT_EQ(run_cli({"solve", "fixtures/chain.json"}).code, kParseError);
}

TEST(Cli, WorstExitCodeWinsAcrossFiles) {
  const Invocation r = run_cli({"solve", "fixtures/s2.json", "fixtures/past_target.json", "--jobs", "2"});
  EXPECT_EQ(r.code, kInfeasible);
  EXPECT_NE(r.out.find("value  2.82842712475"), std::string::npos);
}

TEST(Cli, ErrorsAreLineAnchored) {
  const Invocation r = run_cli({"solve", "fixtures/bad_schema.json"});
  EXPECT_EQ(r.err.rfind("fixtures/bad_schema.json:4:", 0), 0u) << r.err;
}

TEST(Cli, JsonReportRoundTripsBitStable) {
  const Invocation r = run_cli({"solve", "--json", "fixtures/s2.json"});
  ASSERT_EQ(r.code, kOk);
  const io::json j = io::json::parse(r.out);
  const io::SolveReport rep = io::solve_report_from_json(j);
  EXPECT_EQ(io::to_json(rep).dump(2) + "\n", r.out);
  EXPECT_NEAR(rep.value, 2 * std::sqrt(2.0), 1e-12);

  const Invocation inf = run_cli({"solve", "--json", "fixtures/past_target.json"});
  const io::SolveReport ir = io::solve_report_from_json(io::json::parse(inf.out));
  EXPECT_EQ(ir.value, kNegInf);
}

TEST(Cli, SeedReproducibility) {
  const Invocation a = run_cli({"cci-check", "--json", "--seed", "7", "fixtures/s2.json"});
  const Invocation b = run_cli({"cci-check", "--json", "--seed", "7", "fixtures/s2.json"});
  const Invocation c = run_cli({"cci-check", "--json", "--seed", "8", "fixtures/s2.json"});
  EXPECT_EQ(a.code, kOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, OutDirSeries) {
  const auto dir = std::filesystem::temp_directory_path() / "causal_ot_cli_test";
  std::filesystem::remove_all(dir);
  EXPECT_EQ(run_cli({"bb", "--out-dir", dir.string(), "fixtures/s2.json"}).code, kOk);
  std::ifstream csv(dir / "bb_series.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("t,speed,integrand,residual_time", 0), 0u);
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 9u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, GridOverride) {
  const Invocation r = run_cli({"interpolate", "--grid", "2", "fixtures/s2.json"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("t=0.5: 0.5@(1, -1) 0.5@(1, 1)"), std::string::npos) << r.out;
}

}  // namespace
}  // namespace causal_ot::cli
