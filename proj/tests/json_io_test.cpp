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
#include <string>

#include <gtest/gtest.h>

#include "causal_ot/json_io.hpp"
#include "support/generators.hpp"

namespace causal_ot::io {
namespace {

const SpacetimeModel kR11 = SpacetimeModel::minkowski(1);

TEST(Numbers, InfinitiesAsStrings) {
  EXPECT_EQ(number(kNegInf), json("-inf"));
  EXPECT_EQ(number(kPosInf), json("inf"));
  EXPECT_EQ(number(1.5), json(1.5));
  EXPECT_EQ(to_number(json("-inf"), "/v"), kNegInf);
  EXPECT_EQ(to_number(json("inf"), "/v"), kPosInf);
  EXPECT_THROW(to_number(json("nan"), "/v"), SchemaError);
  EXPECT_THROW(to_number(json::array(), "/v"), SchemaError);
}

TEST(RoundTrip, ModelsAndMeasures) {
  const SpacetimeModel fin = SpacetimeModel::finite(
      FiniteCausal({"a", "b", "c"}, {{0, 1, 3}, {kNegInf, 0, 2}, {kNegInf, kNegInf, 0}}));
  for (const SpacetimeModel& m : {kR11, SpacetimeModel::minkowski(3), fin}) {
    const SpacetimeModel back = model_from_json(to_json(m));
    EXPECT_EQ(to_json(back), to_json(m));
  }
  const DiscreteMeasure nu({{Label{0}, 0.25}, {Label{2}, 0.75}});
  const DiscreteMeasure back = measure_from_json(fin, to_json(fin, nu), "/mu");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.location(1), Location(Label{2}));
  EXPECT_EQ(to_json(fin, Location(Label{1})), json("b"));
  EXPECT_THROW(location_from_json(fin, json("zz"), "/x"), SchemaError);
}

TEST(RoundTrip, RandomMeasuresAreBitStable) {
  testing::Rng rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pr = testing::random_pair(rng, 2, 4, 3);
    const auto model = SpacetimeModel::minkowski(2);
    const json j = to_json(model, pr.mu);
    const DiscreteMeasure back = measure_from_json(model, json::parse(j.dump()), "/mu");
    ASSERT_EQ(back.size(), pr.mu.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back.weight(i), pr.mu.weight(i));
      EXPECT_EQ(back.location(i), pr.mu.location(i));
    }
  }
}

TEST(RoundTrip, PathsLiftingsVelocities) {
  LiftedPlan plan{{0.0, 0.5, 1.0},
                  {{{Event{0, 0}, Event{1, 0.25}, Event{2, 0}}, 0.5},
                   {{Event{0, 0}, Event{1, 0.25}, Event{2, 0.5}}, 0.5}}};
  const LiftedPlan lb = lifted_from_json(kR11, json::parse(to_json(kR11, plan).dump()), "/l");
  ASSERT_EQ(lb.curves.size(), 2u);
  EXPECT_EQ(lb.curves[1].points[2], plan.curves[1].points[2]);
  const MeasurePath path = marginal_path(plan);
  const MeasurePath pb = path_from_json(kR11, to_json(kR11, path), "/p");
  EXPECT_EQ(pb.times, path.times);
  EXPECT_EQ(pb.measures[1].size(), 1u);
  const VelocitySeries v = barycentric_velocity(kR11, plan);
  const VelocitySeries vb = velocity_from_json(kR11, to_json(v), "/v");
  ASSERT_EQ(vb.fields.size(), v.fields.size());
  EXPECT_EQ(vb.fields[1][0].v, v.fields[1][0].v);
}

TEST(SolveReport, RoundTripWithInfinities) {
  SolveReport r{kNegInf, kNegInf, {{0.5, 0}, {0, 0.5}}, {0, 1.25}, {3, kNegInf}, 1e-17};
  EXPECT_EQ(solve_report_from_json(json::parse(to_json(r).dump())), r);
  const DiscreteMeasure mu({{Event{0, -1}, 0.5}, {Event{0, 1}, 0.5}});
  const DiscreteMeasure nu({{Event{2, -1}, 0.5}, {Event{2, 1}, 0.5}});
  const Exponent e = Exponent::of(0.5);
  const SolveResult s = solve_primal(kR11, mu, nu, e);
  const DualityReport d = duality_report(kR11, mu, nu, e, s, 1e-9);
  const SolveReport made = make_solve_report(s, &d);
  EXPECT_EQ(solve_report_from_json(json::parse(to_json(made).dump())), made);
}

TEST(Parse, ErrorsCarryLines) {
  const std::string bad_weights =
      "{\n"
      "  \"spacetime\": {\"type\": \"minkowski\", \"dim\": 1},\n"
      "  \"p\": 0.5,\n"
      "  \"mu0\": {\"atoms\": [{\"x\": [0, 0], \"w\": 0.5}]}\n"
      "}\n";
  try {
    parse_problem(bad_weights);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  const std::string bad_dim =
      "{\n  \"spacetime\": {\"type\": \"minkowski\", \"dim\": 1},\n  \"p\": 0.5,\n"
      "  \"mu0\": {\"atoms\": [\n    {\"x\": [0, 0, 0], \"w\": 1}\n  ]}\n}\n";
  try {
    parse_problem(bad_dim);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
  try {
    parse_problem("{\n  \"p\": 0.5,\n  \"mu0\": [1,\n}\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 3u);
  }
  EXPECT_THROW(parse_problem("{\"p\": 1}"), ParseError);
}

TEST(Parse, PointerLines) {
  const auto lines = pointer_lines("{\n  \"a\": 1,\n  \"b\": [\n    2,\n    {\"c\": 3}\n  ]\n}\n");
  EXPECT_EQ(lines.at(""), 1u);
  EXPECT_EQ(lines.at("/a"), 2u);
  EXPECT_EQ(lines.at("/b"), 3u);
  EXPECT_EQ(lines.at("/b/0"), 4u);
  EXPECT_EQ(lines.at("/b/1/c"), 5u);
}

TEST(Parse, Fixtures) {
  const Problem s2 = load_problem("fixtures/s2.json");
  ASSERT_TRUE(s2.mu0 && s2.mu1 && s2.exponent);
  EXPECT_EQ(s2.exponent->p, 0.5);
  EXPECT_EQ(s2.grid, 8u);
  const Problem chain = load_problem("fixtures/chain.json");
  ASSERT_TRUE(chain.field);
  EXPECT_EQ(chain.field->points.size(), 3u);
  EXPECT_EQ(chain.field->radii, (std::vector<double>{2, 1}));
  const Problem ex = load_problem("fixtures/jump_path.json");
  ASSERT_TRUE(ex.path && ex.velocity);
  EXPECT_THROW(load_problem("fixtures/no_such_file.json"), Error);
}

}  // namespace
}  // namespace causal_ot::io
