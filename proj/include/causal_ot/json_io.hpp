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

#ifndef CAUSAL_OT_JSON_IO_HPP_
#define CAUSAL_OT_JSON_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "causal_ot/dynamics.hpp"
#include "causal_ot/hopflax.hpp"
#include "causal_ot/measures.hpp"
#include "causal_ot/spacetime.hpp"
#include "causal_ot/transport.hpp"

namespace causal_ot::io {

using json = nlohmann::json;

// A JSON value at `pointer` does not fit the schema.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Syntax or schema error anchored to a 1-based line of the input text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), message_(what), line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  // The message without the line prefix.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

// Infinities travel as the strings "-inf" and "inf".
json number(double v);
double to_number(const json& j, const std::string& where);

json to_json(const Event& e);
Event event_from_json(const json& j, const std::string& where);

json to_json(const SpacetimeModel& m);
SpacetimeModel model_from_json(const json& j, const std::string& where = "");

// Events as arrays; finite-space labels as their name.
json to_json(const SpacetimeModel& m, const Location& loc);
Location location_from_json(const SpacetimeModel& m, const json& j, const std::string& where);

json to_json(const SpacetimeModel& m, const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const SpacetimeModel& m, const json& j,
                                  const std::string& where);

json to_json(const SpacetimeModel& m, const MeasurePath& path);
MeasurePath path_from_json(const SpacetimeModel& m, const json& j, const std::string& where);

json to_json(const SpacetimeModel& m, const LiftedPlan& plan);
LiftedPlan lifted_from_json(const SpacetimeModel& m, const json& j, const std::string& where);

json to_json(const VelocitySeries& v);
VelocitySeries velocity_from_json(const SpacetimeModel& m, const json& j,
                                  const std::string& where);

struct SolveReport {
  double value = kNegInf;
  double ell_p = kNegInf;
  std::vector<std::vector<double>> plan;
  std::vector<double> phi;
  std::vector<double> psi;
  double gap = 0.0;

  friend bool operator==(const SolveReport&, const SolveReport&) = default;
};

SolveReport make_solve_report(const SolveResult& r, const DualityReport* duality);
json to_json(const SolveReport& r);
SolveReport solve_report_from_json(const json& j);

json to_json(const BBReport& r);
json to_json(const CCIReport& r);
json to_json(const DualityReport& r);

struct FieldSpec {
  std::vector<Location> points;
  std::vector<bool> interior;
  std::vector<double> f;
  double L = 1.0;
  std::vector<double> times;
  double h = 1e-3;
  std::vector<double> radii;
};

struct Problem {
  SpacetimeModel model = SpacetimeModel::minkowski(1);
  std::optional<Exponent> exponent;
  std::optional<DiscreteMeasure> mu0;
  std::optional<DiscreteMeasure> mu1;
  std::optional<MeasurePath> path;
  std::optional<LiftedPlan> lifted;
  std::optional<VelocitySeries> velocity;
  std::optional<FieldSpec> field;
  std::optional<std::size_t> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

// Throws ParseError with the line of the offending value.
Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& file);

// 1-based line of the value at each JSON pointer of well-formed text.
std::map<std::string, std::size_t> pointer_lines(const std::string& text);

}  // namespace causal_ot::io

#endif  // CAUSAL_OT_JSON_IO_HPP_
