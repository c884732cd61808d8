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

#ifndef CAUSAL_OT_MEASURES_HPP_
#define CAUSAL_OT_MEASURES_HPP_

#include <cstddef>
#include <vector>

#include "causal_ot/spacetime.hpp"

namespace causal_ot {

struct Exponent;

struct Atom {
  Location location;
  double weight = 0.0;
};

// Finitely supported probability measure. Coincident locations (exact
// coordinate equality) are merged at construction, first occurrence wins the
// slot. Weights must be positive and sum to one within 1e-12.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  explicit DiscreteMeasure(std::vector<Atom> atoms);

  static DiscreteMeasure dirac(Location loc);

  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const Location& location(std::size_t i) const { return atoms_[i].location; }
  double weight(std::size_t i) const { return atoms_[i].weight; }
  std::vector<Location> locations() const;
  std::vector<double> weights() const;

  // Index of the atom at `loc`, or size() if absent.
  std::size_t find(const Location& loc) const;

  void validate(const SpacetimeModel& model) const;

 private:
  std::vector<Atom> atoms_;
};

// Coupling of source and target supported on causally related pairs.
struct CausalPlan {
  DiscreteMeasure source;
  DiscreteMeasure target;
  std::vector<std::vector<double>> matrix;

  // Throws InvalidArgument on marginal mismatch (1e-10) or mass on a pair
  // with ell < 0.
  void validate(const SpacetimeModel& model) const;
};

struct SampledCurve {
  std::vector<double> times;
  std::vector<Location> points;

  // points[k] <= points[k+1] and a strictly increasing grid in [0, 1].
  void validate(const SpacetimeModel& model) const;
};

struct WeightedCurve {
  std::vector<Location> points;
  double weight = 0.0;
};

// Probability measure on sampled causal curves sharing one time grid.
struct LiftedPlan {
  std::vector<double> times;
  std::vector<WeightedCurve> curves;

  void validate(const SpacetimeModel& model) const;
  SampledCurve curve(std::size_t c) const { return {times, curves[c].points}; }
};

struct MeasurePath {
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;

  // Checks mu_{t_k} precedes mu_{t_{k+1}} for every k via a feasibility
  // witness.
  void validate(const SpacetimeModel& model) const;
};

// Shared grid checks: nonempty, strictly increasing, inside [0, 1].
void validate_time_grid(const std::vector<double>& times);
std::vector<double> uniform_grid(std::size_t intervals);
std::size_t grid_index(const std::vector<double>& times, double t);

// Pushforward of the curve weights through evaluation at grid time t.
DiscreteMeasure marginal(const LiftedPlan& plan, double t);
DiscreteMeasure marginal_at(const LiftedPlan& plan, std::size_t k);
MeasurePath marginal_path(const LiftedPlan& plan);

// ell(gamma_{t_k}, gamma_{t_{k+1}}) / (t_{k+1} - t_k).
double curve_speed(const SpacetimeModel& model, const SampledCurve& curve, std::size_t k);

// ell_p(mu_{t_k}, mu_{t_{k+1}}) / (t_{k+1} - t_k).
double path_speed(const SpacetimeModel& model, const MeasurePath& path, const Exponent& e,
                  std::size_t k);

// Sum over the path's own grid of dt * u_p(ell_p / dt).
double path_action(const SpacetimeModel& model, const MeasurePath& path, const Exponent& e);

// Sum over curves of weight * sum_k dt * u_p(curve speed).
double curvewise_action(const SpacetimeModel& model, const LiftedPlan& plan, const Exponent& e);

}  // namespace causal_ot

#endif  // CAUSAL_OT_MEASURES_HPP_
