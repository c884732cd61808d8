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

#include "causal_ot/measures.hpp"

#include <cmath>

#include "causal_ot/transport.hpp"

namespace causal_ot {

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw InvalidArgument("a measure needs at least one atom");
  double total = 0.0;
  for (auto& a : atoms) {
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw InvalidArgument("atom weights must be positive and finite");
    }
    total += a.weight;
    const std::size_t k = find(a.location);
    if (k < atoms_.size()) {
      atoms_[k].weight += a.weight;
    } else {
      atoms_.push_back(std::move(a));
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("atom weights must sum to 1 (got " + std::to_string(total) + ")");
  }
}

DiscreteMeasure DiscreteMeasure::dirac(Location loc) {
  return DiscreteMeasure({Atom{std::move(loc), 1.0}});
}

std::vector<Location> DiscreteMeasure::locations() const {
  std::vector<Location> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.location);
  return out;
}

std::vector<double> DiscreteMeasure::weights() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.weight);
  return out;
}

std::size_t DiscreteMeasure::find(const Location& loc) const {
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (atoms_[k].location == loc) return k;
  }
  return atoms_.size();
}

void DiscreteMeasure::validate(const SpacetimeModel& model) const {
  for (const auto& a : atoms_) model.validate(a.location);
}

void CausalPlan::validate(const SpacetimeModel& model) const {
  const std::size_t n = source.size(), m = target.size();
  if (matrix.size() != n) throw InvalidArgument("plan rows must match source atoms");
  std::vector<double> cols(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != m) throw InvalidArgument("plan columns must match target atoms");
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double v = matrix[i][j];
      if (v < 0.0 || !std::isfinite(v)) throw InvalidArgument("plan entries must be nonnegative");
      if (v > 0.0 && model.ell(source.location(i), target.location(j)) < 0.0) {
        throw InvalidArgument("plan moves mass between causally unrelated atoms " +
                              to_string(source.location(i)) + " -> " +
                              to_string(target.location(j)));
      }
      row += v;
      cols[j] += v;
    }
    if (std::abs(row - source.weight(i)) > 1e-10) throw InvalidArgument("plan row sum mismatch");
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(cols[j] - target.weight(j)) > 1e-10) {
      throw InvalidArgument("plan column sum mismatch");
    }
  }
}

void validate_time_grid(const std::vector<double>& times) {
  if (times.empty()) throw InvalidArgument("time grid is empty");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0 && times[k] <= 1.0)) throw InvalidArgument("grid times must lie in [0, 1]");
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw InvalidArgument("grid times must be strictly increasing");
    }
  }
}

std::vector<double> uniform_grid(std::size_t intervals) {
  if (intervals == 0) throw InvalidArgument("grid needs at least one interval");
  std::vector<double> t(intervals + 1);
  for (std::size_t k = 0; k <= intervals; ++k) {
    t[k] = static_cast<double>(k) / static_cast<double>(intervals);
  }
  return t;
}

std::size_t grid_index(const std::vector<double>& times, double t) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - t) <= 1e-12) return k;
  }
  throw InvalidArgument("time " + std::to_string(t) + " is not on the grid");
}

void SampledCurve::validate(const SpacetimeModel& model) const {
  validate_time_grid(times);
  if (points.size() != times.size()) throw InvalidArgument("curve needs one point per grid time");
  for (std::size_t k = 0; k + 1 < points.size(); ++k) {
    if (!model.causally_before(points[k], points[k + 1])) {
      throw NotCausallyRelated("curve is not causal between samples " + std::to_string(k) +
                               " and " + std::to_string(k + 1));
    }
  }
}

void LiftedPlan::validate(const SpacetimeModel& model) const {
  validate_time_grid(times);
  if (curves.empty()) throw InvalidArgument("lifted plan has no curves");
  double total = 0.0;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    if (!(curves[c].weight > 0.0)) throw InvalidArgument("curve weights must be positive");
    total += curves[c].weight;
    curve(c).validate(model);
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("curve weights must sum to 1");
}

void MeasurePath::validate(const SpacetimeModel& model) const {
  validate_time_grid(times);
  if (measures.size() != times.size()) throw InvalidArgument("path needs one measure per grid time");
  for (const auto& m : measures) m.validate(model);
  for (std::size_t k = 0; k + 1 < measures.size(); ++k) {
    if (!feasible(model, measures[k], measures[k + 1]).feasible) {
      throw NotCausallyRelated("path is not causal on interval " + std::to_string(k));
    }
  }
}

DiscreteMeasure marginal_at(const LiftedPlan& plan, std::size_t k) {
  std::vector<Atom> atoms;
  atoms.reserve(plan.curves.size());
  for (const auto& c : plan.curves) atoms.push_back({c.points.at(k), c.weight});
  return DiscreteMeasure(std::move(atoms));
}

DiscreteMeasure marginal(const LiftedPlan& plan, double t) {
  return marginal_at(plan, grid_index(plan.times, t));
}

MeasurePath marginal_path(const LiftedPlan& plan) {
  MeasurePath path;
  path.times = plan.times;
  for (std::size_t k = 0; k < plan.times.size(); ++k) path.measures.push_back(marginal_at(plan, k));
  return path;
}

double curve_speed(const SpacetimeModel& model, const SampledCurve& curve, std::size_t k) {
  if (k + 1 >= curve.times.size()) throw InvalidArgument("interval index out of range");
  const double dt = curve.times[k + 1] - curve.times[k];
  return model.ell(curve.points[k], curve.points[k + 1]) / dt;
}

namespace {

// dt * u_p(ell_p / dt) = dt^{1-p} * u_p(ell_p), written through the solver
// value to avoid a round trip through the inverse of u_p.
double interval_action(const SpacetimeModel& model, const MeasurePath& path, const Exponent& e,
                       std::size_t k) {
  const double dt = path.times[k + 1] - path.times[k];
  const SolveResult r = solve_primal(model, path.measures[k], path.measures[k + 1], e);
  if (r.value == kNegInf) return kNegInf;
  return std::pow(dt, 1.0 - e.p) * r.value;
}

}  // namespace

double path_speed(const SpacetimeModel& model, const MeasurePath& path, const Exponent& e,
                  std::size_t k) {
  if (k + 1 >= path.times.size()) throw InvalidArgument("interval index out of range");
  const double dt = path.times[k + 1] - path.times[k];
  const SolveResult r = solve_primal(model, path.measures[k], path.measures[k + 1], e);
  if (!r.causally_feasible) throw NotCausallyRelated("path interval is infeasible");
  return r.ell_p / dt;
}

double path_action(const SpacetimeModel& model, const MeasurePath& path, const Exponent& e) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    const double a = interval_action(model, path, e, k);
    if (a == kNegInf) return kNegInf;
    total += a;
  }
  return total;
}

double curvewise_action(const SpacetimeModel& model, const LiftedPlan& plan, const Exponent& e) {
  double total = 0.0;
  for (std::size_t c = 0; c < plan.curves.size(); ++c) {
    const SampledCurve curve = plan.curve(c);
    for (std::size_t k = 0; k + 1 < plan.times.size(); ++k) {
      const double dt = plan.times[k + 1] - plan.times[k];
      const double u = u_p(e, curve_speed(model, curve, k));
      if (u == kNegInf) return kNegInf;
      total += plan.curves[c].weight * dt * u;
    }
  }
  return total;
}

}  // namespace causal_ot
