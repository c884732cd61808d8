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

#include "causal_ot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "causal_ot/max_flow.hpp"
#include "causal_ot/network_simplex.hpp"

namespace causal_ot {

Exponent Exponent::of(double p) {
  if (!std::isfinite(p) || p >= 1.0 || p == 0.0) {
    throw InvalidArgument("exponent p must satisfy p < 1 and p != 0");
  }
  return Exponent{p, p / (p - 1.0)};
}

double utility(double r, double z) {
  if (std::isnan(z)) return z;
  if (z < 0.0) return kNegInf;
  if (z == 0.0) return r < 0.0 ? kNegInf : 0.0;
  if (z == kPosInf) return r < 0.0 ? 0.0 : kPosInf;
  return std::pow(z, r) / r;
}

double ell_p_from_value(const Exponent& e, double value) {
  if (std::isnan(value)) return value;
  if (value == kNegInf) return e.positive() ? kNegInf : 0.0;
  if (e.positive()) {
    if (value < 0.0) throw InvalidArgument("negative value is outside the range of u_p for p > 0");
    if (value == kPosInf) return kPosInf;
    return std::pow(e.p * value, 1.0 / e.p);
  }
  if (value > 0.0) throw InvalidArgument("positive value is outside the range of u_p for p < 0");
  if (value == 0.0) return kPosInf;
  return std::pow(e.p * value, 1.0 / e.p);
}

FeasibilityResult feasible(const SpacetimeModel& model, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, bool strict) {
  mu.validate(model);
  nu.validate(model);
  const std::size_t n = mu.size(), m = nu.size();
  const std::size_t source = 0, sink = n + m + 1;
  MaxFlow graph(n + m + 2);
  for (std::size_t i = 0; i < n; ++i) graph.add_arc(source, 1 + i, mu.weight(i));
  std::vector<std::vector<std::size_t>> edge(n, std::vector<std::size_t>(m, SIZE_MAX));
  std::vector<std::vector<std::size_t>> neighbours(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double l = model.ell(mu.location(i), nu.location(j));
      if (strict ? l > 0.0 : l >= 0.0) {
        edge[i][j] = graph.add_arc(1 + i, 1 + n + j, kPosInf);
        neighbours[i].push_back(j);
      }
    }
  }
  for (std::size_t j = 0; j < m; ++j) graph.add_arc(1 + n + j, sink, nu.weight(j));

  FeasibilityResult result;
  result.flow = graph.solve(source, sink);
  result.feasible = result.flow >= 1.0 - 1e-10;
  if (result.feasible) {
    CausalPlan plan{mu, nu, std::vector<std::vector<double>>(n, std::vector<double>(m, 0.0))};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j : neighbours[i]) plan.matrix[i][j] = std::max(0.0, graph.flow(edge[i][j]));
    }
    result.witness = std::move(plan);
    return result;
  }
  const auto& side = graph.source_side();
  std::vector<bool> hit(m, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!side[1 + i]) continue;
    result.cut.push_back(i);
    result.cut_source_mass += mu.weight(i);
    for (std::size_t j : neighbours[i]) hit[j] = true;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (hit[j]) result.cut_target_mass += nu.weight(j);
  }
  return result;
}

std::vector<std::vector<double>> cost_matrix(const SpacetimeModel& model,
                                             const DiscreteMeasure& mu,
                                             const DiscreteMeasure& nu, const Exponent& e) {
  std::vector<std::vector<double>> c(mu.size(), std::vector<double>(nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      c[i][j] = u_p(e, model.ell(mu.location(i), nu.location(j)));
    }
  }
  return c;
}

SolveResult solve_primal(const SpacetimeModel& model, const DiscreteMeasure& mu,
                         const DiscreteMeasure& nu, const Exponent& e) {
  SolveResult result;
  const FeasibilityResult causal = feasible(model, mu, nu, false);
  result.causally_feasible = causal.feasible;
  if (!causal.feasible) {
    result.cut = causal.cut;
    return result;
  }
  if (!e.positive()) {
    // Null pairs cost -inf for p < 0, so only timelike couplings count.
    const FeasibilityResult timelike = feasible(model, mu, nu, true);
    if (!timelike.feasible) {
      result.cut = timelike.cut;
      result.ell_p = 0.0;
      return result;
    }
  }

  const auto cost = cost_matrix(model, mu, nu, e);
  std::vector<TransportArc> arcs;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (std::isfinite(cost[i][j])) arcs.push_back({i, j, cost[i][j]});
    }
  }
  const TransportSolution sol = solve_transport(mu.weights(), nu.weights(), arcs);
  result.pivots = sol.pivots;
  if (!sol.feasible) {
    throw Error("transport simplex disagrees with the max-flow feasibility verdict");
  }
  CausalPlan plan{mu, nu,
                  std::vector<std::vector<double>>(mu.size(), std::vector<double>(nu.size(), 0.0))};
  double value = 0.0;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    plan.matrix[arcs[a].source][arcs[a].target] = sol.flow[a];
    value += sol.flow[a] * arcs[a].gain;
  }
  result.value = value;
  result.ell_p = ell_p_from_value(e, value);
  result.plan = std::move(plan);
  result.potentials = PotentialPair{sol.source_potential, sol.target_potential};
  return result;
}

std::vector<double> cp_transform_fwd(const SpacetimeModel& model,
                                     std::span<const Location> domain,
                                     std::span<const double> phi,
                                     std::span<const Location> at, const Exponent& e) {
  if (domain.size() != phi.size()) throw InvalidArgument("phi must be defined on every domain point");
  std::vector<double> out(at.size(), kNegInf);
  for (std::size_t k = 0; k < at.size(); ++k) {
    for (std::size_t i = 0; i < domain.size(); ++i) {
      const double l = model.ell(domain[i], at[k]);
      if (l < 0.0) continue;
      out[k] = std::max(out[k], phi[i] + u_p(e, l));
    }
  }
  return out;
}

std::vector<double> cp_transform_fwd(const SpacetimeModel& model, std::span<const Location> set,
                                     std::span<const double> phi, const Exponent& e) {
  return cp_transform_fwd(model, set, phi, set, e);
}

std::vector<double> cp_transform_bwd(const SpacetimeModel& model,
                                     std::span<const Location> domain,
                                     std::span<const double> psi,
                                     std::span<const Location> at, const Exponent& e) {
  if (domain.size() != psi.size()) throw InvalidArgument("psi must be defined on every domain point");
  std::vector<double> out(at.size(), kPosInf);
  for (std::size_t k = 0; k < at.size(); ++k) {
    for (std::size_t j = 0; j < domain.size(); ++j) {
      const double c = u_p(e, model.ell(at[k], domain[j]));
      if (c == kNegInf) continue;
      out[k] = std::min(out[k], psi[j] - c);
    }
  }
  return out;
}

std::vector<double> cp_transform_bwd(const SpacetimeModel& model, std::span<const Location> set,
                                     std::span<const double> psi, const Exponent& e) {
  return cp_transform_bwd(model, set, psi, set, e);
}

double steepness(const SpacetimeModel& model, std::span<const Location> set,
                 std::span<const double> f) {
  if (set.size() != f.size()) throw InvalidArgument("f must be defined on every point");
  double best = kPosInf;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (i == j) continue;
      const double l = model.ell(set[i], set[j]);
      if (l > 0.0) best = std::min(best, (f[j] - f[i]) / l);
    }
  }
  return best;
}

double time_function(const SpacetimeModel& model, const Location& x) {
  model.validate(x);
  if (model.is_minkowski()) return std::get<Event>(x).time();
  const FiniteCausal& space = model.finite_space();
  const std::size_t k = std::get<Label>(x).index;
  double t = 0.0;
  for (std::size_t z = 0; z < space.size(); ++z) t = std::max(t, space.at(z, k));
  return t;
}

namespace {

double dot(std::span<const double> w, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
  return s;
}

double transform_dual_value(const SpacetimeModel& model, const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, const Exponent& e,
                            std::span<const double> phi) {
  const auto src = mu.locations();
  const auto tgt = nu.locations();
  const auto phic = cp_transform_fwd(model, src, phi, tgt, e);
  return dot(nu.weights(), phic) - dot(mu.weights(), phi);
}

double emerald_time_bound(const SpacetimeModel& model, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu) {
  if (model.is_minkowski()) {
    std::vector<Event> pts;
    for (const auto& a : mu.atoms()) pts.push_back(std::get<Event>(a.location));
    for (const auto& a : nu.atoms()) pts.push_back(std::get<Event>(a.location));
    const Diamond d = bounding_emerald(model, pts);
    return std::max(std::abs(d.lo.time()), std::abs(d.hi.time()));
  }
  double bound = 0.0;
  for (std::size_t k = 0; k < model.finite_space().size(); ++k) {
    bound = std::max(bound, std::abs(time_function(model, Label{k})));
  }
  return bound;
}

}  // namespace

std::string DualityReport::summary() const {
  std::ostringstream os;
  os.precision(12);
  os << "primal=" << primal << " dual=" << dual << " gap=" << gap
     << " feasibility_violation=" << max_feasibility_violation
     << " slackness_violation=" << max_slackness_violation;
  for (const auto& s : steepened) {
    os << " [eps=" << s.epsilon << " shift=" << s.shift << " bound=" << s.bound
       << (s.ok ? " ok]" : " FAIL]");
  }
  return os.str();
}

DualityReport duality_report(const SpacetimeModel& model, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, const Exponent& e,
                             const SolveResult& result, double tol) {
  if (!result.plan || !result.potentials || result.value == kNegInf) {
    throw InvalidArgument("duality needs a feasible solve with potentials");
  }
  DualityReport r;
  const auto& phi = result.potentials->phi;
  const auto& psi = result.potentials->psi;
  const auto cost = cost_matrix(model, mu, nu, e);
  const double scale = std::max(1.0, std::abs(result.value));

  r.primal = result.value;
  r.dual = dot(nu.weights(), psi) - dot(mu.weights(), phi);
  r.gap = r.primal - r.dual;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      if (cost[i][j] == kNegInf) continue;
      const double slack = psi[j] - phi[i] - cost[i][j];
      r.max_feasibility_violation = std::max(r.max_feasibility_violation, -slack);
      if (result.plan->matrix[i][j] > 0.0) {
        r.max_slackness_violation = std::max(r.max_slackness_violation, std::abs(slack));
      }
    }
  }
  const double pair_scale = std::max(1.0, std::max(*std::max_element(psi.begin(), psi.end()),
                                                   -*std::min_element(phi.begin(), phi.end())));
  r.feasibility_ok = r.max_feasibility_violation <= tol * pair_scale;
  r.slackness_ok = r.max_slackness_violation <= tol * pair_scale;
  r.gap_ok = std::abs(r.gap) <= tol * scale;

  r.transform_dual = transform_dual_value(model, mu, nu, e, phi);
  r.gap_ok = r.gap_ok && std::abs(r.transform_dual - r.primal) <= tol * scale;

  r.time_bound = emerald_time_bound(model, mu, nu);
  r.steepening_ok = true;
  std::vector<double> t(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) t[i] = time_function(model, mu.location(i));
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    SteepenedDual s;
    s.epsilon = eps;
    std::vector<double> phi_eps(phi);
    for (std::size_t i = 0; i < phi.size(); ++i) phi_eps[i] += eps * t[i];
    s.dual_value = transform_dual_value(model, mu, nu, e, phi_eps);
    s.shift = s.dual_value - r.transform_dual;
    s.bound = 2.0 * eps * r.time_bound;
    const auto src = mu.locations();
    s.steepness = steepness(model, src, phi_eps);
    s.ok = s.shift <= s.bound + tol * scale && s.dual_value >= r.primal - tol * scale;
    r.steepening_ok = r.steepening_ok && s.ok;
    r.steepened.push_back(s);
  }
  return r;
}

DualityReport verify_duality(const SpacetimeModel& model, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, const Exponent& e,
                             const SolveResult& result, double tol) {
  DualityReport r = duality_report(model, mu, nu, e, result, tol);
  if (!r.ok()) throw DualityGap(r.summary());
  return r;
}

}  // namespace causal_ot
