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

#ifndef CAUSAL_OT_TRANSPORT_HPP_
#define CAUSAL_OT_TRANSPORT_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "causal_ot/measures.hpp"
#include "causal_ot/spacetime.hpp"

namespace causal_ot {

class DualityGap : public Error {
  using Error::Error;
};

// Exponent p < 1, p != 0, and its Hoelder conjugate q = p / (p - 1).
struct Exponent {
  double p = 0.5;
  double q = -1.0;

  static Exponent of(double p);
  Exponent conjugate() const { return of(q); }
  bool positive() const { return p > 0.0; }
};

// (1/r) z^r on (0, inf) extended to [-inf, inf] by the sign-of-r conventions
// at 0 and +inf. `r` may be p or q.
double utility(double r, double z);
inline double u_p(const Exponent& e, double z) { return utility(e.p, z); }
inline double u_q(const Exponent& e, double z) { return utility(e.q, z); }

// Inverse of u_p on the attainable range: value 0 with p < 0 maps to +inf,
// -inf maps to -inf.
double ell_p_from_value(const Exponent& e, double value);

struct FeasibilityResult {
  bool feasible = false;
  double flow = 0.0;
  // Witness coupling when feasible.
  std::optional<CausalPlan> witness;
  // Source atom indices A with nu(reachable targets) < mu(A) when infeasible.
  std::vector<std::size_t> cut;
  double cut_source_mass = 0.0;
  double cut_target_mass = 0.0;
};

// Max-flow test of mu <= nu. With `strict`, only timelike pairs are edges.
FeasibilityResult feasible(const SpacetimeModel& model, const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu, bool strict = false);

struct PotentialPair {
  std::vector<double> phi;  // per source atom
  std::vector<double> psi;  // per target atom
};

struct SolveResult {
  double value = kNegInf;
  double ell_p = kNegInf;
  std::optional<CausalPlan> plan;
  std::optional<PotentialPair> potentials;
  // Set when no admissible plan exists; source-atom indices.
  std::vector<std::size_t> cut;
  bool causally_feasible = false;
  std::size_t pivots = 0;

  bool infeasible() const { return !plan.has_value(); }
};

// c_ij = u_p(ell(x_i, y_j)), -inf when the pair is not admissible.
std::vector<std::vector<double>> cost_matrix(const SpacetimeModel& model,
                                             const DiscreteMeasure& mu,
                                             const DiscreteMeasure& nu, const Exponent& e);

// Exact maximisation of sum pi_ij c_ij over causal couplings.
SolveResult solve_primal(const SpacetimeModel& model, const DiscreteMeasure& mu,
                         const DiscreteMeasure& nu, const Exponent& e);

// phi^{c_p}(y) = max_{x in domain, x <= y} phi(x) + u_p(ell(x, y)), for each y in `at`.
std::vector<double> cp_transform_fwd(const SpacetimeModel& model,
                                     std::span<const Location> domain,
                                     std::span<const double> phi,
                                     std::span<const Location> at, const Exponent& e);
std::vector<double> cp_transform_fwd(const SpacetimeModel& model, std::span<const Location> set,
                                     std::span<const double> phi, const Exponent& e);

// psi^{c_p}(x) = min_{y in domain} psi(y) - u_p(ell(x, y)); non-admissible
// pairs contribute +inf.
std::vector<double> cp_transform_bwd(const SpacetimeModel& model,
                                     std::span<const Location> domain,
                                     std::span<const double> psi,
                                     std::span<const Location> at, const Exponent& e);
std::vector<double> cp_transform_bwd(const SpacetimeModel& model, std::span<const Location> set,
                                     std::span<const double> psi, const Exponent& e);

// Largest L with f(y) - f(x) >= L ell(x, y) over timelike pairs of the set;
// +inf when there is no timelike pair.
double steepness(const SpacetimeModel& model, std::span<const Location> set,
                 std::span<const double> f);

// A 1-steep function: the time coordinate on Minkowski space, and
// max_{z <= x} ell(z, x) on a finite causal space.
double time_function(const SpacetimeModel& model, const Location& x);

struct SteepenedDual {
  double epsilon = 0.0;
  double dual_value = 0.0;
  double shift = 0.0;
  double bound = 0.0;
  double steepness = 0.0;
  bool ok = false;
};

struct DualityReport {
  double primal = kNegInf;
  double dual = kNegInf;              // from the solver's potentials
  double transform_dual = kNegInf;    // from (phi, phi^{c_p})
  double gap = 0.0;
  double max_feasibility_violation = 0.0;
  double max_slackness_violation = 0.0;
  double time_bound = 0.0;            // max |t| over the emerald
  std::vector<SteepenedDual> steepened;
  bool feasibility_ok = false;
  bool slackness_ok = false;
  bool gap_ok = false;
  bool steepening_ok = false;

  bool ok() const { return feasibility_ok && slackness_ok && gap_ok && steepening_ok; }
  std::string summary() const;
};

// Non-throwing duality certificate used by reports.
DualityReport duality_report(const SpacetimeModel& model, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, const Exponent& e,
                             const SolveResult& result, double tol = 1e-9);

// Throws DualityGap when any check of duality_report fails.
DualityReport verify_duality(const SpacetimeModel& model, const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, const Exponent& e,
                             const SolveResult& result, double tol = 1e-9);

}  // namespace causal_ot

#endif  // CAUSAL_OT_TRANSPORT_HPP_
