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

#ifndef CAUSAL_OT_HOPFLAX_HPP_
#define CAUSAL_OT_HOPFLAX_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "causal_ot/spacetime.hpp"
#include "causal_ot/transport.hpp"

namespace causal_ot {

inline constexpr std::size_t kNoPoint = static_cast<std::size_t>(-1);

class PropertyViolation : public Error {
  using Error::Error;
};

// One evaluation of Q_t f(y) = max_{x in E, x <= y} f(x) + t u_p(ell(x, y) / t).
struct HopfLaxValue {
  double value = kNegInf;
  // Maximiser with the largest ell among those within 1e-12 of the max.
  std::size_t argmax = kNoPoint;
  double lmax = kNegInf;
  std::vector<std::size_t> maximizers;
};

// Q_0 is f itself. Returns value -inf with no argmax when p < 0 and y has no
// strict predecessor in E.
HopfLaxValue q_eval(const SpacetimeModel& model, const std::vector<Location>& domain,
                    const std::vector<double>& f, double t, std::size_t y, const Exponent& e);

// Q_t f tabulated on a finite sample E for a grid of times.
class HopfLaxField {
 public:
  // Throws InvalidArgument unless steepness(f) >= L > 0 on E (relative slack
  // 1e-12) and the times increase strictly inside [0, 1].
  HopfLaxField(const SpacetimeModel& model, std::vector<Location> domain,
               std::vector<bool> interior, std::vector<double> f, double steepness_bound,
               Exponent e, std::vector<double> times);

  const SpacetimeModel& model() const { return model_; }
  const std::vector<Location>& domain() const { return domain_; }
  const std::vector<bool>& interior() const { return interior_; }
  const std::vector<double>& f() const { return f_; }
  double steepness_bound() const { return L_; }
  const Exponent& exponent() const { return e_; }
  const std::vector<double>& times() const { return times_; }
  const HopfLaxValue& at(std::size_t t, std::size_t y) const { return table_[t][y]; }
  // Q_{t_k} f over the whole domain.
  std::vector<double> values(std::size_t t) const;

  // t L^{1/(p-1)}: the largest ell a maximiser may have at time t.
  double maximizer_radius(double t, std::optional<double> steepness_override = {}) const;

 private:
  SpacetimeModel model_;
  std::vector<Location> domain_;
  std::vector<bool> interior_;
  std::vector<double> f_;
  double L_;
  Exponent e_;
  std::vector<double> times_;
  std::vector<std::vector<HopfLaxValue>> table_;
};

// True iff every maximiser of Q_t f(y) with ell > 0 has ell <= t L^{1/(p-1)} + 1e-12.
bool check_maximizer_bound(const HopfLaxField& field, std::size_t t, std::size_t y,
                           std::optional<double> steepness_override = {});

struct PropertyFailure {
  std::string property;
  double t = 0.0;
  std::size_t y = kNoPoint;
  double amount = 0.0;
};

struct SemigroupReport {
  std::size_t checks = 0;
  std::vector<PropertyFailure> failures;
  // |u_p(L^{1/(p-1)})| sup |d t^{1-p} / dt| over [min grid time, 1]; reported,
  // never asserted.
  double lipschitz_constant = 0.0;
  // Worst |Q_t - Q_s| / (|t - s| lipschitz_constant) over consecutive grid times.
  double lipschitz_ratio = 0.0;

  bool ok() const { return failures.empty(); }
  std::size_t count(const std::string& property) const;
};

// Verifies on the interior set K and the time grid: maximiser bound, L-steepness
// of Q_t f on K, monotonicity in t with the p-dependent sign, the side of f that
// Q_t f approaches from, the Young bound Q_t f <= f - t u_q(L), and
// Q_1 f = f^{c_p} within 1e-12. Property names: "maximizer-bound", "steepness",
// "monotonicity", "convergence", "young-bound", "transform".
SemigroupReport check_semigroup_properties(const HopfLaxField& field, double tol = 1e-9);

// Throws PropertyViolation naming the first failure.
void require_semigroup_properties(const HopfLaxField& field, double tol = 1e-9);

struct AsymptoticSteepness {
  double value = kPosInf;
  std::vector<double> radii;
  std::vector<double> per_radius;        // +inf where no timelike pair exists
  std::vector<double> radii_without_pairs;
  bool inconclusive = false;
};

// Max over radii of the steepness of f on E intersected with the ball of
// radius r around y (Euclidean on Minkowski, |ell| <= r on finite spaces).
// Radii without timelike pairs are excluded unless `strict`, in which case
// they contribute +inf and mark the estimate inconclusive.
AsymptoticSteepness asymptotic_steepness(const SpacetimeModel& model,
                                         const std::vector<Location>& domain,
                                         const std::vector<double>& f, std::size_t y,
                                         const std::vector<double>& radii, bool strict = false);

struct HJRow {
  double t = 0.0;
  std::size_t y = kNoPoint;
  double q = 0.0;
  std::size_t argmax = kNoPoint;
  double lmax = 0.0;
  double steepness_estimate = 0.0;
  double derivative = 0.0;
  // d/dt Q + u_q(steepness estimate).
  double hj_value = 0.0;
  double tolerance = 0.0;
  // hj_value + tolerance; negative means a flagged violation.
  double slack = 0.0;
  bool passes = false;
  // Steepness estimate >= (Lmax / t)^{p-1}.
  bool lower_bound_holds = false;
};

struct HJReport {
  double step = 0.0;
  std::vector<HJRow> rows;
  std::size_t failures = 0;
  std::size_t lower_bound_failures = 0;
};

// Diagnostic check of d/dt Q_t f(y) + u_q(st_a(Q_t f)(y)) >= 0 on K, at grid
// times with t + h <= 1. The derivative is the forward difference of step h.
// Its tolerance is the gap between the derivative and the forward secant of
// t -> f(x) + t^{1-p} u_p(Lmax) through the recorded maximiser x, which the
// difference quotient always dominates.
HJReport check_hj_inequality(const HopfLaxField& field, double h,
                             const std::vector<double>& radii);

// d/dt of t^{1-p} u_p(lmax) plus u_q((lmax / t)^{p-1}); zero in exact
// arithmetic.
double analytic_hj_residual(double lmax, double t, const Exponent& e);

}  // namespace causal_ot

#endif  // CAUSAL_OT_HOPFLAX_HPP_
