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

#ifndef CAUSAL_OT_DYNAMICS_HPP_
#define CAUSAL_OT_DYNAMICS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causal_ot/measures.hpp"
#include "causal_ot/spacetime.hpp"
#include "causal_ot/transport.hpp"

namespace causal_ot {

class DomainMismatch : public Error {
  using Error::Error;
};
class CCIPrereqFailed : public Error {
  using Error::Error;
};

// Relative slack used when deciding whether a difference vector is causal.
inline constexpr double kCausalSlack = 1e-12;

// norm_g that treats vectors within kCausalSlack of the light cone as null.
double causal_norm(const std::vector<double>& v);
bool nearly_future_causal(const std::vector<double>& v);

struct Interpolation {
  MeasurePath path;
  LiftedPlan lifted;
};

// One straight curve per positive plan entry. Minkowski only.
Interpolation geodesic_path(const SpacetimeModel& model, const CausalPlan& plan,
                            const std::vector<double>& times);

struct VelocityAtom {
  Event at;
  std::vector<double> v;
  double weight = 0.0;
  std::size_t curves = 1;
  // Largest Euclidean norm among the curve velocities averaged into v.
  double speed_bound = 0.0;
};

struct VelocitySeries {
  std::vector<double> times;
  std::vector<std::vector<VelocityAtom>> fields;
  // Grid locations shared by two or more curves, summed over grid times.
  std::size_t merges = 0;

  // Throws InvalidArgument on a non-causal vector and DomainMismatch when a
  // support atom of `path` has no vector.
  void validate(const SpacetimeModel& model, const MeasurePath& path) const;
  // nullptr if absent.
  const VelocityAtom* find(std::size_t k, const Event& x) const;
  VelocitySeries scaled(double lambda) const;
};

// Forward differences per curve (the last grid time reuses the last interval),
// averaged by mass over curves sharing a location.
VelocitySeries barycentric_velocity(const SpacetimeModel& model, const LiftedPlan& plan);

// r(s) = slope0 s + sum_i jump_i width softplus((s - b_i) / width), so
// r' = slope0 + sum_i jump_i sigmoid((s - b_i) / width) lies in
// [slope0, slope0 + sum jump_i].
struct Ramp {
  double slope0 = 0.0;
  std::vector<double> breakpoints;
  std::vector<double> jumps;
  double width = 1.0;

  double value(double s) const;
  double derivative(double s) const;
  double third_derivative_bound() const;
};

class TestFunction {
 public:
  // phi(x) = a(x); throws NonCausalCovector unless a is causal.
  static TestFunction linear(std::vector<double> a);
  // phi(x) = r(a(x)); needs slope0 >= 0, jumps >= 0, width > 0.
  static TestFunction ramp(std::vector<double> a, Ramp r);

  const std::string& name() const { return name_; }
  const std::vector<double>& covector() const { return a_; }
  bool is_linear() const { return !ramp_.has_value(); }

  double value(const Event& x) const;
  // d phi_x(v).
  double differential(const Event& x, const std::vector<double>& v) const;
  // C with |trapezoid error| <= C dt^3 on a straight curve whose velocity has
  // Euclidean norm <= speed.
  double trapezoid_constant(double speed) const;

  TestFunction& named(std::string n) {
    name_ = std::move(n);
    return *this;
  }

 private:
  std::vector<double> a_;
  std::optional<Ramp> ramp_;
  std::string name_;
};

// Time coordinate, the 2n null-ish axis covectors (1, +-e_i)/sqrt(2),
// `random_count` random causal covectors, and each of those composed with one
// ramp. Reproducible from `seed`.
std::vector<TestFunction> standard_battery(std::size_t spatial_dim, std::uint64_t seed,
                                           std::size_t random_count = 10);

struct CCIInterval {
  double t0 = 0.0;
  double t1 = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

struct CCIResult {
  std::string test;
  std::vector<double> phi;   // Phi(t_k)
  std::vector<double> flux;  // integral of d phi(v) against mu_{t_k}
  std::vector<CCIInterval> intervals;
  bool monotone = false;
  bool ok = false;
  double worst = 0.0;        // min residual + tolerance
  double abs_residual_sum = 0.0;
};

struct CCIReport {
  std::vector<CCIResult> tests;
  bool ok() const;
  std::size_t failures() const;
};

// Trapezoid residuals [Phi(t_{k+1}) - Phi(t_k)] - dt (flux_k + flux_{k+1}) / 2,
// passing when >= -(1e-9 + C dt^2) with C from the test's ramp.
CCIReport check_cci(const SpacetimeModel& model, const MeasurePath& path,
                    const VelocitySeries& v, const std::vector<TestFunction>& tests);

// Per grid time, integral of u_p(|v|) against mu_t; -inf if any atom is.
std::vector<double> action_integrand(const SpacetimeModel& model, const MeasurePath& path,
                                     const VelocitySeries& v, const Exponent& e);

// Trapezoid rule over the integrand.
double dynamic_action(const SpacetimeModel& model, const MeasurePath& path,
                      const VelocitySeries& v, const Exponent& e);

struct KuwadaReport {
  double path_action = kNegInf;
  double dynamic_action = kNegInf;
  double slack = 0.0;
  std::vector<double> interval_slack;
  bool ok = false;
};

// Throws CCIPrereqFailed unless (path, v) passes check_cci on `tests`.
KuwadaReport check_kuwada_direction(const SpacetimeModel& model, const MeasurePath& path,
                                    const VelocitySeries& v, const Exponent& e,
                                    const std::vector<TestFunction>& tests,
                                    double tol = 1e-8);

struct BBReport {
  double static_value = kNegInf;
  double dynamic_action = kNegInf;
  double path_action = kNegInf;
  double curvewise_action = kNegInf;
  double gap = 0.0;
  std::size_t merges = 0;
  std::vector<double> times;
  std::vector<double> speeds;     // per interval
  std::vector<double> integrand;  // per grid time
  CCIReport cci;
  bool infeasible = false;
  bool ok = false;
};

// Static solve, geodesic from the optimal plan, barycentric field, action.
// Without merges needs |gap| <= tol, with merges only dynamic >= static - tol.
BBReport verify_benamou_brenier(const SpacetimeModel& model, const DiscreteMeasure& mu0,
                                const DiscreteMeasure& mu1, const Exponent& e,
                                const std::vector<double>& times,
                                const std::vector<TestFunction>& tests, double tol = 1e-8);

}  // namespace causal_ot

#endif  // CAUSAL_OT_DYNAMICS_HPP_
