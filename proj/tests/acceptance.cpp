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

// Acceptance run. One line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "causal_ot/dynamics.hpp"
#include "causal_ot/hopflax.hpp"
#include "causal_ot/json_io.hpp"
#include "causal_ot/transport.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace causal_ot {
namespace {

using testing::Rng;

struct Verdict {
  bool pass = true;
  std::string detail;
};

const std::vector<double>& coords(const Location& l) { return std::get<Event>(l).coords; }

// u_p(ell(x_i, y_j)) from the oracles.
std::vector<std::vector<double>> ref_costs(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                           double p) {
  std::vector<std::vector<double>> c(mu.size(), std::vector<double>(nu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const double ell = testing::ref_ell(coords(mu.location(i)), coords(nu.location(j)));
      c[i][j] = ell == kNegInf ? kNegInf : testing::ref_utility(p, ell);
    }
  return c;
}

std::string str(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Verdict strong_duality() {
  Rng rng(1001);
  const double ps[] = {0.5, 0.75, -1.0, -2.0};
  double worst = 0.0, slowest = 0.0;
  std::size_t bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const double p = ps[trial % 4];
    const std::size_t dim = (trial / 4) % 2 ? 3 : 1;
    const auto model = SpacetimeModel::minkowski(dim);
    const auto pr = testing::random_feasible_pair(rng, dim, testing::uniform_int(rng, 3, 15),
                                                  testing::uniform_int(rng, 3, 15));
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = solve_primal(model, pr.mu, pr.nu, Exponent::of(p));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, secs);
    if (r.infeasible() || !r.potentials) {
      ++bad;
      continue;
    }
    const auto& pot = *r.potentials;
    double dual = 0.0;
    for (std::size_t j = 0; j < pr.nu.size(); ++j) dual += pot.psi[j] * pr.nu.weight(j);
    for (std::size_t i = 0; i < pr.mu.size(); ++i) dual -= pot.phi[i] * pr.mu.weight(i);
    // The potentials only certify a dual value if they are dual feasible.
    const auto c = ref_costs(pr.mu, pr.nu, p);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c[i].size(); ++j)
        if (c[i][j] > kNegInf)
          infeasibility = std::max(infeasibility, c[i][j] - (pot.psi[j] - pot.phi[i]));
    const double scale = std::max(1.0, std::abs(r.value));
    const double rel = std::max(std::abs(r.value - dual), infeasibility) / scale;
    worst = std::max(worst, rel);
    if (rel > 1e-9 || secs >= 1.0) ++bad;
  }
  return {bad == 0, "200 instances, worst relative gap " + str(worst) + ", slowest solve " +
                        str(slowest) + " s, failures " + std::to_string(bad)};
}

Verdict brute_force() {
  Rng rng(1002);
  const double ps[] = {0.5, 0.75, -1.0, -2.0};
  double worst = 0.0;
  std::size_t bad = 0, infeasible = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double p = ps[trial % 4];
    const std::size_t dim = trial % 3 == 0 ? 2 : 1;
    const std::size_t n = testing::uniform_int(rng, 1, 4), m = testing::uniform_int(rng, 1, 4);
    const auto pr = trial % 2 ? testing::random_pair(rng, dim, n, m)
                              : testing::random_feasible_pair(rng, dim, n, m);
    const SolveResult r = solve_primal(SpacetimeModel::minkowski(dim), pr.mu, pr.nu,
                                       Exponent::of(p));
    const double ref =
        testing::brute_force_transport(pr.mu.weights(), pr.nu.weights(),
                                       ref_costs(pr.mu, pr.nu, p));
    if (ref == kNegInf || r.value == kNegInf) {
      if (ref != r.value) ++bad;
      ++infeasible;
      continue;
    }
    worst = std::max(worst, std::abs(ref - r.value));
    if (!(std::abs(ref - r.value) <= 1e-10)) ++bad;
  }
  return {bad == 0, "100 instances (" + std::to_string(infeasible) + " with value -inf), " +
                        "worst difference " + str(worst) + ", failures " + std::to_string(bad)};
}

DiscreteMeasure jump_measure(double t) {
  const Event x{0, 0}, y{2, 0};
  if (t == 0.0) return DiscreteMeasure::dirac(x);
  if (t == 1.0) return DiscreteMeasure::dirac(y);
  return DiscreteMeasure({{x, 1 - t}, {y, t}});
}

Verdict jump_path_closed_form() {
  Rng rng(1003);
  const auto model = SpacetimeModel::minkowski(1);
  double worst = 0.0;
  std::size_t bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    double s = testing::uniform(rng, 0, 1), t = testing::uniform(rng, 0, 1);
    if (s > t) std::swap(s, t);
    if (s == t) t = std::nextafter(t, 1.0);
    const auto mu = jump_measure(s), nu = jump_measure(t);
    const double half = solve_primal(model, mu, nu, Exponent::of(0.5)).value;
    const double err = std::abs(half - 2 * std::sqrt(2.0) * (t - s));
    worst = std::max(worst, err);
    if (!(err <= 1e-12)) ++bad;
    if (solve_primal(model, mu, nu, Exponent::of(-1.0)).value != kNegInf) ++bad;
  }
  return {bad == 0, "50 pairs, worst error " + str(worst) + ", failures " + std::to_string(bad)};
}

Verdict benamou_brenier() {
  Rng rng(1004);
  const double ps[] = {0.5, 0.75, -1.0, -2.0};
  std::size_t merge_free = 0, merged = 0, merges = 0, bad = 0;
  double worst_equal = 0.0, worst_jensen = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto model = SpacetimeModel::minkowski(dim);
    const bool equal = trial % 2 == 0;
    const std::size_t n = testing::uniform_int(rng, 1, 6);
    const auto pr = testing::random_feasible_pair(rng, dim, n,
                                                  equal ? n : testing::uniform_int(rng, 1, 6),
                                                  equal);
    const auto battery = standard_battery(dim, static_cast<std::uint64_t>(trial));
    const BBReport r = verify_benamou_brenier(model, pr.mu, pr.nu, Exponent::of(ps[trial % 4]),
                                              uniform_grid(8), battery);
    if (r.infeasible) {
      ++bad;
      continue;
    }
    if (r.merges == 0) {
      ++merge_free;
      worst_equal = std::max(worst_equal, std::abs(r.gap));
      if (!(std::abs(r.gap) <= 1e-8)) ++bad;
    } else {
      ++merged;
      merges += r.merges;
      worst_jensen = std::max(worst_jensen, r.static_value - r.dynamic_action);
      if (!(r.dynamic_action >= r.static_value - 1e-8)) ++bad;
    }
  }
  return {bad == 0, std::to_string(merge_free) + " merge-free (worst |gap| " + str(worst_equal) +
                        "), " + std::to_string(merged) + " with merges (" +
                        std::to_string(merges) + " merge events, worst static - dynamic " +
                        str(worst_jensen) + "), failures " + std::to_string(bad)};
}

Verdict kuwada() {
  Rng rng(1005);
  const double ps[] = {0.5, 0.75, -1.0};
  const double lambdas[] = {0.3, 0.7, 0.9};
  std::size_t runs = 0, bad = 0;
  double min_slack = kPosInf, min_strict = kPosInf;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto model = SpacetimeModel::minkowski(dim);
    const std::size_t n = testing::uniform_int(rng, 1, 5);
    const auto pr = testing::random_feasible_pair(rng, dim, n, n, true);
    const Exponent e = Exponent::of(ps[trial % 3]);
    const SolveResult s = solve_primal(model, pr.mu, pr.nu, e);
    const Interpolation g = geodesic_path(model, *s.plan, uniform_grid(8));
    const VelocitySeries v = barycentric_velocity(model, g.lifted);
    const auto battery = standard_battery(dim, static_cast<std::uint64_t>(trial));
    for (double lambda : lambdas) {
      ++runs;
      KuwadaReport k;
      try {
        k = check_kuwada_direction(model, g.path, v.scaled(lambda), e, battery);
      } catch (const CCIPrereqFailed&) {
        ++bad;
        continue;
      }
      min_slack = std::min(min_slack, k.slack);
      if (!(k.slack >= -1e-8)) ++bad;
      if (lambda <= 0.7) {
        min_strict = std::min(min_strict, k.slack);
        if (!(k.slack > 1e-3)) ++bad;
      }
    }
  }
  return {bad == 0, std::to_string(runs) + " damped pairs, min slack " + str(min_slack) +
                        ", min slack at lambda <= 0.7 " + str(min_strict) + ", failures " +
                        std::to_string(bad)};
}

Verdict hopf_lax() {
  Rng rng(1006);
  const auto model = SpacetimeModel::minkowski(1);
  const char* names[] = {"maximizer-bound", "steepness", "monotonicity", "convergence",
                         "young-bound", "transform"};
  std::vector<std::size_t> counts(6, 0);
  std::size_t checks = 0, min_pts = 1000, max_pts = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto lf = testing::aligned_lattice_field(rng, trial % 2 == 0);
    min_pts = std::min(min_pts, lf.points.size());
    max_pts = std::max(max_pts, lf.points.size());
    const HopfLaxField field(model, lf.points, lf.interior, lf.f, lf.L, Exponent::of(lf.p),
                             lf.times);
    const SemigroupReport r = check_semigroup_properties(field);
    checks += r.checks;
    for (std::size_t i = 0; i < 6; ++i) counts[i] += r.count(names[i]);
  }
  std::string detail = "500 fields of " + std::to_string(min_pts) + ".." +
                       std::to_string(max_pts) + " points, " + std::to_string(checks) +
                       " checks, violations:";
  bool pass = true;
  for (std::size_t i = 0; i < 6; ++i) {
    detail += std::string(" ") + names[i] + "=" + std::to_string(counts[i]);
    pass = pass && counts[i] == 0;
  }
  return {pass, detail};
}

Verdict hj_fixture() {
  const auto model = SpacetimeModel::minkowski(1);
  const std::vector<Location> pts{Event{0, 0}, Event{2, 1}};
  const std::vector<double> f{0.0, -100.0};
  const double ell = std::sqrt(3.0);
  double worst = 0.0;
  bool pass = true;
  for (double p : {0.5, -1.0}) {
    const double q = p / (p - 1);
    for (double t : {0.05, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      const HopfLaxValue v = q_eval(model, pts, f, t, 1, Exponent::of(p));
      // Q_t = t^{1-p} u_p(ell); slope of Q_t at y is (ell / t)^{p-1}.
      const double dq = (1 - p) * std::pow(t, -p) * testing::ref_utility(p, ell);
      const double slope = std::pow(v.lmax / t, p - 1);
      const double residual = dq + testing::ref_utility(q, slope);
      const double value_err =
          std::abs(v.value - std::pow(t, 1 - p) * testing::ref_utility(p, ell));
      const double lib = std::abs(analytic_hj_residual(v.lmax, t, Exponent::of(p)));
      worst = std::max({worst, std::abs(residual), value_err, lib});
      pass = pass && std::abs(residual) <= 1e-9 && value_err <= 1e-9 && lib <= 1e-9;
    }
  }
  return {pass, "p in {1/2, -1}, 6 times each, worst residual " + str(worst)};
}

Verdict geometry() {
  Rng rng(1008);
  std::size_t bad_tri = 0, bad_dual = 0, bad_curve = 0;
  double worst_tri = 0.0, worst_dual = 0.0, worst_curve = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto model = SpacetimeModel::minkowski(dim);
    std::vector<double> x(dim + 1);
    for (double& c : x) c = testing::uniform(rng, -1, 1);
    auto step = [&](const std::vector<double>& from) {
      auto d = testing::causal_step(rng, dim, testing::uniform(rng, 0, 1), 0, 1);
      for (std::size_t i = 0; i <= dim; ++i) d[i] += from[i];
      return d;
    };
    const auto y = step(x);
    const auto z = step(y);
    const double lhs = time_separation(model, Event(x), Event(z));
    const double rhs =
        time_separation(model, Event(x), Event(y)) + time_separation(model, Event(y), Event(z));
    worst_tri = std::max(worst_tri, rhs - lhs);
    if (!(lhs >= rhs - 1e-12)) ++bad_tri;
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = trial % 2 ? 3 : 1;
    auto w = testing::random_causal_covector(rng, dim, 0.95);
    const double scale = testing::uniform(rng, 0.2, 3);
    for (double& c : w) c *= scale;
    const double err = std::abs(dual_norm(w) - testing::hyperboloid_dual_norm(w));
    worst_dual = std::max(worst_dual, err);
    if (!(err <= 1e-6)) ++bad_dual;
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    std::vector<double> x(dim + 1);
    for (double& c : x) c = testing::uniform(rng, -1, 1);
    auto y = testing::causal_step(rng, dim, testing::uniform(rng, 0, 0.9), 0.5, 2);
    for (std::size_t i = 0; i <= dim; ++i) y[i] += x[i];
    const double lib = time_separation(SpacetimeModel::minkowski(dim), Event(x), Event(y));
    const double err = std::abs(lib - testing::curve_max_ell(x, y, 3, rng));
    worst_curve = std::max(worst_curve, err);
    if (!(err <= 1e-6)) ++bad_curve;
  }
  return {bad_tri + bad_dual + bad_curve == 0,
          "triangle 1e5 (worst excess " + str(worst_tri) + ", failures " +
              std::to_string(bad_tri) + "), dual norm 1e3 (worst " + str(worst_dual) +
              ", failures " + std::to_string(bad_dual) + "), curve oracle 1e2 (worst " +
              str(worst_curve) + ", failures " + std::to_string(bad_curve) + ")"};
}

Verdict feasibility() {
  Rng rng(1009);
  std::size_t bad = 0, yes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + trial % 2;
    const auto pr = testing::random_pair(rng, dim, testing::uniform_int(rng, 1, 6),
                                         testing::uniform_int(rng, 1, 6));
    std::vector<std::vector<bool>> edge(pr.mu.size(), std::vector<bool>(pr.nu.size()));
    for (std::size_t i = 0; i < pr.mu.size(); ++i)
      for (std::size_t j = 0; j < pr.nu.size(); ++j)
        edge[i][j] = testing::ref_ell(coords(pr.mu.location(i)), coords(pr.nu.location(j))) >= 0;
    const bool ref = testing::hall_feasible(pr.mu.weights(), pr.nu.weights(), edge);
    const bool got = feasible(SpacetimeModel::minkowski(dim), pr.mu, pr.nu).feasible;
    yes += ref;
    if (ref != got) ++bad;
  }
  const io::Problem past = io::load_problem("fixtures/past_target.json");
  const bool past_ok = !feasible(past.model, *past.mu0, *past.mu1).feasible;

  const auto r11 = SpacetimeModel::minkowski(1);
  const DiscreteMeasure mu({{Event{0, -2}, 0.5}, {Event{0, 2}, 0.5}});
  const DiscreteMeasure nu({{Event{1, -2}, 0.5}, {Event{1, 2}, 0.5}});
  const FeasibilityResult cross = feasible(r11, mu, nu);
  bool cross_ok = cross.feasible && cross.witness.has_value();
  if (cross_ok) {
    const auto& w = cross.witness->matrix;
    cross_ok = w[0][0] == 0.5 && w[0][1] == 0.0 && w[1][0] == 0.0 && w[1][1] == 0.5;
  }
  return {bad == 0 && past_ok && cross_ok,
          "200 instances (" + std::to_string(yes) + " feasible), disagreements " +
              std::to_string(bad) + "; past-target " + (past_ok ? "infeasible" : "WRONG") +
              "; spacelike-cross " + (cross_ok ? "identity only" : "WRONG")};
}

Verdict cci_equality() {
  Rng rng(1010);
  double worst_linear = 0.0, lo = kPosInf, hi = 0.0;
  std::size_t ratios = 0, skipped = 0, bad = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 1 + trial % 3;
    const auto model = SpacetimeModel::minkowski(dim);
    const auto pr = testing::random_feasible_pair(rng, dim, testing::uniform_int(rng, 1, 5),
                                                  testing::uniform_int(rng, 1, 5));
    const SolveResult s = solve_primal(model, pr.mu, pr.nu, Exponent::of(0.5));
    const auto battery = standard_battery(dim, static_cast<std::uint64_t>(trial));
    auto run = [&](std::size_t n) {
      const Interpolation g = geodesic_path(model, *s.plan, uniform_grid(n));
      return check_cci(model, g.path, barycentric_velocity(model, g.lifted), battery);
    };
    const CCIReport coarse = run(32), fine = run(64);
    for (std::size_t i = 0; i < battery.size(); ++i) {
      if (battery[i].is_linear()) {
        for (const CCIReport* r : {&coarse, &fine})
          for (const auto& iv : r->tests[i].intervals) {
            worst_linear = std::max(worst_linear, std::abs(iv.residual));
            if (!(std::abs(iv.residual) <= 1e-9)) ++bad;
          }
        continue;
      }
      const double a = coarse.tests[i].abs_residual_sum, b = fine.tests[i].abs_residual_sum;
      // Below this the sums are rounding noise and the ratio means nothing.
      if (a < 1e-9) {
        ++skipped;
        continue;
      }
      const double ratio = a / b;
      ++ratios;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (!(ratio >= 3.5 && ratio <= 4.5)) ++bad;
    }
  }
  return {bad == 0, "worst linear residual " + str(worst_linear) + "; ramp ratios 32/64 in [" +
                        str(lo) + ", " + str(hi) + "] over " + std::to_string(ratios) +
                        " tests (" + std::to_string(skipped) + " negligible skipped), failures " +
                        std::to_string(bad)};
}

}  // namespace
}  // namespace causal_ot

int main() {
  using causal_ot::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"strong duality", causal_ot::strong_duality},
      {"brute-force optimum", causal_ot::brute_force},
      {"jump path closed form", causal_ot::jump_path_closed_form},
      {"Benamou-Brenier", causal_ot::benamou_brenier},
      {"Kuwada direction", causal_ot::kuwada},
      {"Hopf-Lax properties", causal_ot::hopf_lax},
      {"HJ two-point fixture", causal_ot::hj_fixture},
      {"geometry kernel", causal_ot::geometry},
      {"feasibility oracle", causal_ot::feasibility},
      {"CCI equality case", causal_ot::cci_equality},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %-22s %s  %s\n", i + 1, criteria[i].first,
                v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
