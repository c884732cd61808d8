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

#include "causal_ot/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace causal_ot {

namespace {

double euclid(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double spatial(const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

double softplus(double z) {
  return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void require_minkowski(const SpacetimeModel& model, const char* what) {
  if (!model.is_minkowski()) {
    throw CapabilityMissing(std::string(what) + " needs a Minkowski spacetime");
  }
}

}  // namespace

bool nearly_future_causal(const std::vector<double>& v) {
  if (v.empty()) return false;
  return v[0] >= spatial(v) - kCausalSlack * (std::abs(v[0]) + spatial(v));
}

double causal_norm(const std::vector<double>& v) {
  if (!nearly_future_causal(v)) return kNegInf;
  const double n = norm_g(v);
  return n == kNegInf ? 0.0 : n;
}

Interpolation geodesic_path(const SpacetimeModel& model, const CausalPlan& plan,
                            const std::vector<double>& times) {
  require_minkowski(model, "geodesic interpolation");
  validate_time_grid(times);
  if (times.front() != 0.0 || times.back() != 1.0) {
    throw InvalidArgument("geodesic grids must start at 0 and end at 1");
  }
  plan.validate(model);
  Interpolation out;
  out.lifted.times = times;
  for (std::size_t i = 0; i < plan.source.size(); ++i) {
    const Event& x = std::get<Event>(plan.source.location(i));
    for (std::size_t j = 0; j < plan.target.size(); ++j) {
      const double w = plan.matrix[i][j];
      if (!(w > 0.0)) continue;
      const Event& y = std::get<Event>(plan.target.location(j));
      WeightedCurve c;
      c.weight = w;
      for (double t : times) c.points.push_back(geodesic_point(model, x, y, t));
      out.lifted.curves.push_back(std::move(c));
    }
  }
  // Renormalise away summation drift so marginals validate.
  double total = 0.0;
  for (const auto& c : out.lifted.curves) total += c.weight;
  for (auto& c : out.lifted.curves) c.weight /= total;
  out.path = marginal_path(out.lifted);
  return out;
}

void VelocitySeries::validate(const SpacetimeModel& model, const MeasurePath& path) const {
  require_minkowski(model, "velocity fields");
  if (times != path.times) throw DomainMismatch("velocity grid differs from the path grid");
  if (fields.size() != times.size()) throw DomainMismatch("one velocity field per grid time");
  for (std::size_t k = 0; k < fields.size(); ++k) {
    for (const auto& a : fields[k]) {
      model.validate(a.at);
      if (a.v.size() != a.at.size()) throw InvalidArgument("velocity dimension mismatch");
      if (!nearly_future_causal(a.v)) {
        throw InvalidArgument("velocity at " + to_string(Location{a.at}) +
                              " is not future causal");
      }
    }
    for (const auto& atom : path.measures[k].atoms()) {
      if (!find(k, std::get<Event>(atom.location))) {
        throw DomainMismatch("no velocity at " + to_string(atom.location) + " on grid time " +
                             std::to_string(k));
      }
    }
  }
}

const VelocityAtom* VelocitySeries::find(std::size_t k, const Event& x) const {
  for (const auto& a : fields.at(k)) {
    if (a.at == x) return &a;
  }
  return nullptr;
}

VelocitySeries VelocitySeries::scaled(double lambda) const {
  if (!(lambda >= 0.0)) throw InvalidArgument("damping factor must be nonnegative");
  VelocitySeries out = *this;
  for (auto& f : out.fields) {
    for (auto& a : f) {
      for (double& c : a.v) c *= lambda;
      a.speed_bound *= lambda;
    }
  }
  return out;
}

VelocitySeries barycentric_velocity(const SpacetimeModel& model, const LiftedPlan& plan) {
  require_minkowski(model, "velocity fields");
  plan.validate(model);
  const std::size_t K = plan.times.size();
  if (K < 2) throw InvalidArgument("velocities need at least two grid times");
  VelocitySeries out;
  out.times = plan.times;
  out.fields.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t j = std::min(k, K - 2);
    const double dt = plan.times[j + 1] - plan.times[j];
    auto& field = out.fields[k];
    for (const auto& c : plan.curves) {
      const Event& x = std::get<Event>(c.points[k]);
      const Event& a = std::get<Event>(c.points[j]);
      const Event& b = std::get<Event>(c.points[j + 1]);
      std::vector<double> v(a.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = (b[i] - a[i]) / dt;
      auto it = std::find_if(field.begin(), field.end(),
                             [&](const VelocityAtom& va) { return va.at == x; });
      if (it == field.end()) {
        VelocityAtom va;
        va.at = x;
        va.speed_bound = euclid(v);
        for (double& s : v) s *= c.weight;
        va.v = std::move(v);
        va.weight = c.weight;
        field.push_back(std::move(va));
      } else {
        it->speed_bound = std::max(it->speed_bound, euclid(v));
        for (std::size_t i = 0; i < v.size(); ++i) it->v[i] += c.weight * v[i];
        it->weight += c.weight;
        ++it->curves;
      }
    }
    for (auto& va : field) {
      for (double& s : va.v) s /= va.weight;
      if (va.curves > 1) ++out.merges;
    }
  }
  return out;
}

double Ramp::value(double s) const {
  double r = slope0 * s;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    r += jumps[i] * width * softplus((s - breakpoints[i]) / width);
  }
  return r;
}

double Ramp::derivative(double s) const {
  double r = slope0;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    r += jumps[i] * sigmoid((s - breakpoints[i]) / width);
  }
  return r;
}

double Ramp::third_derivative_bound() const {
  // max |sigmoid''| = 1 / (6 sqrt 3).
  double total = 0.0;
  for (double j : jumps) total += std::abs(j);
  return total / (6.0 * std::sqrt(3.0) * width * width);
}

TestFunction TestFunction::linear(std::vector<double> a) {
  if (a.empty() || !is_causal_covector(a)) throw NonCausalCovector("test covector is not causal");
  TestFunction f;
  f.a_ = std::move(a);
  f.name_ = "linear";
  return f;
}

TestFunction TestFunction::ramp(std::vector<double> a, Ramp r) {
  TestFunction f = linear(std::move(a));
  if (r.breakpoints.size() != r.jumps.size()) throw InvalidArgument("one jump per breakpoint");
  if (!(r.width > 0.0) || r.slope0 < 0.0) throw InvalidArgument("ramp must be smooth and monotone");
  for (double j : r.jumps) {
    if (j < 0.0) throw InvalidArgument("ramp jumps must be nonnegative");
  }
  f.ramp_ = std::move(r);
  f.name_ = "ramp";
  return f;
}

double TestFunction::value(const Event& x) const {
  if (x.size() != a_.size()) throw InvalidArgument("test function dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) s += a_[i] * x[i];
  return ramp_ ? ramp_->value(s) : s;
}

double TestFunction::differential(const Event& x, const std::vector<double>& v) const {
  double av = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) av += a_[i] * v[i];
  if (!ramp_) return av;
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) s += a_[i] * x[i];
  return ramp_->derivative(s) * av;
}

double TestFunction::trapezoid_constant(double speed) const {
  if (!ramp_) return 0.0;
  const double v = euclid(a_) * speed;
  return ramp_->third_derivative_bound() * v * v * v / 12.0;
}

std::vector<TestFunction> standard_battery(std::size_t spatial_dim, std::uint64_t seed,
                                           std::size_t random_count) {
  const std::size_t d = spatial_dim + 1;
  std::vector<std::vector<double>> covectors;
  std::vector<std::string> names;
  std::vector<double> time(d, 0.0);
  time[0] = 1.0;
  covectors.push_back(time);
  names.push_back("time");
  const double r2 = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 1; i < d; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> a(d, 0.0);
      a[0] = r2;
      a[i] = sign * r2;
      covectors.push_back(a);
      names.push_back(std::string(sign > 0 ? "axis+" : "axis-") + std::to_string(i));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> radius(0.0, 0.95);
  for (std::size_t k = 0; k < random_count; ++k) {
    std::vector<double> dir(spatial_dim);
    double n = 0.0;
    do {
      n = 0.0;
      for (double& c : dir) {
        c = gauss(rng);
        n += c * c;
      }
    } while (spatial_dim > 0 && n == 0.0);
    const double r = radius(rng);
    std::vector<double> a(d);
    a[0] = 1.0;
    for (std::size_t i = 0; i < spatial_dim; ++i) a[i + 1] = r * dir[i] / std::sqrt(n);
    covectors.push_back(a);
    names.push_back("random" + std::to_string(k));
  }

  std::vector<TestFunction> out;
  for (std::size_t k = 0; k < covectors.size(); ++k) {
    out.push_back(TestFunction::linear(covectors[k]).named(names[k]));
  }
  Ramp r;
  r.slope0 = 0.25;
  r.breakpoints = {-1.0, 0.5, 2.0};
  r.jumps = {0.5, 1.0, 0.5};
  r.width = 0.75;
  for (std::size_t k = 0; k < covectors.size(); ++k) {
    out.push_back(TestFunction::ramp(covectors[k], r).named(names[k] + "-ramp"));
  }
  return out;
}

bool CCIReport::ok() const { return failures() == 0; }

std::size_t CCIReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(tests.begin(), tests.end(), [](const CCIResult& r) { return !r.ok; }));
}

CCIReport check_cci(const SpacetimeModel& model, const MeasurePath& path,
                    const VelocitySeries& v, const std::vector<TestFunction>& tests) {
  v.validate(model, path);
  const std::size_t K = path.times.size();
  // Velocity lookups and speed bounds per grid time.
  std::vector<std::vector<const VelocityAtom*>> at(K);
  std::vector<double> speed(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    for (const auto& atom : path.measures[k].atoms()) {
      const VelocityAtom* va = v.find(k, std::get<Event>(atom.location));
      at[k].push_back(va);
      speed[k] = std::max(speed[k], std::max(va->speed_bound, euclid(va->v)));
    }
  }

  CCIReport rep;
  for (const auto& phi : tests) {
    CCIResult res;
    res.test = phi.name();
    res.phi.assign(K, 0.0);
    res.flux.assign(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
      const auto& atoms = path.measures[k].atoms();
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Event& x = std::get<Event>(atoms[i].location);
        res.phi[k] += atoms[i].weight * phi.value(x);
        res.flux[k] += atoms[i].weight * phi.differential(x, at[k][i]->v);
      }
    }
    res.ok = true;
    res.monotone = true;
    res.worst = kPosInf;
    for (std::size_t k = 0; k + 1 < K; ++k) {
      CCIInterval iv;
      iv.t0 = path.times[k];
      iv.t1 = path.times[k + 1];
      const double dt = iv.t1 - iv.t0;
      iv.residual = (res.phi[k + 1] - res.phi[k]) - 0.5 * dt * (res.flux[k] + res.flux[k + 1]);
      iv.tolerance = 1e-9 + phi.trapezoid_constant(std::max(speed[k], speed[k + 1])) * dt * dt;
      iv.ok = iv.residual >= -iv.tolerance;
      res.ok = res.ok && iv.ok;
      res.worst = std::min(res.worst, iv.residual + iv.tolerance);
      res.abs_residual_sum += std::abs(iv.residual);
      if (res.phi[k + 1] < res.phi[k] - 1e-12 * std::max(1.0, std::abs(res.phi[k]))) {
        res.monotone = false;
      }
      res.intervals.push_back(iv);
    }
    rep.tests.push_back(std::move(res));
  }
  return rep;
}

std::vector<double> action_integrand(const SpacetimeModel& model, const MeasurePath& path,
                                     const VelocitySeries& v, const Exponent& e) {
  v.validate(model, path);
  std::vector<double> out(path.times.size(), 0.0);
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    for (const auto& atom : path.measures[k].atoms()) {
      const VelocityAtom* va = v.find(k, std::get<Event>(atom.location));
      const double u = u_p(e, causal_norm(va->v));
      if (u == kNegInf) {
        out[k] = kNegInf;
        break;
      }
      out[k] += atom.weight * u;
    }
  }
  return out;
}

double dynamic_action(const SpacetimeModel& model, const MeasurePath& path,
                      const VelocitySeries& v, const Exponent& e) {
  const auto I = action_integrand(model, path, v, e);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < I.size(); ++k) {
    if (I[k] == kNegInf || I[k + 1] == kNegInf) return kNegInf;
    total += 0.5 * (path.times[k + 1] - path.times[k]) * (I[k] + I[k + 1]);
  }
  return total;
}

namespace {

// a - b with -inf on either side resolved in favour of the inequality a >= b.
double signed_slack(double a, double b) {
  if (b == kNegInf) return kPosInf;
  if (a == kNegInf) return kNegInf;
  return a - b;
}

}  // namespace

KuwadaReport check_kuwada_direction(const SpacetimeModel& model, const MeasurePath& path,
                                    const VelocitySeries& v, const Exponent& e,
                                    const std::vector<TestFunction>& tests, double tol) {
  const CCIReport cci = check_cci(model, path, v, tests);
  if (!cci.ok()) {
    throw CCIPrereqFailed("path and velocity field fail the causal continuity inequality on " +
                          std::to_string(cci.failures()) + " test function(s)");
  }
  KuwadaReport rep;
  const auto I = action_integrand(model, path, v, e);
  rep.ok = true;
  double pa = 0.0, da = 0.0;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    const SolveResult r = solve_primal(model, path.measures[k], path.measures[k + 1], e);
    const double a = r.value == kNegInf ? kNegInf : std::pow(dt, 1.0 - e.p) * r.value;
    const double d = (I[k] == kNegInf || I[k + 1] == kNegInf) ? kNegInf
                                                               : 0.5 * dt * (I[k] + I[k + 1]);
    const double s = signed_slack(a, d);
    rep.interval_slack.push_back(s == kPosInf || s == kNegInf ? s : s / dt);
    rep.ok = rep.ok && s >= -tol;
    pa = a == kNegInf ? kNegInf : pa + a;
    da = d == kNegInf ? kNegInf : da + d;
  }
  rep.path_action = pa;
  rep.dynamic_action = da;
  rep.slack = signed_slack(pa, da);
  rep.ok = rep.ok && rep.slack >= -tol;
  return rep;
}

BBReport verify_benamou_brenier(const SpacetimeModel& model, const DiscreteMeasure& mu0,
                                const DiscreteMeasure& mu1, const Exponent& e,
                                const std::vector<double>& times,
                                const std::vector<TestFunction>& tests, double tol) {
  require_minkowski(model, "Benamou-Brenier verification");
  BBReport rep;
  rep.times = times;
  const SolveResult s = solve_primal(model, mu0, mu1, e);
  if (s.infeasible() || s.value == kNegInf) {
    rep.infeasible = true;
    rep.ok = true;
    return rep;
  }
  rep.static_value = s.value;
  const Interpolation g = geodesic_path(model, *s.plan, times);
  const VelocitySeries v = barycentric_velocity(model, g.lifted);
  rep.merges = v.merges;
  rep.integrand = action_integrand(model, g.path, v, e);
  rep.dynamic_action = dynamic_action(model, g.path, v, e);
  rep.path_action = path_action(model, g.path, e);
  rep.curvewise_action = curvewise_action(model, g.lifted, e);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    rep.speeds.push_back(path_speed(model, g.path, e, k));
  }
  rep.cci = check_cci(model, g.path, v, tests);
  if (rep.dynamic_action == kNegInf) {
    rep.gap = kPosInf;
    rep.ok = false;
    return rep;
  }
  rep.gap = rep.static_value - rep.dynamic_action;
  const bool action_ok = rep.merges == 0 ? std::abs(rep.gap) <= tol : rep.gap <= tol;
  rep.ok = action_ok && rep.cci.ok();
  return rep;
}

}  // namespace causal_ot
