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

#include "causal_ot/hopflax.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace causal_ot {

HopfLaxValue q_eval(const SpacetimeModel& model, const std::vector<Location>& domain,
                    const std::vector<double>& f, double t, std::size_t y, const Exponent& e) {
  if (f.size() != domain.size()) throw InvalidArgument("f must be defined on every point");
  if (y >= domain.size()) throw InvalidArgument("evaluation point out of range");
  if (!(t >= 0.0)) throw InvalidArgument("Hopf-Lax time must be nonnegative");
  HopfLaxValue out;
  if (t == 0.0) {
    out.value = f[y];
    out.argmax = y;
    out.lmax = 0.0;
    out.maximizers = {y};
    return out;
  }
  std::vector<double> cand(domain.size(), kNegInf);
  std::vector<double> ells(domain.size(), kNegInf);
  for (std::size_t x = 0; x < domain.size(); ++x) {
    const double l = x == y ? 0.0 : model.ell(domain[x], domain[y]);
    if (l < 0.0) continue;
    const double u = u_p(e, l / t);
    if (u == kNegInf) continue;
    ells[x] = l;
    cand[x] = f[x] + t * u;
    out.value = std::max(out.value, cand[x]);
  }
  if (out.value == kNegInf) return out;
  const double tie = 1e-12 * std::max(1.0, std::abs(out.value));
  for (std::size_t x = 0; x < domain.size(); ++x) {
    if (cand[x] == kNegInf || cand[x] < out.value - tie) continue;
    out.maximizers.push_back(x);
    if (out.argmax == kNoPoint || ells[x] > out.lmax) {
      out.argmax = x;
      out.lmax = ells[x];
    }
  }
  return out;
}

HopfLaxField::HopfLaxField(const SpacetimeModel& model, std::vector<Location> domain,
                           std::vector<bool> interior, std::vector<double> f,
                           double steepness_bound, Exponent e, std::vector<double> times)
    : model_(model), domain_(std::move(domain)), interior_(std::move(interior)),
      f_(std::move(f)), L_(steepness_bound), e_(e), times_(std::move(times)) {
  if (domain_.empty()) throw InvalidArgument("Hopf-Lax domain is empty");
  if (f_.size() != domain_.size()) throw InvalidArgument("f must be defined on every point");
  if (interior_.size() != domain_.size()) throw InvalidArgument("interior mask size mismatch");
  for (const auto& x : domain_) model_.validate(x);
  for (double v : f_) {
    if (!std::isfinite(v)) throw InvalidArgument("f must be finite");
  }
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw InvalidArgument("steepness bound must be positive");
  const double st = steepness(model_, domain_, f_);
  if (st < L_ * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "f has steepness " << st << " below the claimed bound " << L_;
    throw InvalidArgument(os.str());
  }
  validate_time_grid(times_);
  table_.resize(times_.size());
  for (std::size_t k = 0; k < times_.size(); ++k) {
    table_[k].reserve(domain_.size());
    for (std::size_t y = 0; y < domain_.size(); ++y) {
      table_[k].push_back(q_eval(model_, domain_, f_, times_[k], y, e_));
    }
  }
}

std::vector<double> HopfLaxField::values(std::size_t t) const {
  std::vector<double> out;
  out.reserve(domain_.size());
  for (const auto& v : table_.at(t)) out.push_back(v.value);
  return out;
}

double HopfLaxField::maximizer_radius(double t, std::optional<double> steepness_override) const {
  const double L = steepness_override.value_or(L_);
  return t * std::pow(L, 1.0 / (e_.p - 1.0));
}

bool check_maximizer_bound(const HopfLaxField& field, std::size_t t, std::size_t y,
                           std::optional<double> steepness_override) {
  const double bound = field.maximizer_radius(field.times().at(t), steepness_override);
  const auto& v = field.at(t, y);
  for (std::size_t x : v.maximizers) {
    const double l = x == y ? 0.0 : field.model().ell(field.domain()[x], field.domain()[y]);
    if (l > 0.0 && l > bound + 1e-12) return false;
  }
  return true;
}

std::size_t SemigroupReport::count(const std::string& property) const {
  return static_cast<std::size_t>(std::count_if(
      failures.begin(), failures.end(),
      [&](const PropertyFailure& f) { return f.property == property; }));
}

SemigroupReport check_semigroup_properties(const HopfLaxField& field, double tol) {
  SemigroupReport r;
  const auto& model = field.model();
  const auto& E = field.domain();
  const auto& f = field.f();
  const auto& K = field.interior();
  const auto& times = field.times();
  const Exponent& e = field.exponent();
  const double L = field.steepness_bound();
  const double young = u_q(e, L);
  const bool up = e.positive();

  std::vector<Location> kset;
  std::vector<std::size_t> kidx;
  for (std::size_t y = 0; y < E.size(); ++y) {
    if (K[y]) {
      kset.push_back(E[y]);
      kidx.push_back(y);
    }
  }
  auto fail = [&](const char* what, double t, std::size_t y, double amount) {
    r.failures.push_back({what, t, y, amount});
  };

  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    for (std::size_t y : kidx) {
      const double q = field.at(k, y).value;
      const double scale = tol * std::max(1.0, std::abs(f[y]));
      ++r.checks;
      if (!check_maximizer_bound(field, k, y)) fail("maximizer-bound", t, y, field.at(k, y).lmax);
      if (q == kNegInf) {
        // No strict predecessor; only possible for p < 0 and consistent with
        // every one-sided property below.
        continue;
      }
      if (q > f[y] - t * young + scale) fail("young-bound", t, y, q - (f[y] - t * young));
      if (up ? q < f[y] - scale : q > f[y] + scale) fail("convergence", t, y, q - f[y]);
      if (k > 0) {
        const double prev = field.at(k - 1, y).value;
        if (up ? q < prev - scale : (prev != kNegInf && q > prev + scale)) {
          fail("monotonicity", t, y, q - prev);
        }
      }
    }

    // Steepness of Q_t f on K, over pairs with finite values.
    for (std::size_t a = 0; a < kidx.size(); ++a) {
      for (std::size_t b = 0; b < kidx.size(); ++b) {
        if (a == b) continue;
        const double l = model.ell(kset[a], kset[b]);
        if (!(l > 0.0)) continue;
        const double qa = field.at(k, kidx[a]).value, qb = field.at(k, kidx[b]).value;
        if (qa == kNegInf || qb == kNegInf) continue;
        if (qb - qa < L * l - tol * std::max(1.0, std::abs(qb))) {
          fail("steepness", t, kidx[b], (qb - qa) / l);
        }
      }
    }
  }

  // Uniform convergence: sup_K |Q_t f - f| must shrink with t.
  double prev_sup = -1.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    double sup = 0.0;
    for (std::size_t y : kidx) {
      const double q = field.at(k, y).value;
      sup = std::max(sup, q == kNegInf ? kPosInf : std::abs(q - f[y]));
    }
    if (prev_sup >= 0.0 && sup < prev_sup - tol * std::max(1.0, prev_sup)) {
      fail("convergence", times[k], kNoPoint, sup - prev_sup);
    }
    prev_sup = sup;
  }

  // Q_1 f against the c_p-transform of f.
  const auto phic = cp_transform_fwd(model, E, f, kset, e);
  for (std::size_t a = 0; a < kidx.size(); ++a) {
    const double q = q_eval(model, E, f, 1.0, kidx[a], e).value;
    ++r.checks;
    const bool same = (q == kNegInf && phic[a] == kNegInf) ||
                      std::abs(q - phic[a]) <= 1e-12 * std::max(1.0, std::abs(q));
    if (!same) fail("transform", 1.0, kidx[a], q - phic[a]);
  }

  // Time-Lipschitz constant, report only.
  if (!times.empty()) {
    const double tmin = std::max(times.front(), 1e-300);
    const double edge = e.positive() ? tmin : 1.0;
    const double dmax = std::abs(1.0 - e.p) * std::pow(edge, -e.p);
    r.lipschitz_constant = std::abs(u_p(e, std::pow(L, 1.0 / (e.p - 1.0)))) * dmax;
    for (std::size_t k = 1; k < times.size(); ++k) {
      if (times[k - 1] <= 0.0) continue;
      for (std::size_t y : kidx) {
        const double a = field.at(k - 1, y).value, b = field.at(k, y).value;
        if (a == kNegInf || b == kNegInf) continue;
        const double ratio = std::abs(b - a) / (times[k] - times[k - 1]) / r.lipschitz_constant;
        r.lipschitz_ratio = std::max(r.lipschitz_ratio, ratio);
      }
    }
  }
  return r;
}

void require_semigroup_properties(const HopfLaxField& field, double tol) {
  const SemigroupReport r = check_semigroup_properties(field, tol);
  if (r.ok()) return;
  const auto& f = r.failures.front();
  std::ostringstream os;
  os << f.property << " violated at t=" << f.t;
  if (f.y != kNoPoint) os << ", y=" << f.y;
  os << " (" << f.amount << "); " << r.failures.size() << " failure(s) total";
  throw PropertyViolation(os.str());
}

namespace {

bool in_ball(const SpacetimeModel& model, const Location& y, const Location& z, double r) {
  if (model.is_minkowski()) {
    const auto& a = std::get<Event>(y).coords;
    const auto& b = std::get<Event>(z).coords;
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s) <= r;
  }
  if (y == z) return true;
  const double l = std::max(model.ell(y, z), model.ell(z, y));
  return l >= 0.0 && l <= r;
}

}  // namespace

AsymptoticSteepness asymptotic_steepness(const SpacetimeModel& model,
                                         const std::vector<Location>& domain,
                                         const std::vector<double>& f, std::size_t y,
                                         const std::vector<double>& radii, bool strict) {
  if (y >= domain.size()) throw InvalidArgument("evaluation point out of range");
  if (f.size() != domain.size()) throw InvalidArgument("f must be defined on every point");
  if (radii.empty()) throw InvalidArgument("need at least one radius");
  AsymptoticSteepness out;
  out.radii = radii;
  out.value = kNegInf;
  bool any = false;
  for (double r : radii) {
    std::vector<Location> ball;
    std::vector<double> fb;
    for (std::size_t z = 0; z < domain.size(); ++z) {
      if (z == y || in_ball(model, domain[y], domain[z], r)) {
        ball.push_back(domain[z]);
        fb.push_back(f[z]);
      }
    }
    const double st = steepness(model, ball, fb);
    out.per_radius.push_back(st);
    if (st == kPosInf) {
      out.radii_without_pairs.push_back(r);
      if (!strict) continue;
      out.inconclusive = true;
    }
    any = true;
    out.value = std::max(out.value, st);
  }
  if (!any) {
    out.value = kPosInf;
    out.inconclusive = true;
  }
  return out;
}

double analytic_hj_residual(double lmax, double t, const Exponent& e) {
  const double derivative = (1.0 - e.p) * std::pow(t, -e.p) * u_p(e, lmax);
  return derivative + u_q(e, std::pow(lmax / t, e.p - 1.0));
}

HJReport check_hj_inequality(const HopfLaxField& field, double h,
                             const std::vector<double>& radii) {
  if (!(h > 0.0)) throw InvalidArgument("HJ step must be positive");
  HJReport rep;
  rep.step = h;
  const auto& E = field.domain();
  const Exponent& e = field.exponent();
  for (std::size_t k = 0; k < field.times().size(); ++k) {
    const double t = field.times()[k];
    if (t <= 0.0 || t + h > 1.0 + 1e-15) continue;
    const std::vector<double> qt = field.values(k);
    for (std::size_t y = 0; y < E.size(); ++y) {
      if (!field.interior()[y]) continue;
      const HopfLaxValue& v = field.at(k, y);
      if (v.value == kNegInf) continue;
      HJRow row;
      row.t = t;
      row.y = y;
      row.q = v.value;
      row.argmax = v.argmax;
      row.lmax = v.lmax;
      const double next = q_eval(field.model(), E, field.f(), t + h, y, e).value;
      row.derivative = (next - v.value) / h;

      // Restrict the estimator to points where Q_t f is finite.
      std::vector<Location> pts;
      std::vector<double> vals;
      std::size_t yy = 0;
      for (std::size_t z = 0; z < E.size(); ++z) {
        if (qt[z] == kNegInf) continue;
        if (z == y) yy = pts.size();
        pts.push_back(E[z]);
        vals.push_back(qt[z]);
      }
      row.steepness_estimate = asymptotic_steepness(field.model(), pts, vals, yy, radii).value;
      row.hj_value = row.derivative + u_q(e, row.steepness_estimate);

      const double up = u_p(e, v.lmax);
      const double exact = (1.0 - e.p) * std::pow(t, -e.p);
      const double secant = (std::pow(t + h, 1.0 - e.p) - std::pow(t, 1.0 - e.p)) / h;
      row.tolerance = std::abs(up) * std::abs(exact - secant) +
                      1e-12 * (1.0 + std::abs(row.derivative) + std::abs(v.value) / h);
      row.slack = row.hj_value + row.tolerance;
      row.passes = row.slack >= 0.0;
      row.lower_bound_holds =
          row.steepness_estimate >= std::pow(v.lmax / t, e.p - 1.0) * (1.0 - 1e-12);
      if (!row.passes) ++rep.failures;
      if (!row.lower_bound_holds) ++rep.lower_bound_failures;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace causal_ot
