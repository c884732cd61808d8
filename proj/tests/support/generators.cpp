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

#include "support/generators.hpp"

#include <algorithm>
#include <cmath>

namespace causal_ot::testing {

double uniform(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

std::size_t uniform_int(Rng& rng, std::size_t a, std::size_t b) {
  return std::uniform_int_distribution<std::size_t>(a, b)(rng);
}

std::vector<double> random_direction(Rng& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> u(n);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : u) {
      c = g(rng);
      norm += c * c;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& c : u) c /= norm;
  return u;
}

std::vector<double> causal_step(Rng& rng, std::size_t n, double speed, double t_lo,
                                double t_hi) {
  const double dt = uniform(rng, t_lo, t_hi);
  std::vector<double> v{dt};
  for (double c : random_direction(rng, n)) v.push_back(speed * dt * c);
  return v;
}

std::vector<double> random_causal_covector(Rng& rng, std::size_t n, double r_max) {
  const double r = uniform(rng, 0.0, r_max);
  std::vector<double> w{1.0};
  for (double c : random_direction(rng, n)) w.push_back(r * c);
  return w;
}

namespace {

std::vector<double> random_event(Rng& rng, std::size_t n, double t_lo, double t_hi,
                                 double box) {
  std::vector<double> x{uniform(rng, t_lo, t_hi)};
  for (std::size_t i = 0; i < n; ++i) x.push_back(uniform(rng, -box, box));
  return x;
}

double spatial_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 1; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

DiscreteMeasure measure(const std::vector<std::vector<double>>& pts,
                        const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < pts.size(); ++i) atoms.push_back({Event(pts[i]), w[i] / total});
  return DiscreteMeasure(std::move(atoms));
}

}  // namespace

Pair random_feasible_pair(Rng& rng, std::size_t n_sp, std::size_t n, std::size_t m,
                          bool equal_weights) {
  std::vector<std::vector<double>> xs, ys;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(random_event(rng, n_sp, 0.0, 1.0, 1.0));

  if (equal_weights) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dt = uniform(rng, 0.5, 2.5);
      const double r = uniform(rng, 0.0, 1.0) * (dt - 0.2);
      std::vector<double> y{xs[i][0] + dt};
      const auto u = random_direction(rng, n_sp);
      for (std::size_t d = 0; d < n_sp; ++d) y.push_back(xs[i][d + 1] + r * u[d]);
      ys.push_back(y);
    }
    std::shuffle(ys.begin(), ys.end(), rng);
    std::vector<Atom> a, b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back({Event(xs[i]), 1.0 / static_cast<double>(n)});
      b.push_back({Event(ys[i]), 1.0 / static_cast<double>(n)});
    }
    return {DiscreteMeasure(std::move(a)), DiscreteMeasure(std::move(b))};
  }

  // Edges (k mod n, k mod m) cover every atom on both sides.
  const std::size_t edges = std::max(n, m);
  std::vector<std::vector<std::size_t>> parents(m);
  std::vector<double> wx(n, 0.0), wy(m, 0.0);
  for (std::size_t k = 0; k < edges; ++k) {
    const double w = uniform(rng, 0.2, 1.0);
    parents[k % m].push_back(k % n);
    wx[k % n] += w;
    wy[k % m] += w;
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> y(n_sp + 1, 0.0);
    for (std::size_t i : parents[j])
      for (std::size_t d = 1; d <= n_sp; ++d) y[d] += xs[i][d] / parents[j].size();
    for (std::size_t d = 1; d <= n_sp; ++d) y[d] += uniform(rng, -0.5, 0.5);
    double t = -1e300;
    for (std::size_t i : parents[j]) t = std::max(t, xs[i][0] + spatial_distance(xs[i], y));
    y[0] = t + uniform(rng, 0.2, 1.5);
    ys.push_back(y);
  }
  return {measure(xs, wx), measure(ys, wy)};
}

Pair random_pair(Rng& rng, std::size_t n_sp, std::size_t n, std::size_t m) {
  std::vector<std::vector<double>> xs, ys;
  std::vector<double> wx, wy;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(random_event(rng, n_sp, 0.0, 1.0, 1.0));
    wx.push_back(uniform(rng, 0.1, 1.0));
  }
  for (std::size_t j = 0; j < m; ++j) {
    ys.push_back(random_event(rng, n_sp, 0.3, 2.3, 1.5));
    wy.push_back(uniform(rng, 0.1, 1.0));
  }
  return {measure(xs, wx), measure(ys, wy)};
}

LatticeField aligned_lattice_field(Rng& rng, bool positive_p) {
  LatticeField out;
  const double theta = uniform(rng, -0.8, 0.8);
  out.L = uniform(rng, 0.5, 2.0);
  out.p = positive_p ? uniform(rng, 0.2, 0.8) : uniform(rng, -2.0, -0.3);
  const double s = std::pow(out.L, 1.0 / (out.p - 1.0));
  const std::size_t kmax = 3;
  const double delta = s / kmax * uniform(rng, 0.6, 1.0);
  for (std::size_t k = 1; k <= kmax; ++k) out.times.push_back(k * delta / s);

  const std::size_t side = uniform_int(rng, 8, 14);
  const double t0 = uniform(rng, -1.0, 1.0), x0 = uniform(rng, -1.0, 1.0);
  const double c = uniform(rng, -1.0, 1.0);
  const double ep = std::exp(theta), em = std::exp(-theta);
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      // Null coordinates along the boosted light rays.
      const double a = i * delta * ep, b = j * delta * em;
      const double t = t0 + 0.5 * (a + b), x = x0 + 0.5 * (a - b);
      out.points.push_back(Event{t, x});
      out.interior.push_back(i >= kmax && j >= kmax);
      out.f.push_back(out.L * (std::cosh(theta) * t - std::sinh(theta) * x) + c);
    }
  return out;
}

}  // namespace causal_ot::testing
