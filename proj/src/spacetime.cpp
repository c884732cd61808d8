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

#include "causal_ot/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace causal_ot {

namespace {

double spatial_norm(std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

// sqrt(a^2 - b^2) for a >= b >= 0, computed as sqrt((a-b)(a+b)) so that
// null separations give exactly zero.
double hyperbolic_sqrt(double a, double b) {
  return std::sqrt((a - b) * (a + b));
}

}  // namespace

Event::Event(std::vector<double> c) : coords(std::move(c)) {
  if (coords.empty()) throw InvalidArgument("event must have at least one coordinate");
  for (double v : coords) {
    if (!std::isfinite(v)) throw InvalidArgument("event coordinates must be finite");
  }
}

std::string to_string(const Location& loc) {
  std::ostringstream os;
  if (const auto* e = std::get_if<Event>(&loc)) {
    os << '(';
    for (std::size_t i = 0; i < e->size(); ++i) os << (i ? ", " : "") << e->coords[i];
    os << ')';
  } else {
    os << '#' << std::get<Label>(loc).index;
  }
  return os.str();
}

double CausalCovector::operator()(std::span<const double> v) const {
  if (v.size() != components.size()) throw InvalidArgument("covector/vector dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += components[i] * v[i];
  return s;
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::kBefore: return "before";
    case Relation::kStrictlyBefore: return "strictly-before";
    case Relation::kUnrelated: return "unrelated";
  }
  return "?";
}

FiniteCausal::FiniteCausal(std::vector<std::string> labels,
                           std::vector<std::vector<double>> ell)
    : labels_(std::move(labels)), ell_(std::move(ell)) {
  const std::size_t n = ell_.size();
  if (labels_.empty()) {
    labels_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (labels_.size() != n) throw InvalidArgument("label count does not match ell matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (labels_[i] == labels_[j]) throw InvalidArgument("duplicate label " + labels_[i]);
  for (std::size_t i = 0; i < n; ++i) {
    if (ell_[i].size() != n) throw InvalidArgument("ell matrix must be square");
    if (ell_[i][i] != 0.0) throw InvalidArgument("ell matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = ell_[i][j];
      if (std::isnan(v) || v == kPosInf || (v < 0.0 && v != kNegInf)) {
        throw InvalidArgument("ell entries must be -inf or finite and >= 0");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ell_[i][j] >= 0.0 && ell_[j][i] >= 0.0) {
        throw InvalidArgument("causal relation is not antisymmetric between " +
                              labels_[i] + " and " + labels_[j]);
      }
    }
  }
  // Reverse triangle inequality, with a relative slack for decimal input.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (ell_[i][j] < 0.0) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (ell_[j][k] < 0.0) continue;
        const double lower = ell_[i][j] + ell_[j][k];
        if (ell_[i][k] < lower - 1e-12 * std::max(1.0, lower)) {
          throw InvalidArgument("reverse triangle inequality fails for " + labels_[i] +
                                ", " + labels_[j] + ", " + labels_[k]);
        }
      }
    }
  }
}

Label FiniteCausal::find(const std::string& name) const {
  const auto it = std::find(labels_.begin(), labels_.end(), name);
  if (it == labels_.end()) throw InvalidArgument("unknown label '" + name + "'");
  return Label{static_cast<std::size_t>(it - labels_.begin())};
}

SpacetimeModel SpacetimeModel::minkowski(std::size_t spatial_dim) {
  if (spatial_dim == 0) throw InvalidArgument("Minkowski space needs at least one spatial dimension");
  return SpacetimeModel(Minkowski{spatial_dim});
}

SpacetimeModel SpacetimeModel::finite(FiniteCausal space) {
  return SpacetimeModel(std::move(space));
}

std::size_t SpacetimeModel::event_size() const {
  if (const auto* m = std::get_if<Minkowski>(&variant_)) return m->spatial_dim + 1;
  throw CapabilityMissing("finite causal spaces have no coordinates");
}

const FiniteCausal& SpacetimeModel::finite_space() const {
  if (const auto* f = std::get_if<FiniteCausal>(&variant_)) return *f;
  throw CapabilityMissing("model is not a finite causal space");
}

void SpacetimeModel::validate(const Location& loc) const {
  if (const auto* m = std::get_if<Minkowski>(&variant_)) {
    const auto* e = std::get_if<Event>(&loc);
    if (e == nullptr) throw InvalidArgument("label used in a Minkowski model");
    if (e->size() != m->spatial_dim + 1) {
      throw InvalidArgument("dimension mismatch: expected " +
                            std::to_string(m->spatial_dim + 1) + " coordinates, got " +
                            std::to_string(e->size()));
    }
  } else {
    const auto* l = std::get_if<Label>(&loc);
    if (l == nullptr) throw InvalidArgument("event used in a finite causal model");
    if (l->index >= std::get<FiniteCausal>(variant_).size()) {
      throw InvalidArgument("unknown label #" + std::to_string(l->index));
    }
  }
}

double SpacetimeModel::ell(const Location& x, const Location& y) const {
  validate(x);
  validate(y);
  if (is_minkowski()) {
    return minkowski_ell(std::get<Event>(x).coords, std::get<Event>(y).coords);
  }
  return std::get<FiniteCausal>(variant_).at(std::get<Label>(x).index,
                                             std::get<Label>(y).index);
}

Relation SpacetimeModel::relation(const Location& x, const Location& y) const {
  const double l = ell(x, y);
  if (l > 0.0) return Relation::kStrictlyBefore;
  if (l == 0.0) return Relation::kBefore;
  return Relation::kUnrelated;
}

Relation causally_related(const SpacetimeModel& model, const Location& x,
                          const Location& y) {
  return model.relation(x, y);
}

double time_separation(const SpacetimeModel& model, const Location& x,
                       const Location& y) {
  return model.ell(x, y);
}

double minkowski_ell(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("dimension mismatch");
  const double dt = y[0] - x[0];
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double d = y[i] - x[i];
    s += d * d;
  }
  const double dx = std::sqrt(s);
  if (dt < dx) return kNegInf;
  return hyperbolic_sqrt(dt, dx);
}

bool is_future_causal(std::span<const double> v) {
  return v[0] >= spatial_norm(v);
}

bool is_causal_covector(std::span<const double> w) {
  return w[0] >= spatial_norm(w);
}

double norm_g(std::span<const double> v) {
  const double s = spatial_norm(v);
  if (v[0] < s) return kNegInf;
  return hyperbolic_sqrt(v[0], s);
}

double norm_g(const SpacetimeModel& model, const CausalVector& v) {
  if (v.components.size() != model.event_size()) throw InvalidArgument("dimension mismatch");
  return norm_g(v.components);
}

double dual_norm(std::span<const double> w) {
  const double s = spatial_norm(w);
  if (w[0] < s) throw NonCausalCovector("covector is negative on some future-causal vector");
  return hyperbolic_sqrt(w[0], s);
}

double dual_norm(const SpacetimeModel& model, const CausalCovector& w) {
  if (w.components.size() != model.event_size()) throw InvalidArgument("dimension mismatch");
  return dual_norm(w.components);
}

Event geodesic_point(const SpacetimeModel& model, const Event& x, const Event& y,
                     double lambda) {
  if (!model.is_minkowski()) {
    throw CapabilityMissing("geodesics are only available on Minkowski space");
  }
  model.validate(x);
  model.validate(y);
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("lambda must lie in [0, 1]");
  if (minkowski_ell(x.coords, y.coords) < 0.0) {
    throw NotCausallyRelated(to_string(Location{x}) + " is not in the causal past of " +
                             to_string(Location{y}));
  }
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  std::vector<double> c(x.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = x[i] + lambda * (y[i] - x[i]);
  return Event(std::move(c));
}

bool Diamond::contains(const Event& z) const {
  return minkowski_ell(lo.coords, z.coords) >= 0.0 && minkowski_ell(z.coords, hi.coords) >= 0.0;
}

Diamond bounding_emerald(const SpacetimeModel& model, std::span<const Event> points,
                         double margin) {
  if (!model.is_minkowski()) throw CapabilityMissing("emeralds need Minkowski coordinates");
  if (points.empty()) throw InvalidArgument("bounding_emerald needs at least one point");
  if (!(margin > 0.0)) throw InvalidArgument("margin must be positive");
  const std::size_t d = model.event_size();
  for (const auto& p : points) model.validate(p);

  std::vector<double> lo_box(d, kPosInf), hi_box(d, kNegInf);
  for (const auto& p : points) {
    for (std::size_t i = 1; i < d; ++i) {
      lo_box[i] = std::min(lo_box[i], p[i]);
      hi_box[i] = std::max(hi_box[i], p[i]);
    }
  }
  std::vector<double> center(d, 0.0);
  for (std::size_t i = 1; i < d; ++i) center[i] = 0.5 * (lo_box[i] + hi_box[i]);

  double t_lo = kPosInf, t_hi = kNegInf;
  for (const auto& p : points) {
    double s = 0.0;
    for (std::size_t i = 1; i < d; ++i) s += (p[i] - center[i]) * (p[i] - center[i]);
    const double r = std::sqrt(s);
    t_lo = std::min(t_lo, p.time() - r);
    t_hi = std::max(t_hi, p.time() + r);
  }
  std::vector<double> lo = center, hi = center;
  lo[0] = t_lo - margin;
  hi[0] = t_hi + margin;
  return Diamond{Event(std::move(lo)), Event(std::move(hi))};
}

double euclidean_length_bound(const SpacetimeModel& model, const Diamond& diamond) {
  if (!model.is_minkowski()) throw CapabilityMissing("length bound needs Minkowski coordinates");
  if (minkowski_ell(diamond.lo.coords, diamond.hi.coords) < 0.0) {
    throw NotCausallyRelated("diamond corners are not causally ordered");
  }
  return std::sqrt(2.0) * (diamond.hi.time() - diamond.lo.time());
}

double euclidean_polyline_length(std::span<const Event> points) {
  double total = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < points[k].size(); ++i) {
      const double d = points[k][i] - points[k - 1][i];
      s += d * d;
    }
    total += std::sqrt(s);
  }
  return total;
}

}  // namespace causal_ot
