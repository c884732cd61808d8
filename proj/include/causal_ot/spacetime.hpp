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

#ifndef CAUSAL_OT_SPACETIME_HPP_
#define CAUSAL_OT_SPACETIME_HPP_

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace causal_ot {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Base of all library errors. Derived types name the failure class so the CLI
// can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InvalidArgument : public Error {
  using Error::Error;
};
class NotCausallyRelated : public Error {
  using Error::Error;
};
class CapabilityMissing : public Error {
  using Error::Error;
};
class NonCausalCovector : public Error {
  using Error::Error;
};

// A point of R^{1,n}. coords[0] is the time coordinate; signature (+,-,...,-).
struct Event {
  std::vector<double> coords;

  Event() = default;
  explicit Event(std::vector<double> c);
  Event(std::initializer_list<double> c) : Event(std::vector<double>(c)) {}

  std::size_t size() const { return coords.size(); }
  double time() const { return coords.front(); }
  double operator[](std::size_t i) const { return coords[i]; }

  friend bool operator==(const Event&, const Event&) = default;
};

// Index into the point list of a finite causal space.
struct Label {
  std::size_t index = 0;
  friend bool operator==(const Label&, const Label&) = default;
};

// Where an atom sits: an event of Minkowski space or a label of a finite
// causal space.
using Location = std::variant<Event, Label>;

std::string to_string(const Location& loc);

struct CausalVector {
  Event base;
  std::vector<double> components;
};

struct CausalCovector {
  Event base;
  std::vector<double> components;

  // Component pairing with a vector.
  double operator()(std::span<const double> v) const;
};

enum class Relation { kBefore, kStrictlyBefore, kUnrelated };

const char* to_string(Relation r);

struct Minkowski {
  std::size_t spatial_dim = 1;
};

// Abstract finite causal space given by its time-separation matrix. Entries
// are -inf or >= 0; the relation {ell >= 0} is a partial order.
class FiniteCausal {
 public:
  FiniteCausal(std::vector<std::string> labels,
               std::vector<std::vector<double>> ell);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<double>>& ell() const { return ell_; }
  double at(std::size_t i, std::size_t j) const { return ell_[i][j]; }
  Label find(const std::string& name) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> ell_;
};

class SpacetimeModel {
 public:
  static SpacetimeModel minkowski(std::size_t spatial_dim);
  static SpacetimeModel finite(FiniteCausal space);

  bool is_minkowski() const { return std::holds_alternative<Minkowski>(variant_); }
  // Number of coordinates of an event (n + 1). Throws on finite spaces.
  std::size_t event_size() const;
  const FiniteCausal& finite_space() const;
  const std::variant<Minkowski, FiniteCausal>& variant() const { return variant_; }

  // Throws InvalidArgument if loc does not belong to this model.
  void validate(const Location& loc) const;

  Relation relation(const Location& x, const Location& y) const;
  // Time separation ell(x, y); -inf when x is not in the causal past of y.
  double ell(const Location& x, const Location& y) const;
  bool causally_before(const Location& x, const Location& y) const {
    return ell(x, y) >= 0.0;
  }

 private:
  explicit SpacetimeModel(std::variant<Minkowski, FiniteCausal> v)
      : variant_(std::move(v)) {}
  std::variant<Minkowski, FiniteCausal> variant_;
};

Relation causally_related(const SpacetimeModel& model, const Location& x,
                          const Location& y);
double time_separation(const SpacetimeModel& model, const Location& x,
                       const Location& y);

// Closed-form Minkowski time separation on raw coordinates.
double minkowski_ell(std::span<const double> x, std::span<const double> y);

bool is_future_causal(std::span<const double> v);
bool is_causal_covector(std::span<const double> w);

// Hyperbolic norm: sqrt(v0^2 - |v|^2) on the future cone, -inf elsewhere.
double norm_g(const SpacetimeModel& model, const CausalVector& v);
double norm_g(std::span<const double> v);

// Dual hyperbolic norm inf_{|v|_g >= 1} w(v). Throws NonCausalCovector.
double dual_norm(const SpacetimeModel& model, const CausalCovector& w);
double dual_norm(std::span<const double> w);

// Point at parameter lambda on the straight geodesic from x to y.
Event geodesic_point(const SpacetimeModel& model, const Event& x, const Event& y,
                     double lambda);

// Causal diamond J(lo, hi).
struct Diamond {
  Event lo;
  Event hi;

  bool contains(const Event& z) const;
};

// Diamond whose interior contains every point, with time margin `margin`.
Diamond bounding_emerald(const SpacetimeModel& model, std::span<const Event> points,
                         double margin = 1.0);

// Constant C with Euclidean length <= C for every causal curve in the diamond.
double euclidean_length_bound(const SpacetimeModel& model, const Diamond& diamond);

// Euclidean length of the polyline through `points`.
double euclidean_polyline_length(std::span<const Event> points);

}  // namespace causal_ot

#endif  // CAUSAL_OT_SPACETIME_HPP_
