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

#include "causal_ot/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "causal_ot/spacetime.hpp"

namespace causal_ot {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Arc {
  std::size_t from;
  std::size_t to;
  double cost1;  // artificial mass (exact small integers)
  double cost2;  // negated gain
};

class Simplex {
 public:
  Simplex(const std::vector<double>& supply, const std::vector<double>& demand,
          const std::vector<TransportArc>& arcs)
      : n_(supply.size()), m_(demand.size()), real_arcs_(arcs.size()),
        root_(supply.size() + demand.size()) {
    const std::size_t nodes = n_ + m_ + 1;
    balance_.assign(nodes, 0.0);
    for (std::size_t i = 0; i < n_; ++i) balance_[i] = supply[i];
    for (std::size_t j = 0; j < m_; ++j) balance_[n_ + j] = -demand[j];

    arcs_.reserve(real_arcs_ + n_ + m_);
    double max_gain = 0.0;
    for (const auto& a : arcs) {
      if (a.source >= n_ || a.target >= m_) throw InvalidArgument("arc endpoint out of range");
      if (!std::isfinite(a.gain)) throw InvalidArgument("arc gains must be finite");
      arcs_.push_back({a.source, n_ + a.target, 0.0, -a.gain});
      max_gain = std::max(max_gain, std::abs(a.gain));
    }
    for (std::size_t i = 0; i < n_; ++i) arcs_.push_back({i, root_, 1.0, 0.0});
    for (std::size_t j = 0; j < m_; ++j) arcs_.push_back({root_, n_ + j, 1.0, 0.0});
    price_eps_ = 1e-12 * (1.0 + max_gain);

    flow_.assign(arcs_.size(), 0.0);
    basic_.assign(arcs_.size(), false);
    for (std::size_t i = 0; i < n_; ++i) {
      flow_[real_arcs_ + i] = supply[i];
      basic_[real_arcs_ + i] = true;
    }
    for (std::size_t j = 0; j < m_; ++j) {
      flow_[real_arcs_ + n_ + j] = demand[j];
      basic_[real_arcs_ + n_ + j] = true;
    }
    parent_.assign(nodes, kNone);
    parent_arc_.assign(nodes, kNone);
    depth_.assign(nodes, 0);
    pi1_.assign(nodes, 0.0);
    pi2_.assign(nodes, 0.0);
  }

  std::size_t run() {
    const std::size_t max_pivots = 50 * (arcs_.size() + 10) * (n_ + m_ + 1);
    std::size_t pivots = 0;
    build_tree();
    while (true) {
      const std::size_t entering = select_entering();
      if (entering == kNone) break;
      pivot(entering);
      build_tree();
      if (++pivots > max_pivots) throw Error("network simplex exceeded its pivot budget");
    }
    settle_tree_flows();
    return pivots;
  }

  TransportSolution extract(std::size_t pivots, double feasibility_tol) const {
    TransportSolution sol;
    sol.pivots = pivots;
    sol.flow.assign(flow_.begin(), flow_.begin() + static_cast<std::ptrdiff_t>(real_arcs_));
    for (std::size_t a = real_arcs_; a < arcs_.size(); ++a) sol.infeasibility += flow_[a];
    sol.feasible = sol.infeasibility <= feasibility_tol;
    for (std::size_t a = 0; a < real_arcs_; ++a) sol.objective -= arcs_[a].cost2 * flow_[a];

    // Fold the feasibility level into the potentials with the smallest weight
    // that keeps every real arc dual feasible.
    double weight = 0.0;
    for (std::size_t a = 0; a < real_arcs_; ++a) {
      const auto [rc1, rc2] = reduced_cost(a);
      if (rc1 > 0.5 && rc2 < 0.0) weight = std::max(weight, -rc2 / rc1);
    }
    sol.source_potential.resize(n_);
    sol.target_potential.resize(m_);
    for (std::size_t i = 0; i < n_; ++i) sol.source_potential[i] = -(pi2_[i] + weight * pi1_[i]);
    for (std::size_t j = 0; j < m_; ++j) {
      sol.target_potential[j] = -(pi2_[n_ + j] + weight * pi1_[n_ + j]);
    }
    return sol;
  }

 private:
  std::pair<double, double> reduced_cost(std::size_t a) const {
    const Arc& arc = arcs_[a];
    return {arc.cost1 + pi1_[arc.from] - pi1_[arc.to], arc.cost2 + pi2_[arc.from] - pi2_[arc.to]};
  }

  void build_tree() {
    const std::size_t nodes = balance_.size();
    std::vector<std::vector<std::size_t>> adj(nodes);
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      if (!basic_[a]) continue;
      adj[arcs_[a].from].push_back(a);
      adj[arcs_[a].to].push_back(a);
    }
    std::fill(parent_.begin(), parent_.end(), kNone);
    order_.clear();
    order_.push_back(root_);
    parent_[root_] = root_;
    parent_arc_[root_] = kNone;
    depth_[root_] = 0;
    pi1_[root_] = 0.0;
    pi2_[root_] = 0.0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
      const std::size_t u = order_[head];
      for (std::size_t a : adj[u]) {
        if (a == parent_arc_[u]) continue;
        const Arc& arc = arcs_[a];
        const std::size_t v = arc.from == u ? arc.to : arc.from;
        parent_[v] = u;
        parent_arc_[v] = a;
        depth_[v] = depth_[u] + 1;
        // Zero reduced cost on tree arcs: cost + pi_from - pi_to = 0.
        if (arc.from == u) {
          pi1_[v] = pi1_[u] + arc.cost1;
          pi2_[v] = pi2_[u] + arc.cost2;
        } else {
          pi1_[v] = pi1_[u] - arc.cost1;
          pi2_[v] = pi2_[u] - arc.cost2;
        }
        order_.push_back(v);
      }
    }
    if (order_.size() != nodes) throw Error("network simplex basis is not a spanning tree");
  }

  std::size_t select_entering() const {
    std::size_t best = kNone;
    double best1 = -0.5;
    double best2 = -price_eps_;
    bool level_one = false;
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      if (basic_[a]) continue;
      const auto [rc1, rc2] = reduced_cost(a);
      if (rc1 < best1) {
        best = a;
        best1 = rc1;
        level_one = true;
      } else if (!level_one && std::abs(rc1) < 0.5 && rc2 < best2) {
        best = a;
        best2 = rc2;
      }
    }
    return best;
  }

  void pivot(std::size_t entering) {
    const std::size_t u = arcs_[entering].from;
    const std::size_t v = arcs_[entering].to;

    // Cycle in orientation order starting at the apex: apex -> ... -> u,
    // the entering arc, v -> ... -> apex.
    std::vector<std::size_t> up_u, up_v;
    std::size_t a = u, b = v;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        up_u.push_back(a);
        a = parent_[a];
      } else {
        up_v.push_back(b);
        b = parent_[b];
      }
    }
    struct Step {
      std::size_t arc;
      bool forward;
    };
    std::vector<Step> cycle;
    cycle.reserve(up_u.size() + up_v.size() + 1);
    for (auto it = up_u.rbegin(); it != up_u.rend(); ++it) {
      // Traversed parent(w) -> w.
      const std::size_t w = *it;
      const std::size_t arc = parent_arc_[w];
      cycle.push_back({arc, arcs_[arc].to == w});
    }
    cycle.push_back({entering, true});
    for (std::size_t w : up_v) {
      // Traversed w -> parent(w).
      const std::size_t arc = parent_arc_[w];
      cycle.push_back({arc, arcs_[arc].from == w});
    }

    double delta = std::numeric_limits<double>::infinity();
    for (const auto& s : cycle) {
      if (!s.forward) delta = std::min(delta, flow_[s.arc]);
    }
    if (!std::isfinite(delta)) throw Error("transportation problem is unbounded");
    std::size_t leaving = kNone;
    for (const auto& s : cycle) {
      if (!s.forward && flow_[s.arc] <= delta) leaving = s.arc;
    }
    for (const auto& s : cycle) {
      if (s.forward) {
        flow_[s.arc] += delta;
      } else {
        flow_[s.arc] -= delta;
      }
    }
    flow_[leaving] = 0.0;
    basic_[leaving] = false;
    basic_[entering] = true;
  }

  // Recomputes basic flows from the tree so node balances hold exactly up to
  // summation rounding.
  void settle_tree_flows() {
    std::vector<double> subtree = balance_;
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
      if (!basic_[a]) flow_[a] = 0.0;
    }
    for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
      const std::size_t w = *it;
      if (w == root_) continue;
      const std::size_t arc = parent_arc_[w];
      double f = arcs_[arc].from == w ? subtree[w] : -subtree[w];
      if (f < 0.0) {
        if (f < -1e-9) throw Error("network simplex produced a negative tree flow");
        f = 0.0;
      }
      flow_[arc] = f;
      subtree[parent_[w]] += subtree[w];
    }
  }

  std::size_t n_, m_, real_arcs_, root_;
  double price_eps_ = 0.0;
  std::vector<Arc> arcs_;
  std::vector<double> balance_;
  std::vector<double> flow_;
  std::vector<bool> basic_;
  std::vector<std::size_t> parent_, parent_arc_, depth_, order_;
  std::vector<double> pi1_, pi2_;
};

}  // namespace

TransportSolution solve_transport(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const std::vector<TransportArc>& arcs,
                                  double feasibility_tol) {
  Simplex simplex(supply, demand, arcs);
  const std::size_t pivots = simplex.run();
  return simplex.extract(pivots, feasibility_tol);
}

}  // namespace causal_ot
