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

#include "causal_ot/max_flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace causal_ot {

MaxFlow::MaxFlow(std::size_t num_nodes, double eps)
    : eps_(eps), adjacency_(num_nodes), level_(num_nodes), next_(num_nodes),
      reachable_(num_nodes, false) {}

std::size_t MaxFlow::add_arc(std::size_t from, std::size_t to, double capacity) {
  const std::size_t id = arcs_.size() / 2;
  adjacency_[from].push_back(arcs_.size());
  arcs_.push_back({to, capacity, 0.0});
  adjacency_[to].push_back(arcs_.size());
  arcs_.push_back({from, 0.0, 0.0});
  return id;
}

bool MaxFlow::build_levels(std::size_t source, std::size_t sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::deque<std::size_t> queue{source};
  level_[source] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t a : adjacency_[u]) {
      const Arc& arc = arcs_[a];
      if (level_[arc.to] < 0 && arc.capacity - arc.flow > eps_) {
        level_[arc.to] = level_[u] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

double MaxFlow::push(std::size_t node, std::size_t sink, double limit) {
  if (node == sink) return limit;
  for (std::size_t& i = next_[node]; i < adjacency_[node].size(); ++i) {
    const std::size_t a = adjacency_[node][i];
    Arc& arc = arcs_[a];
    const double residual = arc.capacity - arc.flow;
    if (residual <= eps_ || level_[arc.to] != level_[node] + 1) continue;
    const double pushed = push(arc.to, sink, std::min(limit, residual));
    if (pushed > 0.0) {
      arc.flow += pushed;
      arcs_[a ^ 1].flow -= pushed;
      return pushed;
    }
  }
  return 0.0;
}

double MaxFlow::solve(std::size_t source, std::size_t sink) {
  double total = 0.0;
  while (build_levels(source, sink)) {
    std::fill(next_.begin(), next_.end(), 0);
    while (true) {
      const double pushed = push(source, sink, std::numeric_limits<double>::infinity());
      if (pushed <= 0.0) break;
      total += pushed;
    }
  }
  for (std::size_t v = 0; v < level_.size(); ++v) reachable_[v] = level_[v] >= 0;
  return total;
}

}  // namespace causal_ot
