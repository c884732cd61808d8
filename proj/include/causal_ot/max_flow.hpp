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

#ifndef CAUSAL_OT_MAX_FLOW_HPP_
#define CAUSAL_OT_MAX_FLOW_HPP_

#include <cstddef>
#include <vector>

namespace causal_ot {

// Dinic max-flow on real capacities. Residual capacities below `eps` count
// as saturated.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t num_nodes, double eps = 1e-15);

  // Returns the arc index.
  std::size_t add_arc(std::size_t from, std::size_t to, double capacity);

  double solve(std::size_t source, std::size_t sink);

  double flow(std::size_t arc) const { return arcs_[2 * arc].flow; }
  // Nodes reachable from the source in the final residual graph.
  const std::vector<bool>& source_side() const { return reachable_; }

 private:
  struct Arc {
    std::size_t to;
    double capacity;
    double flow;
  };

  bool build_levels(std::size_t source, std::size_t sink);
  double push(std::size_t node, std::size_t sink, double limit);

  double eps_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
  std::vector<bool> reachable_;
};

}  // namespace causal_ot

#endif  // CAUSAL_OT_MAX_FLOW_HPP_
