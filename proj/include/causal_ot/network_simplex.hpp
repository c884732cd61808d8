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

#ifndef CAUSAL_OT_NETWORK_SIMPLEX_HPP_
#define CAUSAL_OT_NETWORK_SIMPLEX_HPP_

#include <cstddef>
#include <vector>

namespace causal_ot {

// Transportation problem on a sparse bipartite arc set:
//
//   maximise  sum_a gain_a * flow_a
//   s.t.      out-flow of source i = supply[i], in-flow of target j = demand[j]
//
// Pairs without an arc are structurally forbidden. Solved by a primal network
// simplex over a spanning tree rooted at an auxiliary node joined to every
// source and target by artificial arcs. Artificial flow is priced
// lexicographically ahead of the real objective, so no big-M constant enters
// the arithmetic. Strongly feasible trees (Cunningham's leaving rule) rule out
// cycling; entering arcs are chosen by Dantzig's rule, ties to the lowest
// arc index.
struct TransportArc {
  std::size_t source;
  std::size_t target;
  double gain;
};

struct TransportSolution {
  bool feasible = false;
  double objective = 0.0;
  // Artificial mass left at the optimum of the feasibility level.
  double infeasibility = 0.0;
  std::vector<double> flow;       // per arc
  std::vector<double> source_potential;  // phi
  std::vector<double> target_potential;  // psi, psi_j - phi_i >= gain on every arc
  std::size_t pivots = 0;
};

TransportSolution solve_transport(const std::vector<double>& supply,
                                  const std::vector<double>& demand,
                                  const std::vector<TransportArc>& arcs,
                                  double feasibility_tol = 1e-10);

}  // namespace causal_ot

#endif  // CAUSAL_OT_NETWORK_SIMPLEX_HPP_
