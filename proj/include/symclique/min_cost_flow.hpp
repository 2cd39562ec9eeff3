// Copyright 2026 The symclique Authors
//
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

#ifndef SYMCLIQUE_MIN_COST_FLOW_HPP_
#define SYMCLIQUE_MIN_COST_FLOW_HPP_

#include <vector>

namespace symclique {

// Successive shortest paths with Johnson potentials. Edge costs must be
// non-negative when added.
class MinCostFlow {
 public:
  struct Result {
    int flow = 0;
    double cost = 0.0;
  };

  explicit MinCostFlow(int num_nodes);

  int AddEdge(int from, int to, int capacity, double cost);
  Result Solve(int source, int sink, int max_flow);
  int Flow(int edge_id) const;

 private:
  struct Arc {
    int to;
    int rev;
    int cap;
    double cost;
  };
  struct ArcRef {
    int node;
    int index;
    int capacity;
  };

  std::vector<std::vector<Arc>> graph_;
  std::vector<ArcRef> edges_;
};

}  // namespace symclique

#endif  // SYMCLIQUE_MIN_COST_FLOW_HPP_
