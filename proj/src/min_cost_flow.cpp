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

#include "symclique/min_cost_flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace symclique {

MinCostFlow::MinCostFlow(int num_nodes) : graph_(num_nodes) {}

int MinCostFlow::AddEdge(int from, int to, int capacity, double cost) {
  if (cost < 0.0) throw std::invalid_argument("edge costs must be non-negative");
  if (capacity < 0) throw std::invalid_argument("edge capacity must be non-negative");
  const int forward = static_cast<int>(graph_[from].size());
  const int backward = static_cast<int>(graph_[to].size()) + (from == to ? 1 : 0);
  graph_[from].push_back({to, backward, capacity, cost});
  graph_[to].push_back({from, forward, 0, -cost});
  edges_.push_back({from, forward, capacity});
  return static_cast<int>(edges_.size()) - 1;
}

int MinCostFlow::Flow(int edge_id) const {
  const ArcRef& ref = edges_[edge_id];
  return ref.capacity - graph_[ref.node][ref.index].cap;
}

MinCostFlow::Result MinCostFlow::Solve(int source, int sink, int max_flow) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(graph_.size());
  std::vector<double> potential(n, 0.0);
  std::vector<double> dist(n);
  std::vector<int> prev_node(n), prev_arc(n);
  Result result;
  using Item = std::pair<double, int>;

  while (result.flow < max_flow) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev_node.begin(), prev_node.end(), -1);
    dist[source] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (int a = 0; a < static_cast<int>(graph_[u].size()); ++a) {
        const Arc& arc = graph_[u][a];
        if (arc.cap <= 0) continue;
        // Clamp rounding noise so Dijkstra sees non-negative reduced costs.
        const double reduced = std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
        if (dist[u] + reduced < dist[arc.to]) {
          dist[arc.to] = dist[u] + reduced;
          prev_node[arc.to] = u;
          prev_arc[arc.to] = a;
          heap.push({dist[arc.to], arc.to});
        }
      }
    }
    if (dist[sink] == kInf) break;
    for (int v = 0; v < n; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }
    int push = max_flow - result.flow;
    for (int v = sink; v != source; v = prev_node[v]) {
      push = std::min(push, graph_[prev_node[v]][prev_arc[v]].cap);
    }
    for (int v = sink; v != source; v = prev_node[v]) {
      Arc& arc = graph_[prev_node[v]][prev_arc[v]];
      arc.cap -= push;
      graph_[v][arc.rev].cap += push;
      result.cost += push * arc.cost;
    }
    result.flow += push;
  }
  return result;
}

}  // namespace symclique
