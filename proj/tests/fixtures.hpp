#pragma once

#include <vector>

#include "qrgg/graph.hpp"

namespace qrgg::testing {

/// Every node sits near the middle of the square under a model that connects
/// any pair within 0.5, so hand-written edge lists are always admissible.
inline ConnectivityGraph hand_graph(std::size_t n_relays, std::size_t n_terminals,
                                    const std::vector<Edge>& edges) {
  const std::size_t total = 1 + n_relays + n_terminals;
  std::vector<Point> positions;
  for (std::size_t i = 0; i < total; ++i) {
    positions.push_back({0.45 + 0.1 * static_cast<double>(i) / static_cast<double>(total),
                         0.5});
  }
  return ConnectivityGraph::from_edges(n_relays, n_terminals, positions, edges,
                                       ConnectionModel::fixed(0.5, 0.5, 1.0));
}

/// X=0, relays A=1, B=2, Y=3 with X-A, A-B, B-Y.
inline ConnectivityGraph wheatstone() {
  return hand_graph(2, 1, {{0, 1}, {1, 2}, {2, 3}});
}

/// Classic butterfly: source 0, relays a=1 b=2 c=3 d=4, terminals 5 and 6.
/// Middle edge c-d is the shared bottleneck.
inline ConnectivityGraph butterfly() {
  return hand_graph(4, 2,
                    {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4},
                     {1, 5}, {4, 5}, {2, 6}, {4, 6}});
}

/// Terminal 5 can only get two paths by using 1->3, terminal 6 only by using
/// 3->1, so any flow-orientation union has the 2-cycle 1 <-> 3.
inline ConnectivityGraph opposing_flows() {
  return hand_graph(4, 2,
                    {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {1, 6},
                     {2, 6}, {3, 4}, {3, 5}, {4, 5}});
}

/// s - r1 - r2 - r3 - t plus chord r1 - r3.
inline ConnectivityGraph path_with_chord() {
  return hand_graph(3, 1, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 3}});
}

}  // namespace qrgg::testing
