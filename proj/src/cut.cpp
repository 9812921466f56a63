#include "qrgg/cut.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <string>

#include "qrgg/errors.hpp"

namespace qrgg {

namespace {

void require_terminal(const ConnectivityGraph& graph, NodeId terminal) {
  if (!graph.is_terminal(terminal)) {
    throw Error(ErrorCode::kUnknownNode,
                "node " + std::to_string(terminal) + " is not a terminal");
  }
}

/// Residual network for one (source, terminal) pair. Local ids coincide with
/// graph ids for the source and relays; the terminal is local id n + 1.
class FlowNetwork {
 public:
  struct Arc {
    std::uint32_t to;
    std::uint32_t rev;
    int cap;
    int original;
  };

  FlowNetwork(const ConnectivityGraph& graph, NodeId terminal)
      : n_(graph.n_relays()), arcs_(n_ + 2) {
    const auto sink = static_cast<std::uint32_t>(n_ + 1);
    for (NodeId v : graph.neighbors(ConnectivityGraph::source())) {
      add_arc(0, v, 1, 0);
    }
    for (NodeId u = 1; u <= n_; ++u) {
      for (NodeId v : graph.neighbors(u)) {
        if (graph.is_relay(v) && u < v) add_arc(u, v, 1, 1);
      }
    }
    for (NodeId v : graph.neighbors(terminal)) add_arc(v, sink, 1, 0);
  }

  Capacity max_flow() {
    const auto sink = static_cast<std::uint32_t>(n_ + 1);
    Capacity flow = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parent(arcs_.size());
    for (;;) {
      std::vector<bool> seen(arcs_.size(), false);
      std::deque<std::uint32_t> queue{0};
      seen[0] = true;
      while (!queue.empty() && !seen[sink]) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (std::uint32_t i = 0; i < arcs_[u].size(); ++i) {
          const Arc& a = arcs_[u][i];
          if (a.cap > 0 && !seen[a.to]) {
            seen[a.to] = true;
            parent[a.to] = {u, i};
            queue.push_back(a.to);
          }
        }
      }
      if (!seen[sink]) return flow;
      int push = std::numeric_limits<int>::max();
      for (std::uint32_t v = sink; v != 0; v = parent[v].first) {
        auto [u, i] = parent[v];
        push = std::min(push, arcs_[u][i].cap);
      }
      for (std::uint32_t v = sink; v != 0; v = parent[v].first) {
        auto [u, i] = parent[v];
        Arc& a = arcs_[u][i];
        a.cap -= push;
        arcs_[a.to][a.rev].cap += push;
      }
      flow += push;
    }
  }

  /// Relays reachable from the source through arcs with residual capacity.
  std::vector<NodeId> source_side() const {
    std::vector<bool> seen(arcs_.size(), false);
    std::deque<std::uint32_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      const std::uint32_t u = queue.front();
      queue.pop_front();
      for (const Arc& a : arcs_[u]) {
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = true;
          queue.push_back(a.to);
        }
      }
    }
    std::vector<NodeId> out;
    for (NodeId v = 1; v <= n_; ++v) {
      if (seen[v]) out.push_back(v);
    }
    return out;
  }

  /// Splits the net flow into unit s->t paths; flow cycles are dropped.
  std::vector<std::vector<NodeId>> decompose(Capacity value,
                                             NodeId terminal) const {
    const auto sink = static_cast<std::uint32_t>(n_ + 1);
    std::vector<std::vector<std::uint32_t>> carrying(arcs_.size());
    for (std::uint32_t u = 0; u < arcs_.size(); ++u) {
      for (const Arc& a : arcs_[u]) {
        if (a.original - a.cap > 0) carrying[u].push_back(a.to);
      }
    }
    std::vector<std::vector<NodeId>> paths;
    for (Capacity k = 0; k < value; ++k) {
      std::vector<std::int64_t> parent(arcs_.size(), -1);
      std::deque<std::uint32_t> queue{0};
      parent[0] = 0;
      while (!queue.empty() && parent[sink] < 0) {
        const std::uint32_t u = queue.front();
        queue.pop_front();
        for (std::uint32_t v : carrying[u]) {
          if (parent[v] < 0) {
            parent[v] = u;
            queue.push_back(v);
          }
        }
      }
      if (parent[sink] < 0) break;  // unreachable by conservation
      std::vector<NodeId> path{terminal};
      for (std::uint32_t v = sink; v != 0;) {
        const auto u = static_cast<std::uint32_t>(parent[v]);
        auto& out = carrying[u];
        out.erase(std::find(out.begin(), out.end(), v));
        if (u != 0) path.push_back(u);
        v = u;
      }
      path.push_back(ConnectivityGraph::source());
      std::reverse(path.begin(), path.end());
      paths.push_back(std::move(path));
    }
    return paths;
  }

 private:
  void add_arc(std::uint32_t u, std::uint32_t v, int cap, int back_cap) {
    arcs_[u].push_back({v, static_cast<std::uint32_t>(arcs_[v].size()), cap, cap});
    arcs_[v].push_back(
        {u, static_cast<std::uint32_t>(arcs_[u].size() - 1), back_cap, back_cap});
  }

  std::size_t n_;
  std::vector<std::vector<Arc>> arcs_;
};

}  // namespace

Capacity cut_capacity(const ConnectivityGraph& graph, NodeId terminal,
                      std::span<const NodeId> partition_vk) {
  require_terminal(graph, terminal);
  std::vector<bool> inside(graph.node_count(), false);
  for (NodeId v : partition_vk) {
    if (!graph.is_relay(v)) {
      throw Error(ErrorCode::kInvalidParameter,
                  "partition member " + std::to_string(v) + " is not a relay");
    }
    if (inside[v]) {
      throw Error(ErrorCode::kInvalidParameter, "duplicate partition member");
    }
    inside[v] = true;
  }
  Capacity total = 0;
  for (NodeId i : graph.neighbors(ConnectivityGraph::source())) {
    if (!inside[i]) ++total;
  }
  for (NodeId j : partition_vk) {
    for (NodeId i : graph.neighbors(j)) {
      if ((graph.is_relay(i) && !inside[i]) || i == terminal) ++total;
    }
  }
  return total;
}

CutResult min_cut(const ConnectivityGraph& graph, NodeId terminal) {
  require_terminal(graph, terminal);
  FlowNetwork network(graph, terminal);
  CutResult result;
  result.terminal = terminal;
  result.capacity = network.max_flow();
  result.partition_vk = network.source_side();
  result.k = result.partition_vk.size();
  result.is_minimum = true;
  result.paths = network.decompose(result.capacity, terminal);
  return result;
}

CutResult brute_force_min_cut(const ConnectivityGraph& graph, NodeId terminal) {
  require_terminal(graph, terminal);
  const std::size_t n = graph.n_relays();
  if (n > kBruteForceMaxRelays) {
    throw Error(ErrorCode::kSizeGuard,
                "brute force min cut limited to " +
                    std::to_string(kBruteForceMaxRelays) + " relays");
  }
  CutResult best;
  best.terminal = terminal;
  best.capacity = std::numeric_limits<Capacity>::max();
  best.is_minimum = true;
  std::vector<NodeId> subset;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    subset.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) subset.push_back(graph.relay(i));
    }
    const Capacity value = cut_capacity(graph, terminal, subset);
    if (value < best.capacity ||
        (value == best.capacity && subset < best.partition_vk)) {
      best.capacity = value;
      best.partition_vk = subset;
    }
  }
  best.k = best.partition_vk.size();
  return best;
}

std::vector<CutResult> terminal_min_cuts(const ConnectivityGraph& graph) {
  std::vector<CutResult> cuts;
  cuts.reserve(graph.n_terminals());
  for (NodeId t : graph.terminals()) cuts.push_back(min_cut(graph, t));
  return cuts;
}

Capacity multicast_capacity(const ConnectivityGraph& graph) {
  if (graph.n_terminals() == 0) {
    throw Error(ErrorCode::kInvalidParameter, "multicast needs a terminal");
  }
  Capacity best = std::numeric_limits<Capacity>::max();
  for (NodeId t : graph.terminals()) {
    best = std::min(best, min_cut(graph, t).capacity);
  }
  return best;
}

}  // namespace qrgg
