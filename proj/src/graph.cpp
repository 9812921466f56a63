#include "qrgg/graph.hpp"

#include <algorithm>
#include <string>

#include "qrgg/errors.hpp"

namespace qrgg {

namespace {

[[noreturn]] void malformed(const std::string& message) {
  throw Error(ErrorCode::kMalformedInput, message);
}

}  // namespace

ConnectivityGraph::ConnectivityGraph(std::size_t n_relays,
                                     std::size_t n_terminals,
                                     std::vector<Point> positions,
                                     ConnectionModel model, std::uint64_t seed)
    : n_relays_(n_relays),
      n_terminals_(n_terminals),
      positions_(std::move(positions)),
      adjacency_(1 + n_relays + n_terminals),
      model_(model),
      seed_(seed) {
  if (positions_.size() != node_count()) {
    malformed("expected " + std::to_string(node_count()) + " positions, got " +
              std::to_string(positions_.size()));
  }
  for (const Point& p : positions_) {
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      malformed("node position outside the unit square");
    }
  }
}

ConnectivityGraph ConnectivityGraph::from_edges(std::size_t n_relays,
                                                std::size_t n_terminals,
                                                std::vector<Point> positions,
                                                std::span<const Edge> edges,
                                                ConnectionModel model,
                                                std::uint64_t seed) {
  ConnectivityGraph g(n_relays, n_terminals, std::move(positions), model, seed);
  for (auto [u, v] : edges) {
    if (u >= g.node_count() || v >= g.node_count()) {
      throw Error(ErrorCode::kUnknownNode, "edge endpoint out of range");
    }
    if (u == v) malformed("self-loop on node " + std::to_string(u));
    const Role ru = g.role(u);
    const Role rv = g.role(v);
    if (ru != Role::kRelay && rv != Role::kRelay) {
      malformed("edge " + std::to_string(u) + "-" + std::to_string(v) +
                " must have a relay endpoint");
    }
    if (kernel_probability(distance(g.positions_[u], g.positions_[v]), model) <=
        0.0) {
      malformed("edge " + std::to_string(u) + "-" + std::to_string(v) +
                " spans a zero-probability distance");
    }
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      malformed("duplicate edge");
    }
  }
  g.edge_count_ = edges.size();
  return g;
}

std::vector<NodeId> ConnectivityGraph::relays() const {
  std::vector<NodeId> out(n_relays_);
  for (std::size_t i = 0; i < n_relays_; ++i) out[i] = relay(i);
  return out;
}

std::vector<NodeId> ConnectivityGraph::terminals() const {
  std::vector<NodeId> out(n_terminals_);
  for (std::size_t i = 0; i < n_terminals_; ++i) out[i] = terminal(i);
  return out;
}

Role ConnectivityGraph::role(NodeId v) const {
  if (v >= node_count()) {
    throw Error(ErrorCode::kUnknownNode, "node " + std::to_string(v) + " does not exist");
  }
  if (v == source()) return Role::kSource;
  return is_relay(v) ? Role::kRelay : Role::kTerminal;
}

bool ConnectivityGraph::connected(NodeId u, NodeId v) const {
  const auto& list = adjacency_.at(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<Edge> ConnectivityGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < adjacency_.size(); ++u) {
    for (NodeId v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

ConnectivityGraph build_connectivity_graph(std::size_t n_relays,
                                           std::size_t n_terminals,
                                           const ConnectionModel& model,
                                           const RandomStream& rng) {
  if (n_relays < 1 || n_terminals < 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "need at least one relay and one terminal");
  }
  RandomStream geometry = rng.child("geometry", 0);
  RandomStream connect = rng.child("connect", 0);
  const std::size_t total = 1 + n_relays + n_terminals;
  std::vector<Point> positions = sample_points(total, geometry);

  std::vector<Edge> edges;
  for (NodeId i = 0; i < total; ++i) {
    const bool i_relay = i >= 1 && i <= n_relays;
    for (NodeId j = i + 1; j < total; ++j) {
      const bool j_relay = j <= n_relays;
      if (!i_relay && !j_relay) continue;  // source-terminal or terminal-terminal
      if (connect_decision(positions[i], positions[j], model, connect)) {
        edges.emplace_back(i, j);
      }
    }
  }
  return ConnectivityGraph::from_edges(n_relays, n_terminals,
                                       std::move(positions), edges, model,
                                       rng.seed());
}

ConnectivityGraph with_added_edge(const ConnectivityGraph& graph, Edge edge) {
  std::vector<Edge> edges = graph.edges();
  edges.push_back(edge);
  return ConnectivityGraph::from_edges(graph.n_relays(), graph.n_terminals(),
                                       graph.positions(), edges, graph.model(),
                                       graph.seed());
}

nlohmann::json to_json(const ConnectivityGraph& graph) {
  nlohmann::json positions = nlohmann::json::array();
  for (const Point& p : graph.positions()) positions.push_back({p.x, p.y});
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : graph.edges()) edges.push_back({u, v});
  return {
      {"n_relays", graph.n_relays()},
      {"terminals", graph.terminals()},
      {"positions", std::move(positions)},
      {"edges", std::move(edges)},
      {"model", to_json(graph.model())},
      {"seed", graph.seed()},
  };
}

ConnectivityGraph graph_from_json(const nlohmann::json& j) {
  try {
    const auto n_relays = j.at("n_relays").get<std::size_t>();
    const auto terminals = j.at("terminals").get<std::vector<NodeId>>();
    for (std::size_t i = 0; i < terminals.size(); ++i) {
      if (terminals[i] != 1 + n_relays + i) {
        malformed("terminal ids must be n_relays+1 .. n_relays+tau in order");
      }
    }
    std::vector<Point> positions;
    for (const auto& p : j.at("positions")) {
      positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    }
    return ConnectivityGraph::from_edges(
        n_relays, terminals.size(), std::move(positions), edges,
        model_from_json(j.at("model")), j.value("seed", std::uint64_t{0}));
  } catch (const nlohmann::json::exception& e) {
    malformed(std::string("bad graph JSON: ") + e.what());
  }
}

}  // namespace qrgg
