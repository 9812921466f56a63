#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qrgg/model.hpp"
#include "qrgg/random_stream.hpp"

namespace qrgg {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

enum class Role { kSource, kRelay, kTerminal };

/// Source, relays and terminals placed in the unit square with a symmetric
/// 0/1 capacity relation between them.
///
/// Node ids are laid out as: 0 is the source, 1..n are the relays, and
/// n+1..n+tau are the terminals. The source is never adjacent to a terminal
/// and terminals are never adjacent to each other; from_edges rejects such
/// edges. The graph is immutable once built.
class ConnectivityGraph {
 public:
  /// Edges may be given in any order and orientation; duplicates and
  /// self-loops are rejected, as are edges between two nodes whose kernel
  /// probability is 0 at the stored positions.
  static ConnectivityGraph from_edges(std::size_t n_relays,
                                      std::size_t n_terminals,
                                      std::vector<Point> positions,
                                      std::span<const Edge> edges,
                                      ConnectionModel model,
                                      std::uint64_t seed = 0);

  std::size_t n_relays() const noexcept { return n_relays_; }
  std::size_t n_terminals() const noexcept { return n_terminals_; }
  std::size_t node_count() const noexcept { return 1 + n_relays_ + n_terminals_; }

  static constexpr NodeId source() noexcept { return 0; }
  NodeId relay(std::size_t i) const { return static_cast<NodeId>(1 + i); }
  NodeId terminal(std::size_t i) const {
    return static_cast<NodeId>(1 + n_relays_ + i);
  }
  std::vector<NodeId> relays() const;
  std::vector<NodeId> terminals() const;

  Role role(NodeId v) const;
  bool is_relay(NodeId v) const noexcept { return v >= 1 && v <= n_relays_; }
  bool is_terminal(NodeId v) const noexcept {
    return v > n_relays_ && v < node_count();
  }

  /// C_uv in {0, 1}.
  bool connected(NodeId u, NodeId v) const;
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }

  /// Every edge once as (i, j) with i < j, sorted lexicographically.
  std::vector<Edge> edges() const;
  std::size_t edge_count() const noexcept { return edge_count_; }

  const std::vector<Point>& positions() const noexcept { return positions_; }
  const ConnectionModel& model() const noexcept { return model_; }
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  ConnectivityGraph(std::size_t n_relays, std::size_t n_terminals,
                    std::vector<Point> positions, ConnectionModel model,
                    std::uint64_t seed);

  std::size_t n_relays_;
  std::size_t n_terminals_;
  std::vector<Point> positions_;
  std::vector<std::vector<NodeId>> adjacency_;  // sorted
  std::size_t edge_count_ = 0;
  ConnectionModel model_;
  std::uint64_t seed_;
};

/// Samples 1 + n_relays + n_terminals positions from rng.child("geometry", 0)
/// and decides every allowed pair (i < j, canonical order) with
/// rng.child("connect", 0). Source-terminal and terminal-terminal pairs are
/// skipped without consuming draws.
ConnectivityGraph build_connectivity_graph(std::size_t n_relays,
                                           std::size_t n_terminals,
                                           const ConnectionModel& model,
                                           const RandomStream& rng);

/// Adds one edge; used for monotonicity checks. Throws if the edge is not
/// allowed or already present.
ConnectivityGraph with_added_edge(const ConnectivityGraph& graph, Edge edge);

nlohmann::json to_json(const ConnectivityGraph& graph);
ConnectivityGraph graph_from_json(const nlohmann::json& j);

}  // namespace qrgg
