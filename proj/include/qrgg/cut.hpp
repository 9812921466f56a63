#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qrgg/graph.hpp"

namespace qrgg {

using Capacity = std::int64_t;

/// An s-t cut over the relays: partition_vk sits with the source, the other
/// relays sit with the terminal.
struct CutResult {
  NodeId terminal = 0;
  std::vector<NodeId> partition_vk;  // sorted relay ids
  std::size_t k = 0;
  Capacity capacity = 0;
  bool is_minimum = false;
  /// Edge-disjoint s->t paths realizing `capacity` (max-flow certificate).
  /// Empty for cuts not produced by min_cut.
  std::vector<std::vector<NodeId>> paths;
};

/// Edges crossing the cut: source to terminal-side relays, source-side relays
/// to terminal-side relays, and source-side relays to the terminal.
Capacity cut_capacity(const ConnectivityGraph& graph, NodeId terminal,
                      std::span<const NodeId> partition_vk);

/// Exact minimum cut via integer max-flow (BFS augmenting paths). The
/// partition returned is the set of relays reachable from the source in the
/// final residual network, i.e. the source-side-minimal minimum cut. Other
/// terminals are ignored for the duration of the computation.
CutResult min_cut(const ConnectivityGraph& graph, NodeId terminal);

/// Largest relay count brute_force_min_cut accepts.
inline constexpr std::size_t kBruteForceMaxRelays = 20;

/// Exhaustive minimum over all 2^n relay partitions; ties go to the
/// lexicographically smallest sorted partition.
CutResult brute_force_min_cut(const ConnectivityGraph& graph, NodeId terminal);

/// min_cut for every terminal, in terminal order.
std::vector<CutResult> terminal_min_cuts(const ConnectivityGraph& graph);

/// Network coding multicast rate: the minimum over terminals of the s-t min cut.
Capacity multicast_capacity(const ConnectivityGraph& graph);

}  // namespace qrgg
