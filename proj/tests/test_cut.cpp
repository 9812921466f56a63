#include "qrgg/cut.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "qrgg/errors.hpp"

namespace qrgg {
namespace {

using testing::hand_graph;

// Edge count across the partition, straight from the edge list.
Capacity crossing_edges(const ConnectivityGraph& g, NodeId terminal,
                        const std::vector<NodeId>& vk) {
  std::set<NodeId> side(vk.begin(), vk.end());
  side.insert(0);
  Capacity total = 0;
  for (const auto& [u, v] : g.edges()) {
    const auto relevant = [&](NodeId x) {
      return x == 0 || x == terminal || g.is_relay(x);
    };
    if (!relevant(u) || !relevant(v)) continue;
    if (side.count(u) != side.count(v)) ++total;
  }
  return total;
}

ConnectivityGraph random_graph(std::uint64_t seed, std::size_t n, std::size_t tau) {
  const RandomStream root(seed);
  RandomStream params = root.child("params", 0);
  const double r = 0.1 + 0.4 * params.uniform();
  const double rp = std::min(1.0, r + 0.3 * params.uniform());
  return build_connectivity_graph(n, tau, ConnectionModel::fixed(r, rp, params.uniform()),
                                  root.child("graph", 0));
}

void expect_valid_certificate(const ConnectivityGraph& g, const CutResult& cut) {
  ASSERT_EQ(static_cast<Capacity>(cut.paths.size()), cut.capacity);
  std::set<std::pair<NodeId, NodeId>> used;
  for (const auto& path : cut.paths) {
    ASSERT_GE(path.size(), 3u);
    EXPECT_EQ(path.front(), 0u);
    EXPECT_EQ(path.back(), cut.terminal);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) EXPECT_TRUE(g.is_relay(path[i]));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      EXPECT_TRUE(g.connected(path[i], path[i + 1]));
      const auto key = std::minmax(path[i], path[i + 1]);
      EXPECT_TRUE(used.insert(key).second) << "edge reused";
    }
  }
}

TEST(CutCapacity, EmptyPartitionIsSourceDegree) {
  const auto g = random_graph(1, 12, 1);
  EXPECT_EQ(cut_capacity(g, g.terminal(0), {}),
            static_cast<Capacity>(g.degree(0)));
}

TEST(CutCapacity, FullPartitionIsTerminalDegree) {
  const auto g = random_graph(2, 12, 1);
  const auto all = g.relays();
  EXPECT_EQ(cut_capacity(g, g.terminal(0), all), static_cast<Capacity>(g.degree(g.terminal(0))));
}

TEST(CutCapacity, PathWithChord) {
  const auto g = testing::path_with_chord();
  const std::vector<NodeId> vk{1};
  EXPECT_EQ(cut_capacity(g, 4, vk), 2);
  EXPECT_EQ(crossing_edges(g, 4, vk), 2);
}

TEST(CutCapacity, MatchesEdgeListCount) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = random_graph(seed, 10, 2);
    RandomStream pick(seed + 1000);
    std::vector<NodeId> vk;
    for (NodeId v : g.relays()) {
      if (pick.uniform() < 0.5) vk.push_back(v);
    }
    for (NodeId t : g.terminals()) {
      EXPECT_EQ(cut_capacity(g, t, vk), crossing_edges(g, t, vk));
    }
  }
}

TEST(CutCapacity, RejectsBadArguments) {
  const auto g = testing::wheatstone();
  try {
    cut_capacity(g, 2, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownNode);
  }
  const std::vector<NodeId> with_terminal{3};
  EXPECT_THROW(cut_capacity(g, 3, with_terminal), Error);
  const std::vector<NodeId> duplicate{1, 1};
  EXPECT_THROW(cut_capacity(g, 3, duplicate), Error);
  EXPECT_THROW(min_cut(g, 9), Error);
}

TEST(MinCut, Wheatstone) {
  const auto cut = min_cut(testing::wheatstone(), 3);
  EXPECT_EQ(cut.capacity, 1);
  EXPECT_TRUE(cut.is_minimum);
  expect_valid_certificate(testing::wheatstone(), cut);
}

TEST(MinCut, Diamond) {
  const auto g = hand_graph(2, 1, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 2}});
  const auto cut = min_cut(g, 3);
  EXPECT_EQ(cut.capacity, 2);
  expect_valid_certificate(g, cut);
}

TEST(MinCut, DisconnectedTerminal) {
  const auto g = hand_graph(2, 1, {{0, 1}, {1, 2}});
  const auto cut = min_cut(g, 3);
  EXPECT_EQ(cut.capacity, 0);
  EXPECT_TRUE(cut.paths.empty());
  EXPECT_EQ(cut_capacity(g, 3, cut.partition_vk), 0);
}

TEST(BruteForce, SingleRelay) {
  const auto g = hand_graph(1, 1, {{0, 1}, {1, 2}});
  const auto cut = brute_force_min_cut(g, 2);
  EXPECT_EQ(cut.capacity, 1);
  EXPECT_TRUE(cut.partition_vk.empty());  // lexicographic tie-break
}

TEST(BruteForce, NoRelays) {
  const auto g = hand_graph(0, 1, {});
  EXPECT_EQ(brute_force_min_cut(g, 1).capacity, 0);
  EXPECT_EQ(min_cut(g, 1).capacity, 0);
}

TEST(BruteForce, SizeGuard) {
  const auto g = random_graph(3, kBruteForceMaxRelays + 1, 1);
  try {
    brute_force_min_cut(g, g.terminal(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeGuard);
  }
}

TEST(MinCut, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 4 + seed % 9;
    const auto g = random_graph(seed, n, 2);
    for (NodeId t : g.terminals()) {
      const auto fast = min_cut(g, t);
      const auto slow = brute_force_min_cut(g, t);
      ASSERT_EQ(fast.capacity, slow.capacity) << "seed " << seed;
      EXPECT_EQ(cut_capacity(g, t, fast.partition_vk), fast.capacity);
      EXPECT_EQ(fast.k, fast.partition_vk.size());
      expect_valid_certificate(g, fast);
    }
  }
}

TEST(MinCut, PartitionIsSmallestMinimumCut) {
  for (std::uint64_t seed = 200; seed < 240; ++seed) {
    const auto g = random_graph(seed, 8, 1);
    const NodeId t = g.terminal(0);
    const auto cut = min_cut(g, t);
    const std::set<NodeId> ours(cut.partition_vk.begin(), cut.partition_vk.end());
    for (std::uint32_t mask = 0; mask < (1U << 8); ++mask) {
      std::vector<NodeId> vk;
      for (std::size_t i = 0; i < 8; ++i) {
        if (mask >> i & 1U) vk.push_back(g.relay(i));
      }
      if (cut_capacity(g, t, vk) != cut.capacity) continue;
      for (NodeId v : ours) EXPECT_TRUE(std::find(vk.begin(), vk.end(), v) != vk.end());
    }
  }
}

TEST(MinCut, OtherTerminalsDoNotCarryFlow) {
  // Removing every other terminal (and its edges) leaves each terminal's
  // capacity unchanged: other terminals only absorb, they never forward.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = random_graph(seed, 10, 3);
    for (std::size_t keep = 0; keep < 3; ++keep) {
      const NodeId t = g.terminal(keep);
      std::vector<Point> positions(g.positions().begin(), g.positions().begin() + 11);
      positions.push_back(g.positions()[t]);
      std::vector<Edge> edges;
      for (const auto& [u, v] : g.edges()) {
        if (g.is_terminal(v) && v != t) continue;
        edges.push_back({u, v == t ? static_cast<NodeId>(11) : v});
      }
      const auto alone = ConnectivityGraph::from_edges(10, 1, positions, edges, g.model());
      EXPECT_EQ(min_cut(alone, 11).capacity, min_cut(g, t).capacity);
    }
  }
}

TEST(Multicast, Butterfly) {
  EXPECT_EQ(multicast_capacity(testing::butterfly()), 2);
}

TEST(Multicast, SingleTerminalMatchesMinCut) {
  const auto g = random_graph(4, 15, 1);
  EXPECT_EQ(multicast_capacity(g), min_cut(g, g.terminal(0)).capacity);
}

TEST(Multicast, BoundedByDegrees) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = random_graph(seed, 15, 3);
    const Capacity c = multicast_capacity(g);
    EXPECT_LE(c, static_cast<Capacity>(g.degree(0)));
    for (NodeId t : g.terminals()) EXPECT_LE(c, static_cast<Capacity>(g.degree(t)));
    const auto cuts = terminal_min_cuts(g);
    EXPECT_EQ(c, std::min_element(cuts.begin(), cuts.end(), [](const auto& a, const auto& b) {
                   return a.capacity < b.capacity;
                 })->capacity);
  }
}

TEST(Multicast, MonotoneUnderEdgeAddition) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = random_graph(seed, 8, 2);
    for (NodeId u = 0; u < g.node_count(); ++u) {
      for (NodeId v = u + 1; v < g.node_count(); ++v) {
        if (!g.is_relay(u) && !g.is_relay(v)) continue;
        if (g.connected(u, v)) continue;
        if (kernel_probability(distance(g.positions()[u], g.positions()[v]), g.model()) <= 0) {
          continue;
        }
        const auto h = with_added_edge(g, {u, v});
        EXPECT_GE(multicast_capacity(h), multicast_capacity(g));
      }
    }
  }
}

TEST(Multicast, NeedsTerminal) {
  EXPECT_THROW(multicast_capacity(hand_graph(1, 0, {{0, 1}})), Error);
}

}  // namespace
}  // namespace qrgg
