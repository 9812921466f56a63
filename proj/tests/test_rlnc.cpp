#include "qrgg/rlnc.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "qrgg/cut.hpp"
#include "qrgg/errors.hpp"

namespace qrgg {
namespace {

Gf256 g(unsigned v) { return Gf256(static_cast<std::uint8_t>(v)); }

std::size_t input_count(const CodingDag& dag, NodeId tail) {
  return tail == ConnectivityGraph::source() ? dag.rate : dag.in_arcs[tail].size();
}

// Coefficients with every single-input slot set to `single` and the
// remaining slots filled in order from `free`.
LocalCoefficients assign(const CodingDag& dag, Gf256 single, const std::vector<Gf256>& free) {
  LocalCoefficients c(dag.arcs.size());
  std::size_t next = 0;
  for (std::size_t e = 0; e < dag.arcs.size(); ++e) {
    const std::size_t inputs = input_count(dag, dag.arcs[e].tail);
    for (std::size_t i = 0; i < inputs; ++i) c[e].push_back(inputs == 1 ? single : free.at(next++));
  }
  return c;
}

std::size_t free_slots(const CodingDag& dag) {
  std::size_t total = 0;
  for (const auto& arc : dag.arcs) {
    const std::size_t inputs = input_count(dag, arc.tail);
    if (inputs > 1) total += inputs;
  }
  return total;
}

bool all_full_rank(const CodingDag& dag, const LocalCoefficients& c) {
  const auto global = global_coding_vectors(dag, c);
  for (NodeId t : dag.terminals) {
    if (gf_rank(terminal_matrix(dag, global, t)) != dag.rate) return false;
  }
  return true;
}

CodingDag as_dag(const std::variant<CodingDag, CyclicSkip>& v) { return std::get<CodingDag>(v); }

TEST(XorRelay, AllInputs) {
  EXPECT_EQ(xor_relay_demo(1, 0), std::make_pair(0, 1));
  EXPECT_EQ(xor_relay_demo(0, 0), std::make_pair(0, 0));
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) EXPECT_EQ(xor_relay_demo(b1, b2), std::make_pair(b2, b1));
  }
  EXPECT_THROW(xor_relay_demo(2, 0), Error);
}

TEST(CodingDag, ButterflyOrientsMiddleEdge) {
  const auto result = build_coding_dag(testing::butterfly(), 2);
  ASSERT_TRUE(std::holds_alternative<CodingDag>(result));
  const auto dag = as_dag(result);
  const std::set<CodingArc> arcs(dag.arcs.begin(), dag.arcs.end());
  EXPECT_TRUE(arcs.count({3, 4}));
  EXPECT_FALSE(arcs.count({4, 3}));
  EXPECT_EQ(arcs.size(), 9u);
  // Topological order respects every arc.
  std::vector<std::size_t> position(7, 0);
  for (std::size_t i = 0; i < dag.order.size(); ++i) position[dag.order[i]] = i;
  for (const auto& a : dag.arcs) EXPECT_LT(position[a.tail], position[a.head]);
}

TEST(CodingDag, SinglePathIsTwoArcChain) {
  const auto g1 = testing::hand_graph(1, 1, {{0, 1}, {1, 2}});
  const auto dag = as_dag(build_coding_dag(g1, 1));
  EXPECT_EQ(dag.arcs, (std::vector<CodingArc>{{0, 1}, {1, 2}}));
}

TEST(CodingDag, OpposingFlowsAreSkipped) {
  const auto graph = testing::opposing_flows();
  ASSERT_EQ(multicast_capacity(graph), 2);
  const auto result = build_coding_dag(graph, 2);
  ASSERT_TRUE(std::holds_alternative<CyclicSkip>(result));
  const auto& cycle = std::get<CyclicSkip>(result).cycle;
  ASSERT_GE(cycle.size(), 2u);
  // Every hop of the reported cycle is an oriented flow edge of some terminal.
  std::set<std::pair<NodeId, NodeId>> oriented;
  for (NodeId t : graph.terminals()) {
    for (const auto& path : min_cut(graph, t).paths) {
      for (std::size_t i = 0; i + 1 < path.size(); ++i) oriented.insert({path[i], path[i + 1]});
    }
  }
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const NodeId u = cycle[i], v = cycle[(i + 1) % cycle.size()];
    EXPECT_TRUE(oriented.count({u, v})) << u << "->" << v;
  }
}

TEST(CodingDag, RateAboveCapacity) {
  try {
    build_coding_dag(testing::butterfly(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRateExceedsCapacity);
  }
}

TEST(ButterflyRank, ExhaustiveOverTwoElementField) {
  const auto dag = as_dag(build_coding_dag(testing::butterfly(), 2));
  const std::size_t slots = free_slots(dag);
  ASSERT_EQ(slots, 6u);  // two source rows plus the two mixing coefficients
  int successes = 0;
  for (unsigned mask = 0; mask < (1U << slots); ++mask) {
    std::vector<Gf256> free;
    for (std::size_t i = 0; i < slots; ++i) free.push_back(g(mask >> i & 1U));
    successes += all_full_rank(dag, assign(dag, g(1), free)) ? 1 : 0;
  }
  // 6 invertible 2x2 binary matrices, both mixing coefficients must be 1.
  EXPECT_EQ(successes, 6);
}

TEST(ButterflyRank, MixingCoefficientsMustBeNonzero) {
  const auto dag = as_dag(build_coding_dag(testing::butterfly(), 2));
  ASSERT_EQ(free_slots(dag), 6u);
  int successes = 0;
  for (unsigned a = 0; a < 256; ++a) {
    for (unsigned b = 0; b < 256; ++b) {
      // Identity source rows; the mixing node's slots come last in
      // topological order.
      const std::vector<Gf256> free{g(1), g(0), g(0), g(1), g(a), g(b)};
      successes += all_full_rank(dag, assign(dag, g(1), free)) ? 1 : 0;
    }
  }
  EXPECT_EQ(successes, 255 * 255);
}

TEST(Achievability, ButterflyOverLargeField) {
  const auto report = verify_achievability(testing::butterfly(), 1000, RandomStream(9));
  EXPECT_EQ(report.h, 2u);
  EXPECT_FALSE(report.cyclic_skipped);
  EXPECT_EQ(report.decode_mismatches, 0u);
  EXPECT_GE(report.success_fraction, 0.97);
  // Exact success probability: invertible source rows times two nonzero
  // uniform mixing coefficients.
  const double q = 256.0;
  const double exact = (1 - 1 / (q * q)) * (1 - 1 / q) * std::pow(1 - 1 / q, 2);
  EXPECT_NEAR(report.success_fraction, exact, 4 * std::sqrt(exact * (1 - exact) / 1000));
}

TEST(Achievability, SmallFieldFailsMoreOften) {
  const auto large = verify_achievability(testing::butterfly(), 1000, RandomStream(9));
  const auto small = verify_achievability(testing::butterfly(), 1000, RandomStream(9),
                                          CoefficientField::kGf2);
  EXPECT_LT(small.success_fraction, large.success_fraction);
  EXPECT_NEAR(small.success_fraction, 6.0 / 64.0, 4 * std::sqrt(6.0 / 64 * 58 / 64 / 1000));
  EXPECT_EQ(small.decode_mismatches, 0u);
}

TEST(Achievability, PathAlwaysSucceeds) {
  const auto g1 = testing::hand_graph(2, 1, {{0, 1}, {1, 2}, {2, 3}});
  const auto report = verify_achievability(g1, 200, RandomStream(1));
  EXPECT_EQ(report.h, 1u);
  EXPECT_EQ(report.success_fraction, 1.0);
}

TEST(Achievability, DisconnectedIsVacuous) {
  const auto g1 = testing::hand_graph(1, 1, {{0, 1}});
  const auto report = verify_achievability(g1, 10, RandomStream(1));
  EXPECT_EQ(report.h, 0u);
  EXPECT_EQ(report.success_fraction, 1.0);
}

TEST(Achievability, CyclicSkipReportedInBand) {
  const auto report = verify_achievability(testing::opposing_flows(), 10, RandomStream(1));
  EXPECT_TRUE(report.cyclic_skipped);
  EXPECT_FALSE(report.cycle.empty());
  EXPECT_EQ(to_json(report).at("cyclic_skipped"), true);
}

TEST(Achievability, RandomGraphsMatchMulticastCapacity) {
  const auto model = ConnectionModel::fixed(0.2, 0.35, 0.5);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto graph = build_connectivity_graph(25, 2, model, RandomStream(seed));
    const auto report = verify_achievability(graph, 20, RandomStream(seed));
    EXPECT_EQ(report.h, static_cast<std::size_t>(multicast_capacity(graph)));
    EXPECT_EQ(report.decode_mismatches, 0u);
    if (!report.cyclic_skipped) {
      ++checked;
      EXPECT_GT(report.success_fraction, 0.5);
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Achievability, EncodeDecodeIdentity) {
  const auto dag = as_dag(build_coding_dag(testing::butterfly(), 2));
  RandomStream rng(4);
  int decoded = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto coefficients = draw_local_coefficients(dag, rng, CoefficientField::kGf256);
    const auto global = global_coding_vectors(dag, coefficients);
    const std::vector<Gf256> message{g(rng.uniform_below(256)), g(rng.uniform_below(256))};
    const auto carried = propagate_symbols(dag, coefficients, message);
    for (NodeId t : dag.terminals) {
      std::vector<Gf256> received;
      for (std::size_t e : dag.in_arcs[t]) received.push_back(carried[e]);
      std::vector<Gf256> solution;
      if (gf_solve(terminal_matrix(dag, global, t), received, solution)) {
        EXPECT_EQ(solution, message);
        ++decoded;
      }
    }
  }
  EXPECT_GT(decoded, 190);
}

TEST(Achievability, JsonFields) {
  const auto j = to_json(verify_achievability(testing::butterfly(), 10, RandomStream(1)));
  EXPECT_EQ(j.at("field_poly"), "0x11B");
  EXPECT_EQ(j.at("h"), 2);
  EXPECT_EQ(j.at("trials"), 10);
}

}  // namespace
}  // namespace qrgg
