#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qrgg/gf256.hpp"
#include "qrgg/graph.hpp"
#include "qrgg/random_stream.hpp"

namespace qrgg {

/// Alphabet the random local coefficients are drawn from. GF(2) is the
/// {0, 1} subfield of GF(256), so the same arithmetic serves both.
enum class CoefficientField { kGf256, kGf2 };

const char* field_label(CoefficientField field);

/// Two-way exchange over the bridge X - A - B - Y: X holds b1, Y holds b2, A
/// broadcasts b1 xor b2 through B and each end decodes the other's bit.
/// Returns (bit decoded at X, bit decoded at Y) = (b2, b1).
std::pair<int, int> xor_relay_demo(int b1, int b2);

struct CodingArc {
  NodeId tail = 0;
  NodeId head = 0;

  friend auto operator<=>(const CodingArc&, const CodingArc&) = default;
};

/// Acyclic orientation of the edges used by `rate` edge-disjoint flow paths
/// to every terminal. The source is fed by `rate` virtual input arcs carrying
/// the unit vectors.
struct CodingDag {
  std::size_t rate = 0;
  std::vector<NodeId> order;  // topological order of nodes touched by arcs
  std::vector<CodingArc> arcs;
  std::vector<std::vector<std::size_t>> in_arcs;   // by node id
  std::vector<std::vector<std::size_t>> out_arcs;  // by node id
  std::vector<NodeId> terminals;
};

/// Returned when the union of per-terminal flow orientations has a cycle.
struct CyclicSkip {
  std::vector<NodeId> cycle;  // v0 -> v1 -> ... -> v0
};

/// Throws Error(kRateExceedsCapacity) if rate > multicast_capacity(graph).
std::variant<CodingDag, CyclicSkip> build_coding_dag(
    const ConnectivityGraph& graph, std::size_t rate);

/// Per arc, one coefficient per input of the arc's tail (the source's inputs
/// are its `rate` virtual arcs). Tails with a single input draw nonzero
/// coefficients; otherwise draws are uniform over the whole alphabet.
using LocalCoefficients = std::vector<std::vector<Gf256>>;

LocalCoefficients draw_local_coefficients(const CodingDag& dag,
                                          RandomStream& rng,
                                          CoefficientField field);

/// Global coding vector (length rate) of every arc.
GfMatrix global_coding_vectors(const CodingDag& dag,
                               const LocalCoefficients& coefficients);

/// Rows: global vectors on the terminal's in-arcs.
GfMatrix terminal_matrix(const CodingDag& dag, const GfMatrix& global,
                         NodeId terminal);

/// Symbol carried by every arc when the source emits `source_symbols`.
std::vector<Gf256> propagate_symbols(const CodingDag& dag,
                                     const LocalCoefficients& coefficients,
                                     const std::vector<Gf256>& source_symbols);

struct AchievabilityReport {
  std::size_t h = 0;
  std::size_t trials = 0;
  double success_fraction = 0.0;
  bool cyclic_skipped = false;
  std::vector<NodeId> cycle;
  /// Successful trials whose end-to-end decode did not reproduce the source
  /// symbols. Always 0 unless the coding path is broken.
  std::size_t decode_mismatches = 0;
  CoefficientField field = CoefficientField::kGf256;
};

/// Sets h to the multicast capacity, builds the coding DAG and, per trial
/// (stream rng.child("rlnc-trial", i)), draws coefficients and checks every
/// terminal reaches rank h and decodes random source symbols exactly.
AchievabilityReport verify_achievability(
    const ConnectivityGraph& graph, std::size_t trials, const RandomStream& rng,
    CoefficientField field = CoefficientField::kGf256);

nlohmann::json to_json(const AchievabilityReport& report);

}  // namespace qrgg
