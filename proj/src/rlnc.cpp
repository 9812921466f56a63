#include "qrgg/rlnc.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "qrgg/cut.hpp"
#include "qrgg/errors.hpp"
#include "qrgg/report_io.hpp"

namespace qrgg {

namespace {

Gf256 draw_coefficient(RandomStream& rng, CoefficientField field,
                       bool nonzero) {
  if (field == CoefficientField::kGf2) {
    return Gf256(nonzero ? 1 : static_cast<std::uint8_t>(rng.uniform_below(2)));
  }
  if (nonzero) return Gf256(static_cast<std::uint8_t>(1 + rng.uniform_below(255)));
  return Gf256(static_cast<std::uint8_t>(rng.uniform_below(256)));
}

std::size_t input_count(const CodingDag& dag, NodeId tail) {
  return tail == ConnectivityGraph::source() ? dag.rate
                                             : dag.in_arcs[tail].size();
}

std::vector<NodeId> find_cycle(const std::set<CodingArc>& arcs,
                               std::size_t node_count) {
  std::vector<std::vector<NodeId>> out(node_count);
  for (const CodingArc& a : arcs) out[a.tail].push_back(a.head);
  enum : char { kWhite, kGrey, kBlack };
  std::vector<char> colour(node_count, kWhite);
  std::vector<NodeId> stack;
  std::vector<NodeId> cycle;
  std::function<bool(NodeId)> visit = [&](NodeId u) {
    colour[u] = kGrey;
    stack.push_back(u);
    for (NodeId v : out[u]) {
      if (colour[v] == kGrey) {
        auto it = std::find(stack.begin(), stack.end(), v);
        cycle.assign(it, stack.end());
        return true;
      }
      if (colour[v] == kWhite && visit(v)) return true;
    }
    stack.pop_back();
    colour[u] = kBlack;
    return false;
  };
  for (NodeId u = 0; u < node_count; ++u) {
    if (colour[u] == kWhite && visit(u)) break;
  }
  return cycle;
}

}  // namespace

const char* field_label(CoefficientField field) {
  return field == CoefficientField::kGf256 ? "0x11B" : "GF(2)";
}

std::pair<int, int> xor_relay_demo(int b1, int b2) {
  if ((b1 != 0 && b1 != 1) || (b2 != 0 && b2 != 1)) {
    throw Error(ErrorCode::kInvalidParameter, "xor_relay_demo takes bits");
  }
  const Gf256 from_x(static_cast<std::uint8_t>(b1));
  const Gf256 from_y(static_cast<std::uint8_t>(b2));
  const Gf256 at_a = from_x + from_y;  // A encodes
  const Gf256 at_b = at_a;             // B forwards to both ends
  const Gf256 decoded_at_x = from_x + at_b;
  const Gf256 decoded_at_y = from_y + at_b;
  return {decoded_at_x.value(), decoded_at_y.value()};
}

std::variant<CodingDag, CyclicSkip> build_coding_dag(
    const ConnectivityGraph& graph, std::size_t rate) {
  std::vector<CutResult> cuts = terminal_min_cuts(graph);
  for (const CutResult& cut : cuts) {
    if (static_cast<Capacity>(rate) > cut.capacity) {
      throw Error(ErrorCode::kRateExceedsCapacity,
                  "rate " + std::to_string(rate) +
                      " exceeds the min cut of terminal " +
                      std::to_string(cut.terminal));
    }
  }

  std::set<CodingArc> arcs;
  for (const CutResult& cut : cuts) {
    for (std::size_t p = 0; p < rate; ++p) {
      const auto& path = cut.paths[p];
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        arcs.insert({path[i], path[i + 1]});
      }
    }
  }

  const std::size_t nodes = graph.node_count();
  std::vector<std::size_t> indegree(nodes, 0);
  std::vector<bool> touched(nodes, false);
  for (const CodingArc& a : arcs) {
    ++indegree[a.head];
    touched[a.tail] = touched[a.head] = true;
  }
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < nodes; ++v) {
    if (touched[v] && indegree[v] == 0) ready.push(v);
  }
  std::vector<std::vector<NodeId>> heads(nodes);
  for (const CodingArc& a : arcs) heads[a.tail].push_back(a.head);

  CodingDag dag;
  dag.rate = rate;
  dag.terminals = graph.terminals();
  while (!ready.empty()) {
    const NodeId u = ready.top();
    ready.pop();
    dag.order.push_back(u);
    for (NodeId v : heads[u]) {
      if (--indegree[v] == 0) ready.push(v);
    }
  }
  const auto touched_count =
      static_cast<std::size_t>(std::count(touched.begin(), touched.end(), true));
  if (dag.order.size() != touched_count) {
    return CyclicSkip{find_cycle(arcs, nodes)};
  }

  std::vector<std::size_t> position(nodes, 0);
  for (std::size_t i = 0; i < dag.order.size(); ++i) position[dag.order[i]] = i;
  dag.arcs.assign(arcs.begin(), arcs.end());
  std::stable_sort(dag.arcs.begin(), dag.arcs.end(),
                   [&](const CodingArc& a, const CodingArc& b) {
                     return position[a.tail] < position[b.tail];
                   });
  dag.in_arcs.resize(nodes);
  dag.out_arcs.resize(nodes);
  for (std::size_t i = 0; i < dag.arcs.size(); ++i) {
    dag.out_arcs[dag.arcs[i].tail].push_back(i);
    dag.in_arcs[dag.arcs[i].head].push_back(i);
  }
  return dag;
}

LocalCoefficients draw_local_coefficients(const CodingDag& dag,
                                          RandomStream& rng,
                                          CoefficientField field) {
  LocalCoefficients coefficients(dag.arcs.size());
  for (std::size_t e = 0; e < dag.arcs.size(); ++e) {
    const std::size_t inputs = input_count(dag, dag.arcs[e].tail);
    coefficients[e].reserve(inputs);
    for (std::size_t i = 0; i < inputs; ++i) {
      coefficients[e].push_back(draw_coefficient(rng, field, inputs == 1));
    }
  }
  return coefficients;
}

GfMatrix global_coding_vectors(const CodingDag& dag,
                               const LocalCoefficients& coefficients) {
  GfMatrix global(dag.arcs.size(), std::vector<Gf256>(dag.rate));
  // Arcs are stored in topological order of their tails.
  for (std::size_t e = 0; e < dag.arcs.size(); ++e) {
    const NodeId tail = dag.arcs[e].tail;
    if (tail == ConnectivityGraph::source()) {
      global[e] = coefficients[e];
      continue;
    }
    const auto& inputs = dag.in_arcs[tail];
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const Gf256 c = coefficients[e][i];
      for (std::size_t s = 0; s < dag.rate; ++s) {
        global[e][s] += c * global[inputs[i]][s];
      }
    }
  }
  return global;
}

GfMatrix terminal_matrix(const CodingDag& dag, const GfMatrix& global,
                         NodeId terminal) {
  GfMatrix rows;
  for (std::size_t e : dag.in_arcs.at(terminal)) rows.push_back(global[e]);
  return rows;
}

std::vector<Gf256> propagate_symbols(const CodingDag& dag,
                                     const LocalCoefficients& coefficients,
                                     const std::vector<Gf256>& source_symbols) {
  std::vector<Gf256> carried(dag.arcs.size());
  for (std::size_t e = 0; e < dag.arcs.size(); ++e) {
    const NodeId tail = dag.arcs[e].tail;
    Gf256 acc;
    if (tail == ConnectivityGraph::source()) {
      for (std::size_t s = 0; s < dag.rate; ++s) {
        acc += coefficients[e][s] * source_symbols[s];
      }
    } else {
      const auto& inputs = dag.in_arcs[tail];
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        acc += coefficients[e][i] * carried[inputs[i]];
      }
    }
    carried[e] = acc;
  }
  return carried;
}

AchievabilityReport verify_achievability(const ConnectivityGraph& graph,
                                         std::size_t trials,
                                         const RandomStream& rng,
                                         CoefficientField field) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidParameter, "trials must be >= 1");
  }
  AchievabilityReport report;
  report.trials = trials;
  report.field = field;
  report.h = static_cast<std::size_t>(multicast_capacity(graph));
  if (report.h == 0) {
    report.success_fraction = 1.0;
    return report;
  }
  auto built = build_coding_dag(graph, report.h);
  if (auto* skip = std::get_if<CyclicSkip>(&built)) {
    report.cyclic_skipped = true;
    report.cycle = skip->cycle;
    return report;
  }
  const CodingDag& dag = std::get<CodingDag>(built);

  std::size_t successes = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream stream = rng.child("rlnc-trial", trial);
    const LocalCoefficients coefficients =
        draw_local_coefficients(dag, stream, field);
    const GfMatrix global = global_coding_vectors(dag, coefficients);
    bool full_rank = true;
    for (NodeId t : dag.terminals) {
      if (gf_rank(terminal_matrix(dag, global, t)) != dag.rate) {
        full_rank = false;
        break;
      }
    }
    if (!full_rank) continue;
    ++successes;

    std::vector<Gf256> message(dag.rate);
    for (auto& symbol : message) {
      symbol = Gf256(static_cast<std::uint8_t>(stream.uniform_below(256)));
    }
    const std::vector<Gf256> carried =
        propagate_symbols(dag, coefficients, message);
    for (NodeId t : dag.terminals) {
      std::vector<Gf256> received;
      for (std::size_t e : dag.in_arcs[t]) received.push_back(carried[e]);
      std::vector<Gf256> decoded;
      if (!gf_solve(terminal_matrix(dag, global, t), received, decoded) ||
          decoded != message) {
        ++report.decode_mismatches;
        break;
      }
    }
  }
  report.success_fraction =
      static_cast<double>(successes) / static_cast<double>(trials);
  return report;
}

nlohmann::json to_json(const AchievabilityReport& report) {
  nlohmann::json j = {
      {"h", report.h},
      {"trials", report.trials},
      {"success_fraction", round_sig6(report.success_fraction)},
      {"cyclic_skipped", report.cyclic_skipped},
      {"field_poly", field_label(report.field)},
      {"decode_mismatches", report.decode_mismatches},
  };
  if (report.cyclic_skipped) j["cycle"] = report.cycle;
  return j;
}

}  // namespace qrgg
