#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "acmeter/constraints.hpp"

namespace acmeter {

struct Edge {
  int from = 0;  // link ids
  int to = 0;
  int weight = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed graph over link vertices; an edge exists iff its weight >= 1.
/// Edges are kept sorted by (from, to) so iteration is deterministic.
struct WeightedDigraph {
  std::vector<int> vertices;
  std::vector<Edge> edges;

  int weight(int from, int to) const {
    const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{from, to},
                                     [](const Edge& e, const std::pair<int, int>& k) {
                                       return std::pair{e.from, e.to} < k;
                                     });
    return it != edges.end() && it->from == from && it->to == to ? it->weight : 0;
  }
  bool has_edge(int from, int to) const { return weight(from, to) > 0; }

  void add_edge(int from, int to, int w) {
    if (w >= 1) edges.push_back({from, to, w});
  }
  void finish() {
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::pair{a.from, a.to} < std::pair{b.from, b.to}; });
  }

  friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;
};

/// The three prevention/interference graphs over one vertex set.
struct InterferenceGraphSet {
  WeightedDigraph i_graph;
  WeightedDigraph tc_graph;
  WeightedDigraph rc_graph;
  GraphMode mode = GraphMode::improved;
};

namespace detail {

inline std::vector<int> sorted_link_ids(const Topology& topo) {
  std::vector<int> ids;
  ids.reserve(topo.links.size());
  for (const auto& l : topo.links) ids.push_back(l.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

template <typename WeightFn>
WeightedDigraph build_pairwise(const Topology& topo, WeightFn&& weight_of_pair) {
  WeightedDigraph g;
  g.vertices = sorted_link_ids(topo);
  for (int from : g.vertices)
    for (int to : g.vertices) {
      if (from == to) continue;
      g.add_edge(from, to, weight_of_pair(topo.link(from), topo.link(to)));
    }
  g.finish();
  return g;
}

}  // namespace detail

/// Interference weight: how many of the four transmission combinations of
/// (i, j) physically collide at j. In {1,..,4} when an edge exists.
inline WeightedDigraph build_i_graph(const Topology& topo, const PowerAssignment& power,
                                     GraphMode mode = GraphMode::improved, double liew_gain = 1.0) {
  return detail::build_pairwise(topo, [&](const Link& li, const Link& lj) {
    const PairContext ctx(topo, li, lj, power, mode, liew_gain);
    int w = 0;
    for (auto kind : {TransmissionPairKind::data_data, TransmissionPairKind::data_ack,
                      TransmissionPairKind::ack_data, TransmissionPairKind::ack_ack})
      w += physical_collision(ctx, kind) ? 1 : 0;
    return w;
  });
}

/// Transmitter-side prevention weight: DATA sensing (carrier-sense or
/// transmission range, disjoined) plus ACK sensing. In {1, 2}.
inline WeightedDigraph build_tc_graph(const Topology& topo, const PowerAssignment& power,
                                      GraphMode mode = GraphMode::improved, double liew_gain = 1.0) {
  return detail::build_pairwise(topo, [&](const Link& li, const Link& lj) {
    const PairContext ctx(topo, li, lj, power, mode, liew_gain);
    const bool data = tx_side_prevention(ctx, TxPrevention::data_data_cs) ||
                      tx_side_prevention(ctx, TxPrevention::data_data_tx);
    const bool ack = tx_side_prevention(ctx, TxPrevention::ack_data_cs);
    return (data ? 1 : 0) + (ack ? 1 : 0);
  });
}

/// Receiver-side prevention weight, analogous to the tc graph.
inline WeightedDigraph build_rc_graph(const Topology& topo, const PowerAssignment& power,
                                      GraphMode mode = GraphMode::improved, double liew_gain = 1.0) {
  return detail::build_pairwise(topo, [&](const Link& li, const Link& lj) {
    const PairContext ctx(topo, li, lj, power, mode, liew_gain);
    const bool data = rx_side_prevention(ctx, RxPrevention::data_ack_cs) ||
                      rx_side_prevention(ctx, RxPrevention::data_ack_tx);
    const bool ack = rx_side_prevention(ctx, RxPrevention::ack_ack_cs);
    return (data ? 1 : 0) + (ack ? 1 : 0);
  });
}

inline InterferenceGraphSet build_graph_set(const Topology& topo, const PowerAssignment& power,
                                            GraphMode mode = GraphMode::improved, double liew_gain = 1.0) {
  InterferenceGraphSet gs;
  gs.mode = mode;
  gs.i_graph = build_i_graph(topo, power, mode, liew_gain);
  gs.tc_graph = build_tc_graph(topo, power, mode, liew_gain);
  gs.rc_graph = build_rc_graph(topo, power, mode, liew_gain);
  return gs;
}

inline std::string to_dot(const WeightedDigraph& g, const std::string& name, const Topology& topo) {
  std::ostringstream out;
  out << "digraph " << name << " {\n";
  for (int v : g.vertices) {
    const Link& l = topo.link(v);
    out << "  \"" << v << "\" [label=\"" << v << ": T" << l.tx_node << "->R" << l.rx_node << "\"];\n";
  }
  for (const Edge& e : g.edges)
    out << "  \"" << e.from << "\" -> \"" << e.to << "\" [weight=" << e.weight << ", label=" << e.weight << "];\n";
  out << "}\n";
  return out.str();
}

inline nlohmann::ordered_json graph_to_json(const WeightedDigraph& g) {
  nlohmann::ordered_json j;
  j["vertices"] = g.vertices;
  j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : g.edges) j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"weight", e.weight}});
  return j;
}

inline nlohmann::ordered_json graph_set_to_json(const InterferenceGraphSet& gs) {
  nlohmann::ordered_json j;
  j["mode"] = gs.mode == GraphMode::improved ? "improved" : "liew";
  j["i_graph"] = graph_to_json(gs.i_graph);
  j["tc_graph"] = graph_to_json(gs.tc_graph);
  j["rc_graph"] = graph_to_json(gs.rc_graph);
  return j;
}

}  // namespace acmeter
