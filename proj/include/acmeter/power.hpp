#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "acmeter/propagation.hpp"
#include "acmeter/topology.hpp"

namespace acmeter {

enum class PowerScheme { dp_nchan, mp_pnetw, mp_pnode, mp_pinte };

inline const char* to_string(PowerScheme s) {
  switch (s) {
    case PowerScheme::dp_nchan: return "dp-nchan";
    case PowerScheme::mp_pnetw: return "mp-pnetw";
    case PowerScheme::mp_pnode: return "mp-pnode";
    case PowerScheme::mp_pinte: return "mp-pinte";
  }
  return "?";
}

/// Transmit power per (node, interface).
struct PowerAssignment {
  std::map<std::pair<int, int>, double> watts;
  PowerScheme scheme = PowerScheme::dp_nchan;

  double at(int node_id, int interface_id) const {
    const auto it = watts.find({node_id, interface_id});
    if (it == watts.end())
      throw std::out_of_range("no power entry for node " + std::to_string(node_id) + " interface " +
                              std::to_string(interface_id));
    return it->second;
  }
};

inline PowerAssignment uniform_power(const Topology& topo, double watts,
                                     PowerScheme scheme = PowerScheme::dp_nchan) {
  if (!(watts > 0.0)) throw std::invalid_argument("transmit power must be > 0");
  PowerAssignment pa;
  pa.scheme = scheme;
  for (const auto& n : topo.nodes)
    for (std::size_t i = 0; i < n.interfaces.size(); ++i) pa.watts[{n.id, static_cast<int>(i)}] = watts;
  return pa;
}

inline PowerAssignment default_power(const Topology& topo) {
  return uniform_power(topo, kDefaultTxPowerW, PowerScheme::dp_nchan);
}

namespace detail {

// Smallest power that closes one link direction: peer receive power meets
// the rx threshold through the serving interfaces. The 1e-12 relative pad
// keeps the >= comparison true after the round trip through the power
// formula.
inline double min_link_power(const Topology& topo, const NodeSpec& from, int from_iface, const NodeSpec& to,
                             int to_iface, double margin_db, int link_id) {
  const AntennaPattern& tx = from.interfaces.at(from_iface);
  const AntennaPattern& rx = to.interfaces.at(to_iface);
  const double bearing = bearing_deg(from.pos, to.pos);
  const double g = gain_toward(tx, bearing) * gain_toward(rx, reverse_bearing_deg(bearing));
  if (g == 0.0)
    throw std::runtime_error("link " + std::to_string(link_id) + ": serving interfaces have no gain along the link");
  const double r = distance(from.pos, to.pos);
  const double h2 = tx.height_m * tx.height_m * rx.height_m * rx.height_m;
  double p = topo.env.rx_threshold_w * std::pow(r, topo.env.path_loss_exponent) / (g * h2);
  p *= db_to_linear(margin_db);
  p *= 1.0 + 1e-12;
  if (p > kDefaultTxPowerW)
    throw std::runtime_error("link " + std::to_string(link_id) + ": required power " + std::to_string(p) +
                             " W exceeds the default cap");
  return p;
}

// Per-serving-interface minima; an interface serving several links needs the
// largest of their requirements. ACK paths count: the receiver's serving
// interface must close the reverse direction.
inline std::map<std::pair<int, int>, double> serving_minima(const Topology& topo, double margin_db) {
  std::map<std::pair<int, int>, double> req;
  for (const auto& l : topo.links) {
    const auto& tx = topo.node(l.tx_node);
    const auto& rx = topo.node(l.rx_node);
    const double fwd = min_link_power(topo, tx, l.tx_interface, rx, l.rx_interface, margin_db, l.id);
    const double back = min_link_power(topo, rx, l.rx_interface, tx, l.tx_interface, margin_db, l.id);
    auto bump = [&req](int node, int iface, double p) {
      auto [it, inserted] = req.try_emplace({node, iface}, p);
      if (!inserted) it->second = std::max(it->second, p);
    };
    bump(l.tx_node, l.tx_interface, fwd);
    bump(l.rx_node, l.rx_interface, back);
  }
  return req;
}

inline std::map<int, double> node_minima(const Topology& topo, double margin_db) {
  std::map<int, double> per_node;
  for (const auto& n : topo.nodes) per_node[n.id] = kDefaultTxPowerW;  // nodes serving no link keep the cap
  std::map<int, double> seen;
  for (const auto& [key, p] : serving_minima(topo, margin_db)) {
    auto [it, inserted] = seen.try_emplace(key.first, p);
    if (!inserted) it->second = std::max(it->second, p);
  }
  for (const auto& [node, p] : seen) per_node[node] = p;
  return per_node;
}

}  // namespace detail

/// Each serving interface gets exactly what its links need; idle interfaces
/// inherit the node's largest serving power (they never transmit in the
/// analysis) and fall back to the cap on nodes with no links at all.
inline PowerAssignment min_power_per_interface(const Topology& topo, double margin_db = 0.0) {
  const auto serving = detail::serving_minima(topo, margin_db);
  const auto per_node = detail::node_minima(topo, margin_db);
  PowerAssignment pa;
  pa.scheme = PowerScheme::mp_pinte;
  for (const auto& n : topo.nodes)
    for (std::size_t i = 0; i < n.interfaces.size(); ++i) {
      const auto it = serving.find({n.id, static_cast<int>(i)});
      pa.watts[{n.id, static_cast<int>(i)}] = it != serving.end() ? it->second : per_node.at(n.id);
    }
  return pa;
}

/// One power per node: the largest of its serving-interface minima.
inline PowerAssignment min_power_per_node(const Topology& topo, double margin_db = 0.0) {
  const auto per_node = detail::node_minima(topo, margin_db);
  PowerAssignment pa;
  pa.scheme = PowerScheme::mp_pnode;
  for (const auto& n : topo.nodes)
    for (std::size_t i = 0; i < n.interfaces.size(); ++i) pa.watts[{n.id, static_cast<int>(i)}] = per_node.at(n.id);
  return pa;
}

/// One power for the whole network: the largest per-node minimum.
inline PowerAssignment min_power_per_network(const Topology& topo, double margin_db = 0.0) {
  const auto per_node = detail::node_minima(topo, margin_db);
  double network = topo.links.empty() || per_node.empty() ? kDefaultTxPowerW : 0.0;
  for (const auto& [node, p] : per_node) network = std::max(network, p);
  PowerAssignment pa = uniform_power(topo, network, PowerScheme::mp_pnetw);
  return pa;
}

inline PowerAssignment make_power(const Topology& topo, PowerScheme scheme, double margin_db = 0.0) {
  switch (scheme) {
    case PowerScheme::dp_nchan: return default_power(topo);
    case PowerScheme::mp_pnetw: return min_power_per_network(topo, margin_db);
    case PowerScheme::mp_pnode: return min_power_per_node(topo, margin_db);
    case PowerScheme::mp_pinte: return min_power_per_interface(topo, margin_db);
  }
  throw std::invalid_argument("unknown power scheme");
}

}  // namespace acmeter
