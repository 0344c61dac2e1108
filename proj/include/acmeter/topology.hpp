#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "acmeter/antenna.hpp"
#include "acmeter/environment.hpp"
#include "acmeter/geometry.hpp"
#include "acmeter/propagation.hpp"
#include "acmeter/rng.hpp"

namespace acmeter {

enum class Role { ap, sta };
enum class AntennaMode { oa, da };

/// Raised when a station cannot reach any access point at its power.
struct UnassociableStaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NodeSpec {
  int id = 0;
  Role role = Role::sta;
  Point pos;
  std::vector<AntennaPattern> interfaces;
  int queue_capacity = 50;

  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

/// Directed transmitter/receiver pair. Interface ids and bearings are
/// derived from the endpoints.
struct Link {
  int id = 0;
  int tx_node = 0;
  int rx_node = 0;
  int tx_interface = 0;
  int rx_interface = 0;
  double tx_bearing_deg = 0.0;  // transmitter toward receiver
  double rx_bearing_deg = 0.0;  // receiver toward transmitter

  friend bool operator==(const Link&, const Link&) = default;
};

inline std::vector<AntennaPattern> omni_interfaces(double gain, double height_m) {
  return {AntennaPattern::make_omni(gain, height_m)};
}

/// Four 90-degree sectors at boresights 0/90/180/270.
inline std::vector<AntennaPattern> quad_sector_interfaces(double gain, double height_m) {
  std::vector<AntennaPattern> v;
  for (int k = 0; k < 4; ++k) v.push_back(AntennaPattern::make_sector(90.0 * k, 90.0, gain, height_m));
  return v;
}

inline std::vector<AntennaPattern> interfaces_for_mode(AntennaMode mode, double height_m) {
  return mode == AntennaMode::oa ? omni_interfaces(1.0, height_m) : quad_sector_interfaces(2.0, height_m);
}

/// Interface serving a bearing. Single-interface nodes always use 0; sector
/// nodes take the interface whose half-open arc [boresight - bw/2,
/// boresight + bw/2) holds the bearing, so boundary bearings are
/// unambiguous. The standard quad covers [90k-45, 90k+45) for sector k.
inline int select_interface(const NodeSpec& node, double bearing_deg) {
  if (node.interfaces.empty()) throw std::invalid_argument("select_interface: node has no interfaces");
  if (node.interfaces.size() == 1) return 0;
  for (std::size_t i = 0; i < node.interfaces.size(); ++i) {
    const AntennaPattern& p = node.interfaces[i];
    if (p.kind == AntennaKind::omni) return static_cast<int>(i);
    if (normalize_deg(bearing_deg - p.boresight_deg + p.beamwidth_deg / 2.0) < p.beamwidth_deg)
      return static_cast<int>(i);
  }
  // no arc covers the bearing; fall back to the closest boresight
  int best = 0;
  double best_dist = 360.0;
  for (std::size_t i = 0; i < node.interfaces.size(); ++i) {
    const double d = angular_distance_deg(bearing_deg, node.interfaces[i].boresight_deg);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

/// Node-level receive gain toward a bearing: the best any of its interfaces
/// can do. A quad-sector node has an interface facing every direction.
inline double node_gain_toward(const NodeSpec& node, double bearing_deg) {
  double g = 0.0;
  for (const auto& p : node.interfaces) g = std::max(g, gain_toward(p, bearing_deg));
  return g;
}

/// Pattern of the interface facing a bearing (ties broken by interface id).
inline const AntennaPattern& facing_interface(const NodeSpec& node, double bearing_deg) {
  if (node.interfaces.empty()) throw std::invalid_argument("facing_interface: node has no interfaces");
  const AntennaPattern* best = &node.interfaces[0];
  double best_gain = gain_toward(node.interfaces[0], bearing_deg);
  for (std::size_t i = 1; i < node.interfaces.size(); ++i) {
    const double g = gain_toward(node.interfaces[i], bearing_deg);
    if (g > best_gain) {
      best_gain = g;
      best = &node.interfaces[i];
    }
  }
  return *best;
}

inline Link make_link(int id, const NodeSpec& tx, const NodeSpec& rx) {
  if (tx.id == rx.id) throw std::invalid_argument("link endpoints must differ");
  if (tx.pos == rx.pos) throw std::invalid_argument("link endpoints at identical positions");
  Link l;
  l.id = id;
  l.tx_node = tx.id;
  l.rx_node = rx.id;
  l.tx_bearing_deg = bearing_deg(tx.pos, rx.pos);
  l.rx_bearing_deg = bearing_deg(rx.pos, tx.pos);
  l.tx_interface = select_interface(tx, l.tx_bearing_deg);
  l.rx_interface = select_interface(rx, l.rx_bearing_deg);
  return l;
}

struct Topology {
  std::vector<NodeSpec> nodes;
  std::vector<Link> links;
  Environment env;

  const NodeSpec& node(int id) const {
    for (const auto& n : nodes)
      if (n.id == id) return n;
    throw std::out_of_range("unknown node id " + std::to_string(id));
  }
  const Link& link(int id) const {
    for (const auto& l : links)
      if (l.id == id) return l;
    throw std::out_of_range("unknown link id " + std::to_string(id));
  }

  void validate() const {
    env.validate();
    std::set<int> node_ids;
    for (const auto& n : nodes) {
      if (!node_ids.insert(n.id).second)
        throw std::invalid_argument("duplicate node id " + std::to_string(n.id));
      if (!std::isfinite(n.pos.x) || !std::isfinite(n.pos.y))
        throw std::invalid_argument("node " + std::to_string(n.id) + ": position not finite");
      if (n.interfaces.empty()) throw std::invalid_argument("node " + std::to_string(n.id) + ": no interfaces");
    }
    std::set<int> link_ids;
    std::set<std::pair<int, int>> endpoint_pairs;
    for (const auto& l : links) {
      if (!link_ids.insert(l.id).second)
        throw std::invalid_argument("duplicate link id " + std::to_string(l.id));
      const auto& tx = node(l.tx_node);
      const auto& rx = node(l.rx_node);
      if (tx.id == rx.id) throw std::invalid_argument("link " + std::to_string(l.id) + ": tx == rx");
      if (!endpoint_pairs.insert({l.tx_node, l.rx_node}).second)
        throw std::invalid_argument("duplicate link for node pair (" + std::to_string(l.tx_node) + "," +
                                    std::to_string(l.rx_node) + ")");
      if (l.tx_interface < 0 || l.tx_interface >= static_cast<int>(tx.interfaces.size()) || l.rx_interface < 0 ||
          l.rx_interface >= static_cast<int>(rx.interfaces.size()))
        throw std::invalid_argument("link " + std::to_string(l.id) + ": interface id out of range");
    }
  }

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Uplink to the access point with the strongest signal, measured with a
/// unit-gain omni reference at both ends so the choice is direction
/// independent; ties go to the lowest AP id. Serving interfaces are then
/// chosen by bearing on the real antennas.
inline Link associate(const NodeSpec& sta, const std::vector<NodeSpec>& aps, const Environment& env,
                      double tx_power_w = kDefaultTxPowerW, int link_id = 0) {
  if (aps.empty()) throw std::invalid_argument("associate: no access points");
  const AntennaPattern sta_ref = AntennaPattern::make_omni(1.0, sta.interfaces.at(0).height_m);
  const NodeSpec* best = nullptr;
  double best_power = -1.0;
  for (const auto& ap : aps) {
    if (ap.pos == sta.pos) continue;
    const AntennaPattern ap_ref = AntennaPattern::make_omni(1.0, ap.interfaces.at(0).height_m);
    const double p = received_power(sta_ref, ap_ref, sta.pos, ap.pos, tx_power_w, env);
    const bool better = p > best_power || (p == best_power && best != nullptr && ap.id < best->id);
    if (better) {
      best_power = p;
      best = &ap;
    }
  }
  if (best == nullptr || best_power < env.rx_threshold_w)
    throw UnassociableStaError("unassociable STA " + std::to_string(sta.id));
  return make_link(link_id, sta, *best);
}

/// Isotropic twin of a topology: every antenna pattern becomes an omni of
/// the given reference gain while the interface structure and links stay.
/// This is the network as an antenna-blind analysis sees it.
inline Topology isotropic_twin(const Topology& topo, double reference_gain = 1.0) {
  Topology twin = topo;
  for (auto& n : twin.nodes)
    for (auto& p : n.interfaces) p = AntennaPattern::make_omni(reference_gain, p.height_m);
  return twin;
}

struct GridScenarioParams {
  std::uint32_t seed = 1;
  int n_sta = 9;
  AntennaMode antenna = AntennaMode::oa;
  int grid_dim = 3;
  double spacing_m = 250.0;
  Environment env{};
  double sta_tx_power_w = kDefaultTxPowerW;
};

/// Grid of access points plus uniformly placed stations, each associated to
/// its nearest AP. Pure function of the parameters: the same seed always
/// yields the same topology.
inline Topology generate_grid_scenario(const GridScenarioParams& params) {
  if (params.n_sta < 0) throw std::invalid_argument("n_sta must be >= 0");
  if (params.grid_dim < 1) throw std::invalid_argument("grid_dim must be >= 1");
  params.env.validate();

  Topology topo;
  topo.env = params.env;
  const double h = params.env.default_height_m;
  for (int row = 0; row < params.grid_dim; ++row)
    for (int col = 0; col < params.grid_dim; ++col) {
      NodeSpec ap;
      ap.id = row * params.grid_dim + col;
      ap.role = Role::ap;
      ap.pos = {col * params.spacing_m, row * params.spacing_m};
      ap.interfaces = interfaces_for_mode(params.antenna, h);
      topo.nodes.push_back(ap);
    }
  const std::vector<NodeSpec> aps = topo.nodes;

  std::mt19937 rng(params.seed);
  const double extent = (params.grid_dim - 1) * params.spacing_m;
  const int n_aps = params.grid_dim * params.grid_dim;
  for (int s = 0; s < params.n_sta; ++s) {
    NodeSpec sta;
    sta.id = n_aps + s;
    sta.role = Role::sta;
    sta.interfaces = interfaces_for_mode(params.antenna, h);
    bool placed = false;
    for (int attempt = 0; attempt < 100 && !placed; ++attempt) {
      sta.pos = {uniform_real(rng, 0.0, extent), uniform_real(rng, 0.0, extent)};
      const bool coincident = std::any_of(topo.nodes.begin(), topo.nodes.end(),
                                          [&](const NodeSpec& n) { return n.pos == sta.pos; });
      if (coincident) continue;
      try {
        Link l = associate(sta, aps, params.env, params.sta_tx_power_w, s);
        topo.nodes.push_back(sta);
        topo.links.push_back(l);
        placed = true;
      } catch (const UnassociableStaError&) {
        // resample this station
      }
    }
    if (!placed) throw UnassociableStaError("unassociable STA " + std::to_string(sta.id) + " after 100 attempts");
  }
  topo.validate();
  return topo;
}

}  // namespace acmeter
