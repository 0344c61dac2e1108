#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "acmeter/topology.hpp"

namespace acmeter {

struct TopologyParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const nlohmann::ordered_json& require_field(const nlohmann::ordered_json& j, const std::string& key,
                                                   const std::string& path) {
  if (!j.contains(key)) throw TopologyParseError(path + "." + key + ": missing field");
  return j.at(key);
}

inline double require_number(const nlohmann::ordered_json& j, const std::string& key, const std::string& path) {
  const auto& v = require_field(j, key, path);
  if (!v.is_number()) throw TopologyParseError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline int require_int(const nlohmann::ordered_json& j, const std::string& key, const std::string& path) {
  const auto& v = require_field(j, key, path);
  if (!v.is_number_integer()) throw TopologyParseError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::string require_string(const nlohmann::ordered_json& j, const std::string& key, const std::string& path) {
  const auto& v = require_field(j, key, path);
  if (!v.is_string()) throw TopologyParseError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

}  // namespace detail

inline nlohmann::ordered_json topology_to_json(const Topology& topo) {
  using json = nlohmann::ordered_json;
  json j;
  j["environment"] = {{"alpha", topo.env.path_loss_exponent},
                      {"rx_threshold_w", topo.env.rx_threshold_w},
                      {"cs_threshold_w", topo.env.cs_threshold_w},
                      {"sir_db", linear_to_db(topo.env.sir_k)},
                      {"default_height_m", topo.env.default_height_m}};
  j["nodes"] = json::array();
  for (const auto& n : topo.nodes) {
    json antenna;
    const auto& first = n.interfaces.at(0);
    if (first.kind == AntennaKind::omni) {
      antenna = {{"kind", "omni"}, {"peak_gain", first.peak_gain}};
    } else {
      json boresights = json::array();
      for (const auto& p : n.interfaces) boresights.push_back(p.boresight_deg);
      antenna = {{"kind", "sector"},
                 {"peak_gain", first.peak_gain},
                 {"beamwidth_deg", first.beamwidth_deg},
                 {"boresights_deg", boresights}};
    }
    j["nodes"].push_back({{"id", n.id},
                          {"role", n.role == Role::ap ? "AP" : "STA"},
                          {"x_m", n.pos.x},
                          {"y_m", n.pos.y},
                          {"antenna", antenna},
                          {"height_m", first.height_m},
                          {"queue_capacity", n.queue_capacity}});
  }
  j["links"] = json::array();
  for (const auto& l : topo.links) j["links"].push_back({{"id", l.id}, {"tx", l.tx_node}, {"rx", l.rx_node}});
  return j;
}

inline Topology topology_from_json(const nlohmann::ordered_json& j) {
  using detail::require_field;
  using detail::require_int;
  using detail::require_number;
  using detail::require_string;

  Topology topo;
  const auto& env = require_field(j, "environment", "$");
  topo.env.path_loss_exponent = require_number(env, "alpha", "environment");
  topo.env.rx_threshold_w = require_number(env, "rx_threshold_w", "environment");
  topo.env.cs_threshold_w = require_number(env, "cs_threshold_w", "environment");
  topo.env.sir_k = db_to_linear(require_number(env, "sir_db", "environment"));
  if (env.contains("default_height_m")) topo.env.default_height_m = env.at("default_height_m").get<double>();

  const auto& nodes = require_field(j, "nodes", "$");
  if (!nodes.is_array()) throw TopologyParseError("nodes: expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "nodes[" + std::to_string(i) + "]";
    const auto& jn = nodes.at(i);
    NodeSpec n;
    n.id = require_int(jn, "id", path);
    const std::string role = require_string(jn, "role", path);
    if (role == "AP")
      n.role = Role::ap;
    else if (role == "STA")
      n.role = Role::sta;
    else
      throw TopologyParseError(path + ".role: expected \"AP\" or \"STA\"");
    n.pos = {require_number(jn, "x_m", path), require_number(jn, "y_m", path)};
    const double height = require_number(jn, "height_m", path);
    const auto& ja = require_field(jn, "antenna", path);
    const std::string kind = require_string(ja, "kind", path + ".antenna");
    const double gain = require_number(ja, "peak_gain", path + ".antenna");
    if (kind == "omni") {
      n.interfaces = omni_interfaces(gain, height);
    } else if (kind == "sector") {
      const double bw = require_number(ja, "beamwidth_deg", path + ".antenna");
      const auto& jb = require_field(ja, "boresights_deg", path + ".antenna");
      if (!jb.is_array() || jb.empty())
        throw TopologyParseError(path + ".antenna.boresights_deg: expected a non-empty array");
      for (const auto& b : jb) n.interfaces.push_back(AntennaPattern::make_sector(b.get<double>(), bw, gain, height));
    } else {
      throw TopologyParseError(path + ".antenna.kind: expected \"omni\" or \"sector\"");
    }
    if (jn.contains("queue_capacity")) n.queue_capacity = require_int(jn, "queue_capacity", path);
    topo.nodes.push_back(n);
  }

  const auto& links = require_field(j, "links", "$");
  if (!links.is_array()) throw TopologyParseError("links: expected an array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string path = "links[" + std::to_string(i) + "]";
    const auto& jl = links.at(i);
    const int id = require_int(jl, "id", path);
    const int tx = require_int(jl, "tx", path);
    const int rx = require_int(jl, "rx", path);
    try {
      topo.links.push_back(make_link(id, topo.node(tx), topo.node(rx)));
    } catch (const std::exception& e) {
      throw TopologyParseError(path + ": " + e.what());
    }
  }
  try {
    topo.validate();
  } catch (const std::exception& e) {
    throw TopologyParseError(e.what());
  }
  return topo;
}

inline void save_topology(const Topology& topo, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << topology_to_json(topo).dump(2) << "\n";
}

inline Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw TopologyParseError(path + ": " + e.what());
  }
  return topology_from_json(j);
}

}  // namespace acmeter
