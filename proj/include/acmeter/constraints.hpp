#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "acmeter/power.hpp"
#include "acmeter/propagation.hpp"
#include "acmeter/topology.hpp"

namespace acmeter {

enum class GraphMode { improved, liew };

/// The four simultaneous-transmission combinations of an ordered link pair
/// (link i's frame, link j's frame).
enum class TransmissionPairKind { data_data, data_ack, ack_data, ack_ack };

/// Transmitter-side prevention variants: link j's transmitter senses link
/// i's DATA (carrier-sense range), link i's ACK (carrier-sense range), or
/// link i's DATA (transmission range).
enum class TxPrevention { data_data_cs, ack_data_cs, data_data_tx };

/// Receiver-side prevention variants, with link j's receiver as the victim.
enum class RxPrevention { data_ack_cs, ack_ack_cs, data_ack_tx };

/// Everything a pairwise predicate needs. Cumulative interference is out of
/// model: each predicate reads exactly two links.
struct PairContext {
  const Topology* topo = nullptr;
  const Link* link_i = nullptr;  // interfering / sensed link
  const Link* link_j = nullptr;  // victim link
  const PowerAssignment* power = nullptr;
  GraphMode mode = GraphMode::improved;
  double liew_gain = 1.0;

  PairContext(const Topology& t, const Link& i, const Link& j, const PowerAssignment& p,
              GraphMode m = GraphMode::improved, double liew_reference_gain = 1.0)
      : topo(&t), link_i(&i), link_j(&j), power(&p), mode(m), liew_gain(liew_reference_gain) {
    if (i.id == j.id) throw std::invalid_argument("pair context requires two distinct links");
  }
};

namespace detail {

struct Endpoint {
  const NodeSpec* node;
  int interface_id;
};

// A link's two ends with their serving interfaces: the transmitter handles
// DATA, the receiver handles ACKs. Either can act as source or victim.
inline Endpoint data_endpoint(const Topology& topo, const Link& l) {
  return {&topo.node(l.tx_node), l.tx_interface};
}
inline Endpoint ack_endpoint(const Topology& topo, const Link& l) {
  return {&topo.node(l.rx_node), l.rx_interface};
}

inline AntennaPattern tx_pattern(const PairContext& ctx, const Endpoint& e) {
  const AntennaPattern& serving = e.node->interfaces.at(e.interface_id);
  if (ctx.mode == GraphMode::liew) return AntennaPattern::make_omni(ctx.liew_gain, serving.height_m);
  return serving;
}

// Decoding happens on one radio: while a node is engaged on a link it
// receives signal and interference alike through that link's serving
// interface.
inline AntennaPattern decode_pattern(const PairContext& ctx, const Endpoint& victim) {
  const AntennaPattern& serving = victim.node->interfaces.at(victim.interface_id);
  if (ctx.mode == GraphMode::liew) return AntennaPattern::make_omni(ctx.liew_gain, serving.height_m);
  return serving;
}

// Carrier sensing is node-wide: any interface reporting energy marks the
// medium busy, so a sensed source is heard through the interface facing it.
inline AntennaPattern sensing_pattern(const PairContext& ctx, const NodeSpec& victim, Point source_pos) {
  const double h = victim.interfaces.at(0).height_m;
  if (ctx.mode == GraphMode::liew) return AntennaPattern::make_omni(ctx.liew_gain, h);
  return facing_interface(victim, bearing_deg(victim.pos, source_pos));
}

/// Power a receiving endpoint hears from a transmitting endpoint; self
/// reception is reported as infinite (a node always hears itself).
inline double incident_power(const PairContext& ctx, const Endpoint& src, const Endpoint& victim) {
  if (src.node->id == victim.node->id) return std::numeric_limits<double>::infinity();
  const double p = ctx.power->at(src.node->id, src.interface_id);
  return received_power(tx_pattern(ctx, src), decode_pattern(ctx, victim), src.node->pos, victim.node->pos, p,
                        ctx.topo->env);
}

inline bool prevention(const PairContext& ctx, const Endpoint& src, const NodeSpec& victim, double threshold_w) {
  if (src.node->id == victim.id) return true;  // a node's own transmission always blocks it
  const double p = ctx.power->at(src.node->id, src.interface_id);
  const double bearing = bearing_deg(src.node->pos, victim.pos);
  const double range = range_for_threshold(tx_pattern(ctx, src), sensing_pattern(ctx, victim, src.node->pos), p,
                                           threshold_w, bearing, ctx.topo->env);
  return distance(src.node->pos, victim.pos) < range;
}

}  // namespace detail

/// Physical collision between overlapping transmissions: the victim's signal
/// falls short of K times the interference it hears. All inequalities are
/// strict, so boundary equality and out-of-beam interferers yield false.
inline bool physical_collision(const PairContext& ctx, TransmissionPairKind kind) {
  const Topology& topo = *ctx.topo;
  const bool interferer_is_data = kind == TransmissionPairKind::data_data || kind == TransmissionPairKind::data_ack;
  const bool victim_receives_data = kind == TransmissionPairKind::data_data || kind == TransmissionPairKind::ack_data;

  const detail::Endpoint interferer =
      interferer_is_data ? detail::data_endpoint(topo, *ctx.link_i) : detail::ack_endpoint(topo, *ctx.link_i);
  // The victim is receiving its own link's frame: DATA at the receiver,
  // ACK at the transmitter. The signal source is the link's other end.
  const detail::Endpoint signal_src =
      victim_receives_data ? detail::data_endpoint(topo, *ctx.link_j) : detail::ack_endpoint(topo, *ctx.link_j);
  const detail::Endpoint victim =
      victim_receives_data ? detail::ack_endpoint(topo, *ctx.link_j) : detail::data_endpoint(topo, *ctx.link_j);

  const double interference = detail::incident_power(ctx, interferer, victim);
  if (interference == 0.0) return false;
  if (std::isinf(interference)) return true;
  const double signal = detail::incident_power(ctx, signal_src, victim);
  return signal < topo.env.sir_k * interference;
}

/// Link j's transmitter is suppressed by link i's activity.
inline bool tx_side_prevention(const PairContext& ctx, TxPrevention which) {
  const Topology& topo = *ctx.topo;
  const NodeSpec& victim = topo.node(ctx.link_j->tx_node);
  const detail::Endpoint src = which == TxPrevention::ack_data_cs ? detail::ack_endpoint(topo, *ctx.link_i)
                                                                  : detail::data_endpoint(topo, *ctx.link_i);
  const double threshold =
      which == TxPrevention::data_data_tx ? topo.env.rx_threshold_w : topo.env.cs_threshold_w;
  return detail::prevention(ctx, src, victim, threshold);
}

/// Link j's receiver is suppressed by link i's activity.
inline bool rx_side_prevention(const PairContext& ctx, RxPrevention which) {
  const Topology& topo = *ctx.topo;
  const NodeSpec& victim = topo.node(ctx.link_j->rx_node);
  const detail::Endpoint src = which == RxPrevention::ack_ack_cs ? detail::ack_endpoint(topo, *ctx.link_i)
                                                                 : detail::data_endpoint(topo, *ctx.link_i);
  const double threshold =
      which == RxPrevention::data_ack_tx ? topo.env.rx_threshold_w : topo.env.cs_threshold_w;
  return detail::prevention(ctx, src, victim, threshold);
}

}  // namespace acmeter
