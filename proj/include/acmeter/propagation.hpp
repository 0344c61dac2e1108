#pragma once

#include <cmath>
#include <stdexcept>

#include "acmeter/antenna.hpp"
#include "acmeter/environment.hpp"
#include "acmeter/geometry.hpp"

namespace acmeter {

/// Two-ray ground power received from a directional transmitter:
///   P_rx = P_tx * G_tx(toward rx) * G_rx(toward tx) * h_tx^2 * h_rx^2 / r^alpha
/// Zero when either pattern has no gain along the path.
inline double received_power(const AntennaPattern& tx, const AntennaPattern& rx, Point tx_pos, Point rx_pos,
                             double tx_power_w, const Environment& env) {
  if (tx_pos == rx_pos) throw std::invalid_argument("received_power: zero distance");
  if (tx_power_w < 0.0) throw std::invalid_argument("received_power: negative transmit power");
  const double r = distance(tx_pos, rx_pos);
  const double bearing = bearing_deg(tx_pos, rx_pos);
  const double g = gain_toward(tx, bearing) * gain_toward(rx, reverse_bearing_deg(bearing));
  if (g == 0.0) return 0.0;
  const double h2 = tx.height_m * tx.height_m * rx.height_m * rx.height_m;
  return tx_power_w * g * h2 / std::pow(r, env.path_loss_exponent);
}

/// Distance along `bearing_deg` at which the received power crosses
/// `threshold_w`; 0 when the directional gain product vanishes. TXRange uses
/// the rx threshold, CSRange the cs threshold.
inline double range_for_threshold(const AntennaPattern& tx, const AntennaPattern& rx, double tx_power_w,
                                  double threshold_w, double bearing_deg, const Environment& env) {
  if (!(threshold_w > 0.0)) throw std::invalid_argument("range_for_threshold: threshold must be > 0");
  const double g = gain_toward(tx, bearing_deg) * gain_toward(rx, reverse_bearing_deg(bearing_deg));
  if (g == 0.0 || tx_power_w == 0.0) return 0.0;
  const double h2 = tx.height_m * tx.height_m * rx.height_m * rx.height_m;
  return std::pow(tx_power_w * g * h2 / threshold_w, 1.0 / env.path_loss_exponent);
}

inline double tx_range(const AntennaPattern& tx, const AntennaPattern& rx, double tx_power_w, double bearing_deg,
                       const Environment& env) {
  return range_for_threshold(tx, rx, tx_power_w, env.rx_threshold_w, bearing_deg, env);
}

inline double cs_range(const AntennaPattern& tx, const AntennaPattern& rx, double tx_power_w, double bearing_deg,
                       const Environment& env) {
  return range_for_threshold(tx, rx, tx_power_w, env.cs_threshold_w, bearing_deg, env);
}

}  // namespace acmeter
