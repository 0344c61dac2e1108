#pragma once

#include <stdexcept>

#include "acmeter/geometry.hpp"

namespace acmeter {

enum class AntennaKind { omni, sector };

/// Gain-versus-bearing pattern. Sectors are ideal pie slices: peak gain
/// inside the beam, exactly zero outside, no side or back lobes.
struct AntennaPattern {
  AntennaKind kind = AntennaKind::omni;
  double boresight_deg = 0.0;  // sector only
  double beamwidth_deg = 360.0;  // sector only
  double peak_gain = 1.0;
  double height_m = 1.5;

  static AntennaPattern make_omni(double gain, double height_m) {
    return AntennaPattern{AntennaKind::omni, 0.0, 360.0, gain, height_m};
  }
  static AntennaPattern make_sector(double boresight_deg, double beamwidth_deg, double gain, double height_m) {
    if (!(beamwidth_deg > 0.0 && beamwidth_deg <= 360.0))
      throw std::invalid_argument("sector beamwidth must be in (0, 360]");
    return AntennaPattern{AntennaKind::sector, normalize_deg(boresight_deg), beamwidth_deg, gain, height_m};
  }

  friend bool operator==(const AntennaPattern&, const AntennaPattern&) = default;
};

/// Linear gain radiated (or received) at the given bearing. Periodic in 360;
/// the beam edge at exactly half the beamwidth still has peak gain.
inline double gain_toward(const AntennaPattern& p, double bearing_deg) {
  if (p.kind == AntennaKind::omni) return p.peak_gain;
  return angular_distance_deg(bearing_deg, p.boresight_deg) <= p.beamwidth_deg / 2.0 ? p.peak_gain : 0.0;
}

}  // namespace acmeter
