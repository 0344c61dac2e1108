#pragma once

#include <cmath>
#include <stdexcept>

namespace acmeter {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

/// Normalizes an angle in degrees to [0, 360).
inline double normalize_deg(double deg) {
  double d = std::fmod(deg, 360.0);
  if (d < 0.0) d += 360.0;
  // fmod of a tiny negative may round to 360 exactly
  if (d >= 360.0) d -= 360.0;
  return d;
}

/// Bearing of `to` as seen from `from`, degrees in [0, 360), 0 = +x axis.
inline double bearing_deg(Point from, Point to) {
  if (from == to) throw std::invalid_argument("bearing undefined: zero distance");
  return normalize_deg(std::atan2(to.y - from.y, to.x - from.x) * 180.0 / M_PI);
}

/// Smallest angular separation between two bearings, in [0, 180].
inline double angular_distance_deg(double a, double b) {
  double d = normalize_deg(a - b);
  return d > 180.0 ? 360.0 - d : d;
}

inline double reverse_bearing_deg(double deg) { return normalize_deg(deg + 180.0); }

}  // namespace acmeter
