#pragma once

#include <cmath>

namespace msca {

/// Point in the local Cartesian frame, metres. z is measured from the
/// average sea surface level.
struct Position3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Position3 operator+(const Position3& a, const Position3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Position3 operator-(const Position3& a, const Position3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Position3 operator*(double s, const Position3& p) { return {s * p.x, s * p.y, s * p.z}; }
  friend bool operator==(const Position3&, const Position3&) = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double horizontal_distance_sq(const Position3& a, const Position3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double horizontal_norm(const Position3& p) { return std::hypot(p.x, p.y); }

}  // namespace msca
