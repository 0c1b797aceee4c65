#pragma once

#include <random>

#include "msca/mission.hpp"
#include "msca/scenario.hpp"

namespace msca::testing {

// Default constants, K sensors on a line at y = 5 km, straight ground track.
inline MissionSpec table_mission(int K = 10, int N = 60, double load = 0.0) {
  MissionSpec m;
  m.frame_count = N;
  m.total_time = N * m.frame_duration;
  m.uav_start = {5000, 0, 1000};
  m.uav_end = {10000, 5000, 1000};
  m.end_user = {10000, 5000, 0};
  for (int k = 0; k < K; ++k) {
    SensorSpec s;
    s.position = {1000.0 + 8000.0 * k / std::max(1, K - 1), 5000.0, 0.0};
    s.input_bits = load;
    m.sensors.push_back(s);
  }
  m.orbit.ground_track = straight_ground_track({10000, 10000, 0}, -0.75 * M_PI, 39.3, N, m.frame_duration);
  return m;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace msca::testing
