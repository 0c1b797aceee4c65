#pragma once

#include <optional>
#include <vector>

#include "msca/geometry.hpp"

namespace msca {

struct SensorSpec {
  Position3 position;             // z is the sea-surface level a_k
  double input_bits = 0.0;        // I_k
  double cycles_per_bit_uav = 1550.7;
  double cycles_per_bit_leo = 1550.7;
  double output_ratio_uav = 0.5;
  double output_ratio_leo = 0.5;

  void validate(int index) const;
};

struct LeoOrbitSpec {
  double speed = 7500.0;              // v_s, m/s
  double orbit_height = 601e3;        // h, m
  double elevation_angle = 0.17453292519943295;  // theta, rad (10 deg)
  double earth_radius = 6371e3;       // r_E, m
  double altitude_above_uav = 600e3;  // h_L, m
  double antenna_gain = 10.0;         // G, linear
  // One entry per frame; z is overwritten with h_U + h_L on lookup.
  std::vector<Position3> ground_track;
  // When set, replaces the geometric visible time.
  std::optional<double> visible_time_override;

  void validate(int frame_count) const;
};

struct MissionSpec {
  std::vector<SensorSpec> sensors;
  Position3 end_user;
  Position3 uav_start;
  Position3 uav_end;
  double uav_altitude = 1000.0;  // h_U
  double total_time = 360.0;     // T
  double frame_duration = 6.0;   // Delta
  int frame_count = 60;          // N
  double bandwidth = 40e6;       // B
  double noise_density = 3.981071705534973e-21;  // N_0 (-174 dBm/Hz)
  double reference_gain = 1.5924286822139893e-05;  // g_0
  double energy_budget = 0.11;   // epsilon, J per frame
  double uav_mass = 9.65;
  double v_max = 50.0;
  double uav_cpu = 19.5e9;       // f^U
  double leo_cpu = 39e9;         // f^L
  double gamma_uav = 1e-28;
  double gamma_leo = 1e-28;
  LeoOrbitSpec orbit;

  int K() const { return static_cast<int>(sensors.size()); }
  int N() const { return frame_count; }

  // N_0 * B * Delta / K, the per-slot noise energy scale shared by every link.
  double noise_energy_scale() const;
  // B * Delta / K, bits per unit of log2(1 + SNR) in one sensor slot.
  double slot_bandwidth_time() const;
  double flying_coefficient() const { return 0.5 * uav_mass * frame_duration; }

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// g_0 = SNR_ref * N_0 * B, the gain giving the reference SNR at 1 m for unit power.
double reference_gain_from_snr(double snr_db, double noise_density, double bandwidth);

double dbm_per_hz_to_w_per_hz(double dbm);

// Ground speed of the sub-satellite point, v_s * r_E / (r_E + h).
double projected_ground_speed(const LeoOrbitSpec& orbit);

// frame_count positions starting at `start`, moving along `heading_rad` (from +x,
// counter-clockwise) by ground_speed * frame_duration per frame.
std::vector<Position3> straight_ground_track(const Position3& start, double heading_rad,
                                             double ground_speed, int frame_count,
                                             double frame_duration);

}  // namespace msca
