#include "msca/mission.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msca {
namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw std::invalid_argument(field + ": " + what);
}

void require_positive(double v, const std::string& field) {
  require(std::isfinite(v) && v > 0.0, field, "must be positive and finite");
}

}  // namespace

void SensorSpec::validate(int index) const {
  const std::string p = "sensor[" + std::to_string(index) + "].";
  require(position.finite(), p + "position", "must be finite");
  require(std::isfinite(input_bits) && input_bits >= 0.0, p + "input_bits", "must be >= 0");
  require_positive(cycles_per_bit_uav, p + "cycles_per_bit_uav");
  require_positive(cycles_per_bit_leo, p + "cycles_per_bit_leo");
  require(output_ratio_uav > 0.0 && output_ratio_uav <= 1.0, p + "output_ratio_uav",
          "must lie in (0, 1]");
  require(output_ratio_leo > 0.0 && output_ratio_leo <= 1.0, p + "output_ratio_leo",
          "must lie in (0, 1]");
}

void LeoOrbitSpec::validate(int frame_count) const {
  require_positive(speed, "leo.speed");
  require_positive(orbit_height, "leo.orbit_height");
  require_positive(earth_radius, "leo.earth_radius");
  require_positive(altitude_above_uav, "leo.altitude_above_uav");
  require_positive(antenna_gain, "leo.antenna_gain");
  require(elevation_angle >= 0.0 && elevation_angle < M_PI / 2, "leo.elevation_angle",
          "must lie in [0, pi/2)");
  require(static_cast<int>(ground_track.size()) == frame_count, "leo.ground_track",
          "needs one entry per frame");
  for (const auto& p : ground_track) require(p.finite(), "leo.ground_track", "must be finite");
  if (visible_time_override)
    require(std::isfinite(*visible_time_override) && *visible_time_override >= 0.0,
            "leo.visible_time_override", "must be >= 0");
}

double MissionSpec::noise_energy_scale() const {
  return noise_density * bandwidth * frame_duration / K();
}

double MissionSpec::slot_bandwidth_time() const { return bandwidth * frame_duration / K(); }

void MissionSpec::validate() const {
  require(K() >= 1, "sensors", "need at least one sensor");
  require(frame_count >= 3, "frame_count", "must be >= 3");
  require_positive(total_time, "total_time");
  require_positive(frame_duration, "frame_duration");
  require(std::abs(total_time - frame_count * frame_duration) <= 1e-9 * total_time, "total_time",
          "must equal frame_count * frame_duration");
  require_positive(uav_altitude, "uav_altitude");
  require_positive(bandwidth, "bandwidth");
  require_positive(noise_density, "noise_density");
  require_positive(reference_gain, "reference_gain");
  require_positive(energy_budget, "energy_budget");
  require_positive(uav_mass, "uav_mass");
  require_positive(v_max, "v_max");
  require_positive(uav_cpu, "uav_cpu");
  require_positive(leo_cpu, "leo_cpu");
  require_positive(gamma_uav, "gamma_uav");
  require_positive(gamma_leo, "gamma_leo");
  require(end_user.finite(), "end_user", "must be finite");
  require(uav_start.finite(), "uav_start", "must be finite");
  require(uav_end.finite(), "uav_end", "must be finite");
  for (int k = 0; k < K(); ++k) sensors[k].validate(k + 1);
  orbit.validate(frame_count);
}

double dbm_per_hz_to_w_per_hz(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

double reference_gain_from_snr(double snr_db, double noise_density, double bandwidth) {
  return std::pow(10.0, snr_db / 10.0) * noise_density * bandwidth;
}

double projected_ground_speed(const LeoOrbitSpec& orbit) {
  return orbit.speed * orbit.earth_radius / (orbit.earth_radius + orbit.orbit_height);
}

std::vector<Position3> straight_ground_track(const Position3& start, double heading_rad,
                                             double ground_speed, int frame_count,
                                             double frame_duration) {
  if (frame_count < 0) throw std::invalid_argument("frame_count must be >= 0");
  std::vector<Position3> track;
  track.reserve(frame_count);
  const double step = ground_speed * frame_duration;
  const double ux = std::cos(heading_rad), uy = std::sin(heading_rad);
  for (int n = 0; n < frame_count; ++n)
    track.push_back({start.x + n * step * ux, start.y + n * step * uy, start.z});
  return track;
}

}  // namespace msca
