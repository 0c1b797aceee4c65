#include "msca/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msca/errors.hpp"

namespace msca {

double sensor_uav_gain(const MissionSpec& mission, int sensor_index, const Position3& uav) {
  const int K = mission.K();
  if (sensor_index < 1 || sensor_index > K + 1)
    throw std::out_of_range("sensor index " + std::to_string(sensor_index) + " outside [1, " +
                            std::to_string(K + 1) + "]");
  const Position3& s =
      sensor_index == K + 1 ? mission.end_user : mission.sensors[sensor_index - 1].position;
  const double h = mission.uav_altitude;
  return mission.reference_gain / (horizontal_distance_sq(uav, s) + h * h);
}

double uav_leo_gain(const MissionSpec& mission, int frame, const Position3& uav) {
  const Position3 leo = leo_position_at(mission, frame);
  const double hl = mission.orbit.altitude_above_uav;
  return mission.reference_gain * mission.orbit.antenna_gain /
         (horizontal_distance_sq(leo, uav) + hl * hl);
}

double coverage_angle(const LeoOrbitSpec& orbit) {
  const double theta = orbit.elevation_angle;
  if (!(theta >= 0.0 && theta < M_PI / 2))
    throw std::invalid_argument("elevation angle must lie in [0, pi/2)");
  const double arg = orbit.earth_radius / (orbit.earth_radius + orbit.orbit_height) * std::cos(theta);
  if (!(arg >= -1.0 && arg <= 1.0)) throw std::domain_error("coverage angle: arccos argument out of range");
  return std::clamp(std::acos(arg) - theta, 0.0, M_PI);
}

VisibilityWindow visible_time(const LeoOrbitSpec& orbit, double total_time, double frame_duration) {
  if (!(orbit.speed > 0.0)) throw std::invalid_argument("satellite speed must be positive");
  VisibilityWindow w;
  w.coverage_angle = coverage_angle(orbit);
  w.visible_time = orbit.visible_time_override
                       ? *orbit.visible_time_override
                       : 2.0 * (orbit.earth_radius + orbit.orbit_height) * w.coverage_angle / orbit.speed;
  // A frame ending exactly at T_v still counts as connected.
  const double t = std::min(w.visible_time, total_time);
  w.last_connected_frame = static_cast<int>(std::floor(t / frame_duration + 1e-9));
  return w;
}

VisibilityWindow visible_time(const MissionSpec& mission) {
  return visible_time(mission.orbit, mission.total_time, mission.frame_duration);
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::AlwaysOn: return "always_on";
    case ScenarioKind::AlwaysOff: return "always_off";
    case ScenarioKind::IntermediateDisconnected: return "intermediate";
  }
  return "unknown";
}

std::string to_string(const Scenario& s) {
  if (s.kind == ScenarioKind::IntermediateDisconnected)
    return "intermediate(" + std::to_string(s.last_connected_frame) + ")";
  return to_string(s.kind);
}

Scenario classify_scenario(const MissionSpec& mission, const VisibilityWindow& window) {
  if (mission.total_time <= window.visible_time) return Scenario::always_on(mission.N());
  if (window.visible_time <= 0.0) return Scenario::always_off();
  return Scenario::intermediate(window.last_connected_frame);
}

AccessProfile build_access_profile(const Scenario& scenario, const MissionSpec& mission) {
  const int K = mission.K(), N = mission.N();
  AccessProfile p;
  p.alpha = Eigen::MatrixXi::Zero(K, N);
  switch (scenario.kind) {
    case ScenarioKind::AlwaysOn: p.alpha.setOnes(); break;
    case ScenarioKind::AlwaysOff: break;
    case ScenarioKind::IntermediateDisconnected: {
      const int nt = scenario.last_connected_frame;
      if (nt < 0 || nt > N) throw std::out_of_range("N_t outside [0, N]");
      p.alpha.leftCols(nt).setOnes();
      break;
    }
  }
  return p;
}

double uav_capacity_bits(const MissionSpec& mission, int sensor_index) {
  if (sensor_index < 1 || sensor_index > mission.K()) throw std::out_of_range("sensor index");
  const auto& s = mission.sensors[sensor_index - 1];
  return mission.N() * mission.uav_cpu * mission.frame_duration / mission.K() / s.cycles_per_bit_uav;
}

ScheduleProfile schedule_offloading(const MissionSpec& mission, const AccessProfile& profile) {
  const int K = mission.K();
  if (profile.alpha.rows() != K || profile.alpha.cols() != mission.N())
    throw std::invalid_argument("access profile does not match mission dimensions");
  ScheduleProfile s;
  s.beta = Eigen::VectorXi::Zero(K);
  for (int k = 0; k < K; ++k) {
    const bool reachable = profile.alpha.row(k).maxCoeff() > 0;
    s.beta(k) = reachable && mission.sensors[k].input_bits > uav_capacity_bits(mission, k + 1) ? 1 : 0;
  }
  return s;
}

std::vector<Position3> constant_velocity_path(const MissionSpec& mission) {
  const int N = mission.N();
  Position3 a = mission.uav_start, b = mission.uav_end;
  a.z = b.z = mission.uav_altitude;
  const double dist = std::sqrt(horizontal_distance_sq(a, b));
  if (dist > mission.v_max * mission.total_time * (1.0 + 1e-12))
    throw InfeasibleInstance("endpoints are " + std::to_string(dist) +
                             " m apart, beyond reach at v_max within T");
  std::vector<Position3> path(N + 1);
  for (int n = 0; n <= N; ++n) {
    const double t = static_cast<double>(n) / N;
    path[n] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), mission.uav_altitude};
  }
  path[N] = b;
  return path;
}

Position3 leo_position_at(const MissionSpec& mission, int frame) {
  const auto& track = mission.orbit.ground_track;
  if (frame < 1 || frame > static_cast<int>(track.size()))
    throw std::out_of_range("no ground-track entry for frame " + std::to_string(frame));
  Position3 p = track[frame - 1];
  p.z = mission.uav_altitude + mission.orbit.altitude_above_uav;
  return p;
}

}  // namespace msca
