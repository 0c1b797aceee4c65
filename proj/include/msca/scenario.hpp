#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "msca/mission.hpp"

namespace msca {

// Sensor indices are 1-based; index K+1 addresses the end user.
double sensor_uav_gain(const MissionSpec& mission, int sensor_index, const Position3& uav);
// Frames are 1-based.
double uav_leo_gain(const MissionSpec& mission, int frame, const Position3& uav);

double coverage_angle(const LeoOrbitSpec& orbit);

struct VisibilityWindow {
  double visible_time = 0.0;    // T_v, s
  double coverage_angle = 0.0;  // rad
  int last_connected_frame = 0;  // N_t
};

VisibilityWindow visible_time(const LeoOrbitSpec& orbit, double total_time, double frame_duration);
VisibilityWindow visible_time(const MissionSpec& mission);

enum class ScenarioKind { AlwaysOn, AlwaysOff, IntermediateDisconnected };

struct Scenario {
  ScenarioKind kind = ScenarioKind::AlwaysOn;
  int last_connected_frame = 0;  // N_t, meaningful for IntermediateDisconnected

  static Scenario always_on(int frame_count) { return {ScenarioKind::AlwaysOn, frame_count}; }
  static Scenario always_off() { return {ScenarioKind::AlwaysOff, 0}; }
  static Scenario intermediate(int nt) { return {ScenarioKind::IntermediateDisconnected, nt}; }
  bool operator==(const Scenario&) const = default;
};

std::string to_string(ScenarioKind kind);
std::string to_string(const Scenario& s);

Scenario classify_scenario(const MissionSpec& mission, const VisibilityWindow& window);

// alpha(k, n) for 0-based k and 0-based frame column n.
struct AccessProfile {
  Eigen::MatrixXi alpha;
};

AccessProfile build_access_profile(const Scenario& scenario, const MissionSpec& mission);

struct ScheduleProfile {
  Eigen::VectorXi beta;
};

// Bits of sensor k (1-based) the UAV can compute over the whole mission.
double uav_capacity_bits(const MissionSpec& mission, int sensor_index);

ScheduleProfile schedule_offloading(const MissionSpec& mission, const AccessProfile& profile);

// N+1 waypoints at altitude h_U. Throws InfeasibleInstance above v_max.
std::vector<Position3> constant_velocity_path(const MissionSpec& mission);

Position3 leo_position_at(const MissionSpec& mission, int frame);

}  // namespace msca
