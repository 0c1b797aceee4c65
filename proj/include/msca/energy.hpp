#pragma once

#include <Eigen/Core>
#include <vector>

#include "msca/mission.hpp"
#include "msca/scenario.hpp"

namespace msca {

// K x N matrices of bits; column n-1 holds frame n.
struct BitAllocation {
  Eigen::MatrixXd uplink_sensor_uav;  // L^{I,U}
  Eigen::MatrixXd uplink_uav_leo;     // L^{U,L}
  Eigen::MatrixXd downlink_leo_uav;   // L^{L,U}
  Eigen::MatrixXd compute_uav;        // l^U
  Eigen::MatrixXd compute_leo;        // l^L

  static BitAllocation zeros(int K, int N);
  int K() const { return static_cast<int>(uplink_sensor_uav.rows()); }
  int N() const { return static_cast<int>(uplink_sensor_uav.cols()); }
  bool operator==(const BitAllocation& o) const;
};

struct Trajectory {
  std::vector<Position3> waypoints;  // N+1 entries

  int N() const { return static_cast<int>(waypoints.size()) - 1; }
  // Velocity during frame n (1-based), m/s.
  Eigen::Vector2d velocity(int frame, double frame_duration) const;
};

// Per-sensor computation energy for one frame: bits and cycles are K-vectors.
Eigen::VectorXd computation_energy(const Eigen::VectorXd& bits, const Eigen::VectorXd& cycles_per_bit,
                                   double switched_capacitance, double frame_duration);

// (N_0 * slot / gain) * (2^{bits / slot} - 1), with slot = B*Delta/K.
double link_energy(double bits, double gain, double noise_density, double slot_bandwidth_time);

double uav_to_leo_energy(double bits, double gain, const MissionSpec& mission);
double sensor_to_uav_energy(double bits, double gain, const MissionSpec& mission);
double leo_to_uav_energy(double bits, double gain, const MissionSpec& mission);

// Output bits delivered to the end user: sum over sensors of O^U * sum l^U + O^L * sum l^L.
double downlink_end_bits(const BitAllocation& alloc, const MissionSpec& mission);
double uav_to_end_energy(const BitAllocation& alloc, const Trajectory& traj, const MissionSpec& mission);

double flying_energy(const Eigen::Vector2d& velocity, const MissionSpec& mission);

// Literal per-(k, n) total with masks alpha_{k,n}, beta_k; frame and sensor are 1-based.
double total_frame_energy(const BitAllocation& alloc, const Trajectory& traj, const AccessProfile& access,
                          const ScheduleProfile& schedule, const MissionSpec& mission, int frame,
                          int sensor);

struct EnergyBreakdown {
  Eigen::MatrixXd comp_uav, comp_leo, tx_sensor_uav, tx_uav_leo, tx_leo_uav;  // K x N
  Eigen::VectorXd flying;                                                     // N
  double total_comp_uav = 0, total_comp_leo = 0, total_tx_sensor_uav = 0, total_tx_uav_leo = 0,
         total_tx_leo_uav = 0, total_flying = 0;
  double downlink_end_bits = 0;
  double downlink_end = 0;  // E^{U,E}
  // UAV computation + UAV->LEO transmission + flying.
  double objective_total = 0;
  double report_total = 0;  // objective_total + E^{U,E}
};

EnergyBreakdown evaluate_energy(const BitAllocation& alloc, const Trajectory& traj, const MissionSpec& mission);

}  // namespace msca
