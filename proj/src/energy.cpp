#include "msca/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace msca {

BitAllocation BitAllocation::zeros(int K, int N) {
  BitAllocation a;
  for (auto* m : {&a.uplink_sensor_uav, &a.uplink_uav_leo, &a.downlink_leo_uav, &a.compute_uav,
                  &a.compute_leo})
    *m = Eigen::MatrixXd::Zero(K, N);
  return a;
}

bool BitAllocation::operator==(const BitAllocation& o) const {
  return uplink_sensor_uav == o.uplink_sensor_uav && uplink_uav_leo == o.uplink_uav_leo &&
         downlink_leo_uav == o.downlink_leo_uav && compute_uav == o.compute_uav &&
         compute_leo == o.compute_leo;
}

Eigen::Vector2d Trajectory::velocity(int frame, double frame_duration) const {
  if (frame < 1 || frame > N()) throw std::out_of_range("trajectory frame out of range");
  const Position3& a = waypoints[frame - 1];
  const Position3& b = waypoints[frame];
  return {(b.x - a.x) / frame_duration, (b.y - a.y) / frame_duration};
}

Eigen::VectorXd computation_energy(const Eigen::VectorXd& bits, const Eigen::VectorXd& cycles_per_bit,
                                   double switched_capacitance, double frame_duration) {
  if (bits.size() != cycles_per_bit.size()) throw std::invalid_argument("bits/cycles size mismatch");
  if ((bits.array() < 0.0).any()) throw std::invalid_argument("negative bits");
  const Eigen::ArrayXd cl = cycles_per_bit.array() * bits.array();
  const double load = cl.sum();
  return (switched_capacitance / (frame_duration * frame_duration) * load * load) * cl.matrix();
}

double link_energy(double bits, double gain, double noise_density, double slot_bandwidth_time) {
  if (bits < 0.0) throw std::invalid_argument("negative bits");
  if (!(gain > 0.0)) throw std::invalid_argument("gain must be positive");
  return noise_density * slot_bandwidth_time / gain * std::expm1(bits / slot_bandwidth_time * M_LN2);
}

double uav_to_leo_energy(double bits, double gain, const MissionSpec& m) {
  return link_energy(bits, gain, m.noise_density, m.slot_bandwidth_time());
}
double sensor_to_uav_energy(double bits, double gain, const MissionSpec& m) {
  return link_energy(bits, gain, m.noise_density, m.slot_bandwidth_time());
}
double leo_to_uav_energy(double bits, double gain, const MissionSpec& m) {
  return link_energy(bits, gain, m.noise_density, m.slot_bandwidth_time());
}

double downlink_end_bits(const BitAllocation& alloc, const MissionSpec& mission) {
  double total = 0.0;
  for (int k = 0; k < mission.K(); ++k) {
    const auto& s = mission.sensors[k];
    total += s.output_ratio_uav * alloc.compute_uav.row(k).sum() +
             s.output_ratio_leo * alloc.compute_leo.row(k).sum();
  }
  return total;
}

double uav_to_end_energy(const BitAllocation& alloc, const Trajectory& traj, const MissionSpec& mission) {
  const double bits = downlink_end_bits(alloc, mission);
  const double g = sensor_uav_gain(mission, mission.K() + 1, traj.waypoints.back());
  return link_energy(bits, g, mission.noise_density, mission.slot_bandwidth_time());
}

double flying_energy(const Eigen::Vector2d& velocity, const MissionSpec& mission) {
  return mission.flying_coefficient() * velocity.squaredNorm();
}

namespace {

Eigen::VectorXd uav_cycles(const MissionSpec& m) {
  Eigen::VectorXd c(m.K());
  for (int k = 0; k < m.K(); ++k) c(k) = m.sensors[k].cycles_per_bit_uav;
  return c;
}

Eigen::VectorXd leo_cycles(const MissionSpec& m) {
  Eigen::VectorXd c(m.K());
  for (int k = 0; k < m.K(); ++k) c(k) = m.sensors[k].cycles_per_bit_leo;
  return c;
}

}  // namespace

double total_frame_energy(const BitAllocation& alloc, const Trajectory& traj, const AccessProfile& access,
                          const ScheduleProfile& schedule, const MissionSpec& mission, int frame,
                          int sensor) {
  if (frame < 1 || frame > mission.N()) throw std::out_of_range("frame out of range");
  if (sensor < 1 || sensor > mission.K()) throw std::out_of_range("sensor out of range");
  const int k = sensor - 1, n = frame - 1;
  const double a = access.alpha(k, n);
  const double b = schedule.beta(k);
  const Position3& p = traj.waypoints[n];
  const double e_ul =
      uav_to_leo_energy(alloc.uplink_uav_leo(k, n), uav_leo_gain(mission, frame, p), mission);
  const double e_u =
      computation_energy(alloc.compute_uav.col(n), uav_cycles(mission), mission.gamma_uav,
                         mission.frame_duration)(k);
  const double e_f = flying_energy(traj.velocity(frame, mission.frame_duration), mission);
  return a * (b * e_ul + (1.0 - b) * e_u) + (1.0 - a) * (1.0 - b) * e_u + e_f;
}

EnergyBreakdown evaluate_energy(const BitAllocation& alloc, const Trajectory& traj, const MissionSpec& m) {
  const int K = m.K(), N = m.N();
  if (alloc.K() != K || alloc.N() != N) throw std::invalid_argument("allocation dimensions mismatch");
  if (traj.N() != N) throw std::invalid_argument("trajectory must have N+1 waypoints");
  EnergyBreakdown e;
  e.comp_uav = e.comp_leo = e.tx_sensor_uav = e.tx_uav_leo = e.tx_leo_uav = Eigen::MatrixXd::Zero(K, N);
  e.flying = Eigen::VectorXd::Zero(N);
  const Eigen::VectorXd cu = uav_cycles(m), cl = leo_cycles(m);
  for (int n = 0; n < N; ++n) {
    const Position3& p = traj.waypoints[n];
    e.comp_uav.col(n) = computation_energy(alloc.compute_uav.col(n), cu, m.gamma_uav, m.frame_duration);
    e.comp_leo.col(n) = computation_energy(alloc.compute_leo.col(n), cl, m.gamma_leo, m.frame_duration);
    const double h = uav_leo_gain(m, n + 1, p);
    for (int k = 0; k < K; ++k) {
      e.tx_sensor_uav(k, n) = sensor_to_uav_energy(alloc.uplink_sensor_uav(k, n), sensor_uav_gain(m, k + 1, p), m);
      e.tx_uav_leo(k, n) = uav_to_leo_energy(alloc.uplink_uav_leo(k, n), h, m);
      e.tx_leo_uav(k, n) = leo_to_uav_energy(alloc.downlink_leo_uav(k, n), h, m);
    }
    e.flying(n) = flying_energy(traj.velocity(n + 1, m.frame_duration), m);
  }
  e.total_comp_uav = e.comp_uav.sum();
  e.total_comp_leo = e.comp_leo.sum();
  e.total_tx_sensor_uav = e.tx_sensor_uav.sum();
  e.total_tx_uav_leo = e.tx_uav_leo.sum();
  e.total_tx_leo_uav = e.tx_leo_uav.sum();
  e.total_flying = e.flying.sum();
  e.downlink_end_bits = downlink_end_bits(alloc, m);
  e.downlink_end = uav_to_end_energy(alloc, traj, m);
  e.objective_total = e.total_comp_uav + e.total_tx_uav_leo + e.total_flying;
  e.report_total = e.objective_total + e.downlink_end;
  return e;
}

}  // namespace msca
