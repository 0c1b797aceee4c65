#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "msca/energy.hpp"

using namespace msca;
using msca::testing::table_mission;

namespace {

double comp1(double l, const MissionSpec& m) {
  return computation_energy(Eigen::VectorXd::Constant(1, l), Eigen::VectorXd::Constant(1, 1550.7), m.gamma_uav,
                            m.frame_duration)(0);
}

}  // namespace

TEST_CASE("computation energy") {
  const MissionSpec m = table_mission(1);
  CHECK(comp1(1e6, m) == doctest::Approx(1.036e-2).epsilon(1e-3));
  CHECK(comp1(0, m) == 0);

  Eigen::VectorXd l(3), c = Eigen::VectorXd::Constant(3, 1550.7);
  l << 1e6, 3e6, 0.5e6;
  const Eigen::VectorXd e1 = computation_energy(l, c, 1e-28, 6), e2 = computation_energy(2 * l, c, 1e-28, 6);
  for (int k = 0; k < 3; ++k) CHECK(e2(k) == doctest::Approx(8 * e1(k)).epsilon(1e-12));
  // direct form (gamma C l / Delta^2) (sum C l)^2
  const double S = c.dot(l);
  CHECK(e1(1) == doctest::Approx(1e-28 * 1550.7 * 3e6 / 36 * S * S).epsilon(1e-14));
}

TEST_CASE("link energies") {
  const MissionSpec m = table_mission(10);
  CHECK(m.slot_bandwidth_time() == doctest::Approx(24e6));
  const double h = 10 * m.reference_gain / 3.6e11;
  CHECK(uav_to_leo_energy(1e6, h, m) == doctest::Approx(6.33).epsilon(2e-3));
  CHECK(leo_to_uav_energy(1e6, h, m) == uav_to_leo_energy(1e6, h, m));
  CHECK(uav_to_leo_energy(0, h, m) == 0);
  // two half frames at equal gain never cost more than one full frame
  for (double L : {1e5, 1e6, 5e7}) CHECK(2 * uav_to_leo_energy(L / 2, h, m) <= uav_to_leo_energy(L, h, m));

  const double g = m.reference_gain / 1e6;
  CHECK(sensor_to_uav_energy(1e6, g, m) == doctest::Approx(1.76e-4).epsilon(3e-3));
  CHECK(sensor_to_uav_energy(1e6, g, m) <= m.energy_budget);
  CHECK(sensor_to_uav_energy(1e6, g / 2, m) == doctest::Approx(2 * sensor_to_uav_energy(1e6, g, m)).epsilon(1e-14));
  CHECK(sensor_to_uav_energy(0, g, m) == 0);

  MissionSpec wide = m;
  wide.bandwidth *= 2;
  CHECK(leo_to_uav_energy(1e6, h, wide) < leo_to_uav_energy(1e6, h, m));
}

TEST_CASE("energy terms are nonnegative, convex and increasing in bits") {
  const MissionSpec m = table_mission(10);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 5e7);
  const double g = m.reference_gain / 4e6;
  for (int i = 0; i < 200; ++i) {
    const double L = U(rng), d = 1e4;
    for (auto f : {+[](double x, double gg, const MissionSpec& mm) { return sensor_to_uav_energy(x, gg, mm); },
                   +[](double x, double gg, const MissionSpec& mm) { return uav_to_leo_energy(x, gg, mm); }}) {
      const double a = f(L - d, g, m), b = f(L, g, m), c = f(L + d, g, m);
      CHECK(b >= 0);
      CHECK(c > b);
      CHECK(a + c - 2 * b >= -1e-12 * b);
    }
    const double a = comp1(L - 1e4, m), b = comp1(L, m), c = comp1(L + 1e4, m);
    CHECK(c > b);
    CHECK(a + c - 2 * b >= -1e-12 * b);
  }
}

TEST_CASE("end-user downlink") {
  MissionSpec m = table_mission(2);
  BitAllocation a = BitAllocation::zeros(2, 60);
  Trajectory t{constant_velocity_path(m)};
  CHECK(downlink_end_bits(a, m) == 0);
  CHECK(uav_to_end_energy(a, t, m) == 0);
  a.compute_uav(0, 5) = 1.2e8;
  a.compute_leo(1, 7) = 0.8e8;
  CHECK(downlink_end_bits(a, m) == doctest::Approx(1e8));

  MissionSpec one = table_mission(1);
  BitAllocation b = BitAllocation::zeros(1, 60);
  b.compute_uav(0, 3) = 2e6;  // O^U = 0.5 -> 1e6 output bits
  // the path ends directly above the end user; one sensor slot is B * Delta
  const double expected = link_energy(1e6, one.reference_gain / 1e6, one.noise_density, one.slot_bandwidth_time());
  CHECK(uav_to_end_energy(b, Trajectory{constant_velocity_path(one)}, one) == doctest::Approx(expected));
  CHECK(link_energy(1e6, one.reference_gain / 1e6, one.noise_density, 24e6) == doctest::Approx(1.76e-4).epsilon(3e-3));
}

TEST_CASE("flying energy") {
  const MissionSpec m = table_mission(1);
  CHECK(m.flying_coefficient() == doctest::Approx(28.95));
  CHECK(flying_energy({10, 0}, m) == doctest::Approx(2895));
  CHECK(flying_energy({0, 0}, m) == 0);
  CHECK(flying_energy({50, 0}, m) == doctest::Approx(72375));
}

TEST_CASE("per-frame total with access and schedule masks") {
  MissionSpec m = table_mission(1, 5);
  BitAllocation a = BitAllocation::zeros(1, 5);
  Trajectory still{std::vector<Position3>(6, m.uav_start)};
  AccessProfile on{Eigen::MatrixXi::Ones(1, 5)}, off{Eigen::MatrixXi::Zero(1, 5)};
  ScheduleProfile leo{Eigen::VectorXi::Ones(1)}, uav{Eigen::VectorXi::Zero(1)};
  CHECK(total_frame_energy(a, still, on, leo, m, 2, 1) == 0);

  a.compute_uav(0, 1) = 1e6;
  a.uplink_uav_leo(0, 1) = 2e6;
  Trajectory moving = still;
  for (int n = 1; n <= 5; ++n) moving.waypoints[n].x = moving.waypoints[n - 1].x + 60;  // 10 m/s
  const double eu = comp1(1e6, m), ef = 2895;
  const double eul = uav_to_leo_energy(2e6, uav_leo_gain(m, 2, moving.waypoints[1]), m);
  CHECK(total_frame_energy(a, moving, on, uav, m, 2, 1) == doctest::Approx(eu + ef));
  CHECK(total_frame_energy(a, moving, off, uav, m, 2, 1) == doctest::Approx(eu + ef));
  CHECK(total_frame_energy(a, moving, on, leo, m, 2, 1) == doctest::Approx(eul + ef));
  CHECK(total_frame_energy(a, moving, on, uav, m, 2, 1) == doctest::Approx(1.036e-2 + 2895).epsilon(1e-6));
}

TEST_CASE("breakdown totals") {
  MissionSpec m = table_mission(3, 30);
  BitAllocation a = BitAllocation::zeros(3, 30);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 2e6);
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < 30; ++n) {
      a.uplink_sensor_uav(k, n) = U(rng);
      a.uplink_uav_leo(k, n) = U(rng);
      a.compute_uav(k, n) = U(rng);
      a.compute_leo(k, n) = U(rng);
      a.downlink_leo_uav(k, n) = U(rng);
    }
  const Trajectory t{constant_velocity_path(m)};
  const EnergyBreakdown e = evaluate_energy(a, t, m);
  CHECK(e.report_total == e.objective_total + e.downlink_end);
  CHECK(e.objective_total == doctest::Approx(e.comp_uav.sum() + e.tx_uav_leo.sum() + e.flying.sum()).epsilon(1e-14));
  CHECK(e.total_comp_leo == doctest::Approx(e.comp_leo.sum()));
  CHECK(e.total_tx_sensor_uav == doctest::Approx(e.tx_sensor_uav.sum()));
  CHECK(e.total_tx_leo_uav == doctest::Approx(e.tx_leo_uav.sum()));
  CHECK(e.comp_uav.minCoeff() >= 0);
  CHECK(e.flying.size() == 30);
}
