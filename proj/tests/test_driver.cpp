#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "grid_oracle.hpp"
#include "msca/driver.hpp"
#include "msca/errors.hpp"

using namespace msca;
using msca::testing::rel_diff;
using msca::testing::table_mission;

namespace {

MissionSpec short_mission(int K, int N, double load) {
  MissionSpec m = table_mission(K, N, load);
  m.uav_end = {6000, 1000, 1000};
  for (auto& s : m.sensors) s.position = {5500, 500, 0};
  return m;
}

double max_offset(const Trajectory& a, const std::vector<Position3>& b) {
  double d = 0;
  for (size_t i = 0; i < b.size(); ++i) d = std::max(d, std::hypot(a.waypoints[i].x - b[i].x, a.waypoints[i].y - b[i].y));
  return d;
}

double min_distance(const std::vector<Position3>& w, const Position3& c) {
  double d = INFINITY;
  for (const auto& p : w) d = std::min(d, std::hypot(p.x - c.x, p.y - c.y));
  return d;
}

}  // namespace

TEST_CASE("zero load flies the straight segment") {
  const MissionSpec m = table_mission(10, 60, 0.0);
  const RunResult r = run(m, Scenario::always_on(60));
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.iterations == 1);
  CHECK(max_offset(r.z.path, constant_velocity_path(m)) < 1e-6);
  CHECK(r.energy.objective_total == doctest::Approx(r.energy.total_flying).epsilon(1e-12));
  const Trajectory straight{constant_velocity_path(m)};
  CHECK(rel_diff(r.energy.total_flying, evaluate_energy(r.z.bits, straight, m).total_flying) < 1e-12);
}

TEST_CASE("initialization splits a UAV-computing load equally") {
  const MissionSpec m = short_mission(1, 6, 24e6);
  const ScenarioPlan plan = make_plan(m, Scenario::always_off());
  const DecisionVector z = feasible_initialization(m, plan);
  for (int n = 1; n <= 4; ++n) CHECK(z.bits.uplink_sensor_uav(0, n - 1) == doctest::Approx(6e6).epsilon(1e-12));
  CHECK(z.bits.uplink_sensor_uav(0, 4) == 0.0);
  CHECK(check_feasibility(z, plan, m).max_violation <= 1e-8);
}

TEST_CASE("initialization respects a tight budget") {
  MissionSpec m = short_mission(1, 6, 0.0);
  m.energy_budget *= 1e-3;
  const Trajectory straight{constant_velocity_path(m)};
  const Eigen::MatrixXd caps = uplink_caps(m, straight);
  // Slightly under the budget-limited total over the uplink window.
  m.sensors[0].input_bits = 0.999 * caps.row(0).head(4).sum();
  REQUIRE(m.sensors[0].input_bits < uav_capacity_bits(m, 1));
  const ScenarioPlan plan = make_plan(m, Scenario::always_off());
  const DecisionVector z = feasible_initialization(m, plan);
  CHECK(check_feasibility(z, plan, m).max_violation <= 1e-8);
  double tight = 0;
  for (int n = 0; n < 4; ++n) tight = std::max(tight, z.bits.uplink_sensor_uav(0, n) / caps(0, n));
  CHECK(tight > 0.99);
  CHECK(tight <= 1.0);
}

TEST_CASE("initialization detours when the straight path cannot carry the load") {
  MissionSpec m = table_mission(3, 60, 0.0);
  const Position3 cluster{1000, 8000, 0};
  for (int k = 0; k < 3; ++k) m.sensors[k].position = {cluster.x + 300.0 * (k - 1), cluster.y + 200.0 * (k % 2), 0};
  const Trajectory straight{constant_velocity_path(m)};
  const Eigen::MatrixXd caps = uplink_caps(m, straight);
  for (int k = 0; k < 3; ++k) m.sensors[k].input_bits = 1.2 * caps.row(k).head(58).sum();
  const ScenarioPlan plan = make_plan(m, Scenario::always_on(60));
  DecisionVector z;
  REQUIRE_NOTHROW(z = feasible_initialization(m, plan));
  CHECK(check_feasibility(z, plan, m).max_violation <= 1e-8);
  CHECK(min_distance(z.path.waypoints, cluster) < min_distance(straight.waypoints, cluster));
}

TEST_CASE("step size blends the surrogate minimizer") {
  const MissionSpec m = short_mission(2, 8, 8e6);
  const ScenarioPlan plan = make_plan(m, Scenario::always_off());
  const DecisionVector z = feasible_initialization(m, plan);
  DriverOptions full;
  full.gamma0 = 1.0, full.delta = 0.0;
  DriverOptions half = full;
  half.gamma0 = 0.5;
  const StepResult a = sca_step(z, 0, m, plan, full);
  const StepResult b = sca_step(z, 0, m, plan, half);
  CHECK(a.row.gamma == 1.0);
  CHECK(b.row.gamma == 0.5);
  for (int n = 0; n <= 8; ++n) {
    CHECK(b.next.path.waypoints[n].x == doctest::Approx(0.5 * (z.path.waypoints[n].x + a.next.path.waypoints[n].x)));
    CHECK(b.next.path.waypoints[n].y ==
          doctest::Approx(0.5 * (z.path.waypoints[n].y + a.next.path.waypoints[n].y)).epsilon(1e-9));
  }
  for (int k = 0; k < 2; ++k)
    for (int n = 0; n < 8; ++n) {
      const double mid = 0.5 * (z.bits.uplink_sensor_uav(k, n) + a.next.bits.uplink_sensor_uav(k, n));
      CHECK(std::abs(b.next.bits.uplink_sensor_uav(k, n) - mid) < 1e-3);
    }
}

TEST_CASE("gamma schedule") {
  DriverOptions o;
  CHECK(o.gamma(0) == 1.0);
  CHECK(o.gamma(10) == doctest::Approx(0.5));
  o.delta = -1;
  CHECK_THROWS(o.validate());
}

TEST_CASE("every iterate is feasible and the run stops on the residual") {
  MissionSpec m = table_mission(4, 20, 0.0);
  m.uav_end = {8000, 2000, 1000};
  const double cap = uav_capacity_bits(m, 1);
  for (int k = 0; k < 4; ++k) {
    m.sensors[k].position = {5000.0 + 800 * k, 1500.0 - 300 * k, 0};
    m.sensors[k].input_bits = (k % 2 ? 1.2 : 0.6) * cap;
  }
  m.orbit.ground_track = straight_ground_track({10000, 10000, 0}, -0.75 * M_PI, 39.3, 20, m.frame_duration);
  const DriverOptions opt;
  const RunResult r = run(m, Scenario::always_on(20), opt);
  REQUIRE(r.status == RunStatus::Converged);
  for (const auto& row : r.trace.rows) CHECK(row.max_violation <= 1e-8);
  CHECK(r.trace.rows.back().residual <= opt.stationarity_tol);
  CHECK(r.iterations <= opt.max_outer_iterations);
  CHECK(check_feasibility(r.z, r.plan, m).max_violation <= 1e-8);

  CHECK(r.energy.objective_total <= r.trace.rows.front().objective_J);

  // Cut short, the run returns the best feasible iterate seen.
  DriverOptions short_opt;
  short_opt.max_outer_iterations = 3;
  const RunResult cut = run(m, Scenario::always_on(20), short_opt);
  if (cut.status == RunStatus::IterationLimit) {
    double best = INFINITY;
    for (const auto& row : cut.trace.rows)
      if (row.max_violation <= 1e-8) best = std::min(best, row.objective_J);
    CHECK(cut.energy.objective_total == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("flying-only problem converges in two steps with unit step size") {
  const MissionSpec m = short_mission(2, 12, 0.0);
  const ScenarioPlan plan = make_plan(m, Scenario::always_off());
  DecisionVector z = feasible_initialization(m, plan);
  for (int n = 1; n < 12; ++n) z.path.waypoints[n].y += 150.0 * std::sin(n);
  DriverOptions o;
  o.gamma0 = 1.0, o.delta = 0.0;
  const RunResult r = run_from(m, plan, z, o);
  CHECK(r.status == RunStatus::Converged);
  CHECK(r.iterations <= 2);
  CHECK(max_offset(r.z.path, constant_velocity_path(m)) < 1e-6);
}

TEST_CASE("toy missions match the grid oracle") {
  for (const auto& [x, y, load] : std::vector<std::tuple<double, double, double>>{{0.3, 1.5, 280}, {0.3, 0.2, 200}}) {
    const MissionSpec m = testing::toy_mission(x, y, load);
    const RunResult r = run(m, Scenario::always_off());
    REQUIRE(r.status == RunStatus::Converged);
    const testing::GridOptimum g = testing::grid_search_toy(m, testing::toy_grid());
    CHECK(r.energy.objective_total <= g.objective * 1.05);
    CHECK(r.energy.objective_total >= g.objective * 0.95);
  }
}

TEST_CASE("infeasible loads are reported") {
  MissionSpec m = short_mission(1, 6, 0.0);
  m.sensors[0].position = {40000, 40000, 0};
  m.sensors[0].input_bits = 1e9;
  const ScenarioPlan plan = make_plan(m, Scenario::always_off());
  CHECK_THROWS_AS(feasible_initialization(m, plan), InfeasibleInstance);
}
