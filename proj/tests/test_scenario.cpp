#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "msca/errors.hpp"

using namespace msca;
using msca::testing::table_mission;

TEST_CASE("sensor gain follows the inverse-square law") {
  MissionSpec m = table_mission(1);
  m.sensors[0].position = {0, 0, 0};
  CHECK(sensor_uav_gain(m, 1, {0, 0, 1000}) == doctest::Approx(1.5924e-11).epsilon(1e-4));
  CHECK(sensor_uav_gain(m, 1, {3000, 4000, 1000}) == doctest::Approx(m.reference_gain / 2.6e7).epsilon(1e-14));
  const double g1 = sensor_uav_gain(m, 1, {0, 0, 1000});
  m.uav_altitude = 2000;
  CHECK(g1 / sensor_uav_gain(m, 1, {0, 0, 2000}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(sensor_uav_gain(m, 3, {0, 0, 0}), std::out_of_range);
  // index K + 1 is the end user
  CHECK(sensor_uav_gain(m, 2, m.end_user) == doctest::Approx(m.reference_gain / 1e6));
}

TEST_CASE("UAV-LEO gain at nadir and its scalings") {
  MissionSpec m = table_mission(1, 5);
  m.orbit.ground_track.assign(5, {0, 0, 0});
  const double g = uav_leo_gain(m, 1, {0, 0, 1000});
  CHECK(g == doctest::Approx(10 * m.reference_gain / 3.6e11).epsilon(1e-14));
  CHECK(g == doctest::Approx(4.42e-16).epsilon(2e-3));
  m.orbit.ground_track[1] = {600e3, 0, 0};
  CHECK(g / uav_leo_gain(m, 2, {0, 0, 1000}) == doctest::Approx(2.0).epsilon(1e-14));
  m.orbit.antenna_gain = 1;
  CHECK(g / uav_leo_gain(m, 1, {0, 0, 1000}) == doctest::Approx(10.0).epsilon(1e-14));
  CHECK_THROWS(uav_leo_gain(m, 6, {0, 0, 1000}));
}

TEST_CASE("gains decrease with every squared-distance term") {
  MissionSpec m = table_mission(3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 10000);
  for (int i = 0; i < 200; ++i) {
    const Position3 p{U(rng), U(rng), 1000};
    const Position3 q{p.x + 1 + U(rng) * 0.1, p.y, 1000};
    const double a = sensor_uav_gain(m, 1, p), b = sensor_uav_gain(m, 1, q);
    CHECK(a > 0);
    if (q.x > m.sensors[0].position.x && p.x >= m.sensors[0].position.x) CHECK(b < a);
  }
}

TEST_CASE("coverage angle and visible time") {
  LeoOrbitSpec o;
  CHECK(coverage_angle(o) == doctest::Approx(0.2767).epsilon(1e-3));
  const VisibilityWindow w = visible_time(o, 360, 6);
  CHECK(std::abs(w.visible_time - 514.5) <= 1.0);
  CHECK(w.last_connected_frame == 60);

  LeoOrbitSpec flat = o;
  flat.elevation_angle = 0;
  flat.orbit_height = 1e-6;
  CHECK(coverage_angle(flat) == doctest::Approx(0.0).epsilon(1e-6));
  LeoOrbitSpec far = o;
  far.orbit_height = 1e15;
  CHECK(coverage_angle(far) == doctest::Approx(M_PI / 2 - o.elevation_angle).epsilon(1e-6));

  double prev = 0, prev_t = 0;
  for (double h = 100e3; h <= 2000e3; h += 100e3) {
    LeoOrbitSpec x = o;
    x.orbit_height = h;
    const double g = coverage_angle(x), t = visible_time(x, 1e6, 6).visible_time;
    CHECK(g > prev);
    CHECK(t > prev_t);
    prev = g, prev_t = t;
  }
  LeoOrbitSpec fast = o;
  fast.speed = 1e12;
  CHECK(visible_time(fast, 360, 6).visible_time < 1e-5);

  LeoOrbitSpec over = o;
  over.visible_time_override = 830;
  CHECK(visible_time(over, 360, 6).visible_time == 830);
}

TEST_CASE("scenario classification") {
  MissionSpec m = table_mission(2);
  CHECK(classify_scenario(m, {830, 0, 60}).kind == ScenarioKind::AlwaysOn);
  CHECK(classify_scenario(m, {0, 0, 0}).kind == ScenarioKind::AlwaysOff);
  m.orbit.visible_time_override = 180;
  const Scenario s = classify_scenario(m, visible_time(m));
  CHECK(s.kind == ScenarioKind::IntermediateDisconnected);
  CHECK(s.last_connected_frame == 30);
}

TEST_CASE("access profiles are prefix-monotone") {
  MissionSpec m = table_mission(3);
  const auto on = build_access_profile(Scenario::always_on(60), m);
  CHECK(on.alpha.sum() == 3 * 60);
  CHECK(build_access_profile(Scenario::always_off(), m).alpha.sum() == 0);
  const auto mid = build_access_profile(Scenario::intermediate(30), m);
  for (int k = 0; k < 3; ++k) {
    CHECK(mid.alpha.row(k).head(30).sum() == 30);
    CHECK(mid.alpha.row(k).tail(30).sum() == 0);
    for (int n = 1; n < 60; ++n) CHECK(mid.alpha(k, n) <= mid.alpha(k, n - 1));
  }
}

TEST_CASE("offloading schedule against the UAV capacity") {
  MissionSpec m = table_mission(10);
  m.uav_cpu = 9.75e9;
  CHECK(uav_capacity_bits(m, 1) == doctest::Approx(226.35e6).epsilon(5e-3));
  m.sensors[0].input_bits = 300e6;
  m.sensors[1].input_bits = 0;
  const auto on = build_access_profile(Scenario::always_on(60), m);
  auto beta = schedule_offloading(m, on).beta;
  CHECK(beta(0) == 1);
  CHECK(beta(1) == 0);
  CHECK(schedule_offloading(m, build_access_profile(Scenario::always_off(), m)).beta.sum() == 0);

  m.uav_cpu = 19.5e9;
  CHECK(uav_capacity_bits(m, 1) == doctest::Approx(452.7e6).epsilon(1e-3));
  m.sensors[0].input_bits = 400e6;
  CHECK(schedule_offloading(m, on).beta(0) == 0);

  int last = 0;
  for (double load = 0; load < 1e9; load += 2.5e7) {
    m.sensors[0].input_bits = load;
    const int b = schedule_offloading(m, on).beta(0);
    CHECK(b >= last);
    last = b;
  }
}

TEST_CASE("constant-velocity path") {
  MissionSpec m = table_mission(1);
  const auto p = constant_velocity_path(m);
  REQUIRE(p.size() == 61);
  CHECK(p[30].x == doctest::Approx(7500));
  CHECK(p[30].y == doctest::Approx(2500));
  CHECK(p.front() == Position3{5000, 0, 1000});
  CHECK(p.back() == Position3{10000, 5000, 1000});
  const double speed = std::hypot(p[1].x - p[0].x, p[1].y - p[0].y) / 6;
  CHECK(speed == doctest::Approx(19.64).epsilon(1e-3));

  m.uav_end = m.uav_start;
  for (const auto& q : constant_velocity_path(m)) CHECK(q == m.uav_start);
  m.uav_end = {5000 + 60 * 6 * 51.0, 0, 1000};
  CHECK_THROWS_AS(constant_velocity_path(m), InfeasibleInstance);
}

TEST_CASE("LEO positions follow the ground track") {
  MissionSpec m = table_mission(1);
  const double vg = projected_ground_speed(m.orbit);
  m.orbit.ground_track = straight_ground_track({10000, 10000, 0}, -0.75 * M_PI, vg, 60, 6);
  const Position3 a = leo_position_at(m, 1), b = leo_position_at(m, 2);
  CHECK(a.x == 10000);
  CHECK(a.z == doctest::Approx(601e3));
  CHECK(b.x == doctest::Approx(10000 - vg * 6 * std::sqrt(0.5)));
  CHECK(b.y == doctest::Approx(10000 - vg * 6 * std::sqrt(0.5)));
  double length = 0;
  for (int n = 1; n < 60; ++n) {
    const Position3 p = leo_position_at(m, n), q = leo_position_at(m, n + 1);
    length += std::hypot(q.x - p.x, q.y - p.y);
  }
  CHECK(length + vg * 6 == doctest::Approx(vg * 360).epsilon(1e-12));
  CHECK_THROWS(leo_position_at(m, 61));
}

TEST_CASE("mission validation names the field") {
  MissionSpec m = table_mission(2);
  CHECK_NOTHROW(m.validate());
  m.bandwidth = -1;
  try {
    m.validate();
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("bandwidth") != std::string::npos);
  }
  MissionSpec short_mission = table_mission(2, 2);
  CHECK_THROWS(short_mission.validate());
}
