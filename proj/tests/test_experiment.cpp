#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "doctest.h"
#include "msca/errors.hpp"
#include "msca/experiment.hpp"

using namespace msca;
namespace fs = std::filesystem;

namespace {

// Four sensors on a short leg so runs take a fraction of a second.
const char* kSmall = R"(
sensor_count = 4
beta_pattern = 0, 1
area_km = 4
uav_start_km = 1, 0
uav_end_km = 4, 3
end_user_km = 4, 3
total_time_s = 120
ground_track_start_km = 4, 4
seed = 7
)";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("msca_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const ExperimentConfig c = parse_config("");
  CHECK(c.deployment.sensor_count == 10);
  CHECK(c.mission.bandwidth == 40e6);
  CHECK(c.mission.frame_count == 60);
  CHECK(c.mission.frame_duration == 6.0);
  CHECK(c.scheme == Scheme::Joint);
  CHECK(c.scenario == ScenarioChoice::Auto);
}

TEST_CASE("frame count follows the horizon") {
  CHECK(parse_config("total_time_s = 360\nframe_s = 6").mission.frame_count == 60);
  CHECK(parse_config("total_time_s = 720").mission.frame_count == 120);
  CHECK(error_of("total_time_s = 100\nframe_s = 6").find("multiple") != std::string::npos);
}

TEST_CASE("config errors name the line and key") {
  CHECK(error_of("# comment\nsensor_count = 4\nbogus = 1") == "cfg:3: unknown key 'bogus'");
  CHECK(error_of("seed = 1\nseed = 2").find("cfg:2: duplicate key 'seed'") == 0);
  const std::string bw = error_of("\nbandwidth_hz = -5");
  CHECK(bw.find("cfg:2") == 0);
  CHECK(bw.find("bandwidth_hz") != std::string::npos);
  CHECK(error_of("seed = x").find("cfg:1: seed") == 0);
  CHECK(error_of("no equals sign").find("cfg:1: expected") == 0);
  CHECK(error_of("scheme = fastest").find("scheme") != std::string::npos);
  CHECK(error_of("frame_s = 1e999").find("frame_s") != std::string::npos);
}

TEST_CASE("scenario choices resolve") {
  ExperimentConfig c = parse_config(kSmall);
  const MissionSpec m = materialize(c);
  c.scenario = ScenarioChoice::Intermediate;
  CHECK(resolve_scenario(c, m).last_connected_frame == m.N() / 2);
  c.intermediate_frames = 0;
  CHECK(resolve_scenario(c, m).kind == ScenarioKind::AlwaysOff);
  c.intermediate_frames = m.N();
  CHECK(resolve_scenario(c, m).kind == ScenarioKind::AlwaysOn);
  c.intermediate_frames = m.N() + 1;
  CHECK_THROWS_AS(resolve_scenario(c, m), ConfigError);
  // T = 120 s is well inside the visible window.
  c.scenario = ScenarioChoice::Auto;
  CHECK(resolve_scenario(c, m).kind == ScenarioKind::AlwaysOn);
}

TEST_CASE("random deployment is seeded and fits the budget") {
  const ExperimentConfig c = parse_config(kSmall);
  const MissionSpec a = materialize(c), b = materialize(c);
  REQUIRE(a.K() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(a.sensors[k].position.x == b.sensors[k].position.x);
    CHECK(a.sensors[k].input_bits == b.sensors[k].input_bits);
    CHECK(a.sensors[k].position.x >= 0);
    CHECK(a.sensors[k].position.x <= 4000);
  }
  ExperimentConfig other = c;
  other.seed = 8;
  CHECK(materialize(other).sensors[0].position.x != a.sensors[0].position.x);
}

TEST_CASE("zero load exports a straight flight") {
  const ExperimentConfig c = parse_config(std::string(kSmall) + "input_mbit = 0, 0, 0, 0\nscenario = always_off\n");
  const ResultBundle b = run_experiment(c);
  CHECK(b.result.status == RunStatus::Converged);
  const fs::path dir = scratch_dir("zero");
  export_results(b, dir);
  const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(j["energy_J"]["objective"].get<double>() == j["energy_J"]["flying"].get<double>());
  CHECK(j["energy_J"]["comp_uav"].get<double>() == 0.0);
  CHECK(j["status"] == "converged");
  const auto traj = read_csv(dir / "trajectory.csv");
  REQUIRE(traj.size() == static_cast<size_t>(b.mission.N() + 2));
  // The midpoint of a straight constant-speed leg.
  const auto& mid = traj[1 + b.mission.N() / 2];
  CHECK(std::stod(mid[1]) == doctest::Approx(2.5));
  CHECK(std::stod(mid[2]) == doctest::Approx(1.5));
}

TEST_CASE("exports are deterministic and consistent") {
  const ExperimentConfig c = parse_config(kSmall);
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  export_results(run_experiment(c), a);
  export_results(run_experiment(c), b);
  for (const char* f : {"trajectory.csv", "bits.csv", "energy.csv", "trace.csv", "summary.json"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
  }

  const auto rows = read_csv(a / "energy.csv");
  const auto j = nlohmann::json::parse(slurp(a / "summary.json"));
  REQUIRE(rows.size() > 1);
  for (size_t c = 1; c < rows[0].size(); ++c) {
    double sum = 0;
    for (size_t r = 1; r < rows.size(); ++r) sum += std::stod(rows[r][c]);
    const double want = j["energy_J"][rows[0][c]].get<double>();
    CAPTURE(rows[0][c]);
    CHECK(std::abs(sum - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("numbers are written with ten significant digits") {
  CHECK(format_number(1.0) == "1.000000000e+00");
  CHECK(format_number(-0.0) == "0.000000000e+00");
  CHECK(format_number(226.35e6) == "2.263500000e+08");
}

TEST_CASE("a one-point latency sweep matches a direct run") {
  ExperimentConfig c = parse_config(kSmall);
  const auto cells = fig7_sweep(c, {120});
  REQUIRE(cells.size() == 12);
  c.scenario = ScenarioChoice::AlwaysOn;
  const ResultBundle direct = run_experiment(c);
  CHECK(cells[0].scheme == Scheme::Joint);
  CHECK(cells[0].scenario == "always_on");
  CHECK(cells[0].objective_J == direct.result.energy.objective_total);

  const fs::path dir = scratch_dir("latency");
  fs::create_directories(dir);
  write_latency_table(cells, dir / "latency.csv");
  CHECK(read_csv(dir / "latency.csv").size() == 13);
}

TEST_CASE("data usage grows with LEO access") {
  const ExperimentConfig c = parse_config(kSmall);
  const auto cells = fig8_tradeoff(c, {0, 0.25, 0.5, 0.75, 1});
  REQUIRE(cells.size() == 5);
  CHECK(cells.front().scenario == "always_off");
  CHECK(cells.back().scenario == "always_on");
  for (size_t i = 1; i < cells.size(); ++i) CHECK(cells[i].data_usage_rate >= cells[i - 1].data_usage_rate - 1e-12);
  CHECK(cells.back().data_usage_rate == doctest::Approx(1.0));
  CHECK_THROWS_AS(fig8_tradeoff(c, {1.5}), ConfigError);
}
