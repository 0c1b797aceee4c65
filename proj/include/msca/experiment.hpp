#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msca/baselines.hpp"

namespace msca {

enum class ScenarioChoice { Auto, AlwaysOn, AlwaysOff, Intermediate };

// Sensor layout and loads. Random layouts are uniform in [0, area]^2 and redrawn per
// sensor until its load fits the energy budget along the constant-velocity path.
struct DeploymentSpec {
  bool random = true;
  int sensor_count = 10;
  double area_km = 10.0;
  std::vector<int> beta_pattern = {0, 0, 0, 1, 1, 1, 0, 1, 0, 0};
  // Random loads as fractions of the UAV capacity at the configured horizon.
  double uav_load_min = 0.5, uav_load_max = 0.95;
  double leo_load_min = 1.05, leo_load_max = 1.5;
  double budget_margin = 0.8;  // load <= margin * budget-limited upload over N - 4 frames
  int max_redraws = 1000;
  std::vector<Position3> positions_km;  // explicit layout
  std::vector<double> input_mbit;       // explicit loads; overrides random loads
};

struct ExperimentConfig {
  MissionSpec mission;  // sensors and ground track are filled by materialize()
  DeploymentSpec deployment;
  SensorSpec sensor_defaults;  // radio/compute constants shared by every sensor
  double noise_dbm_per_hz = -174.0;
  double ref_snr_db = 80.0;  // g_0 = SNR_ref * N_0 * B
  Position3 ground_track_start_km{10.0, 10.0, 0.0};
  double ground_track_heading_deg = -135.0;
  std::optional<double> ground_track_speed;  // m/s; default projected v_s
  Scheme scheme = Scheme::Joint;
  ScenarioChoice scenario = ScenarioChoice::Auto;
  int intermediate_frames = -1;  // N_t; -1 means N / 2
  std::uint64_t seed = 1;
  DriverOptions driver;
  std::string output_dir = "out";
};

// Flat "key = value" text; '#' starts a comment. Unknown keys, malformed values and
// invalid missions raise ConfigError with the line number and key.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");
ExperimentConfig load_config(const std::filesystem::path& path);

// Mission with sensors and ground track for the configured horizon.
MissionSpec materialize(const ExperimentConfig& config);
// Same sensors and loads over a different horizon (N = T / Delta).
MissionSpec with_horizon(const MissionSpec& mission, const ExperimentConfig& config, double total_time);
Scenario resolve_scenario(const ExperimentConfig& config, const MissionSpec& mission);

struct ResultBundle {
  MissionSpec mission;
  Scheme scheme = Scheme::Joint;
  Scenario scenario;
  std::uint64_t seed = 0;
  RunResult result;
  double runtime_s = 0;  // not exported with the deterministic outputs
};

ResultBundle run_experiment(const ExperimentConfig& config);
ResultBundle run_experiment(const ExperimentConfig& config, const MissionSpec& mission, const Scenario& scenario);

// trajectory.csv, bits.csv, energy.csv, trace.csv and summary.json.
void export_results(const ResultBundle& bundle, const std::filesystem::path& directory);

struct LatencyCell {
  Scheme scheme;
  std::string scenario;
  double total_time = 0;
  double total_energy_J = 0;
  double objective_J = 0;
  std::string status;
};

// Four schemes x {always_on, always_off, intermediate(N/2)} per horizon.
std::vector<LatencyCell> fig7_sweep(const ExperimentConfig& config, const std::vector<double>& horizons);
void write_latency_table(const std::vector<LatencyCell>& cells, const std::filesystem::path& file);

struct AccessCell {
  double fraction = 0;
  int last_connected_frame = 0;
  std::string scenario;
  double total_energy_J = 0;
  double objective_J = 0;
  double data_usage_rate = 0;
  std::string status;
};

// N_t = round(fraction N); 0 maps to always-off and N to always-on.
std::vector<AccessCell> fig8_tradeoff(const ExperimentConfig& config, const std::vector<double>& fractions);
void write_access_table(const std::vector<AccessCell>& cells, const std::filesystem::path& file);

// Scientific text with 10 significant digits, the format of every exported number.
std::string format_number(double v);

}  // namespace msca
