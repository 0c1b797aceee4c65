#include "msca/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "msca/errors.hpp"

namespace msca {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw std::invalid_argument("'" + s + "' is not a finite number");
  return v;
}

long long to_integer(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw std::invalid_argument("'" + s + "' is not an integer");
  return static_cast<long long>(v);
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  if (s.empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(to_double(item));
  return out;
}

Position3 to_point(const std::string& s) {
  const auto v = to_list(s);
  if (v.size() != 2) throw std::invalid_argument("expected 'x, y'");
  return {v[0], v[1], 0.0};
}

std::pair<double, double> to_range(const std::string& s) {
  const auto r = to_list(s);
  if (r.size() != 2 || r[0] < 0 || r[1] < r[0]) throw std::invalid_argument("expected 'min, max' with 0 <= min <= max");
  return {r[0], r[1]};
}

// Uniform in [0, 1) from the top 53 bits, identical on every platform.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform(rng); }

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

Setter number(std::function<void(ExperimentConfig&, double)> f) {
  return [f](ExperimentConfig& c, const std::string& v) { f(c, to_double(v)); };
}

Setter positive(std::function<void(ExperimentConfig&, double)> f) {
  return [f](ExperimentConfig& c, const std::string& v) {
    const double x = to_double(v);
    if (!(x > 0)) throw std::invalid_argument("must be positive, got " + v);
    f(c, x);
  };
}

Setter horizontal_km(Position3 MissionSpec::*field) {
  return [field](ExperimentConfig& c, const std::string& v) {
    const Position3 p = to_point(v);
    (c.mission.*field).x = p.x * 1e3;
    (c.mission.*field).y = p.y * 1e3;
  };
}

ScenarioChoice parse_scenario_choice(const std::string& v, int& frames) {
  if (v == "auto") return ScenarioChoice::Auto;
  if (v == "always_on") return ScenarioChoice::AlwaysOn;
  if (v == "always_off") return ScenarioChoice::AlwaysOff;
  if (v == "intermediate") return ScenarioChoice::Intermediate;
  if (v.rfind("intermediate:", 0) == 0) {
    frames = static_cast<int>(to_integer(v.substr(13)));
    return ScenarioChoice::Intermediate;
  }
  throw std::invalid_argument("expected auto, always_on, always_off, intermediate or intermediate:N_t");
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"sensor_count", [](ExperimentConfig& c, const std::string& v) {
         c.deployment.sensor_count = static_cast<int>(to_integer(v));
         if (c.deployment.sensor_count < 1) throw std::invalid_argument("must be >= 1");
       }},
      {"deployment", [](ExperimentConfig& c, const std::string& v) {
         if (v != "random" && v != "explicit") throw std::invalid_argument("expected random or explicit");
         c.deployment.random = v == "random";
       }},
      {"area_km", number([](ExperimentConfig& c, double v) {
         if (v <= 0) throw std::invalid_argument("must be positive");
         c.deployment.area_km = v;
       })},
      {"beta_pattern", [](ExperimentConfig& c, const std::string& v) {
         c.deployment.beta_pattern.clear();
         for (double b : to_list(v)) {
           if (b != 0 && b != 1) throw std::invalid_argument("entries must be 0 or 1");
           c.deployment.beta_pattern.push_back(static_cast<int>(b));
         }
         if (c.deployment.beta_pattern.empty()) throw std::invalid_argument("must not be empty");
       }},
      {"uav_load_range", [](ExperimentConfig& c, const std::string& v) {
         std::tie(c.deployment.uav_load_min, c.deployment.uav_load_max) = to_range(v);
       }},
      {"leo_load_range", [](ExperimentConfig& c, const std::string& v) {
         std::tie(c.deployment.leo_load_min, c.deployment.leo_load_max) = to_range(v);
       }},
      {"budget_margin", number([](ExperimentConfig& c, double v) {
         if (v <= 0) throw std::invalid_argument("must be positive");
         c.deployment.budget_margin = v;
       })},
      {"max_redraws", [](ExperimentConfig& c, const std::string& v) {
         c.deployment.max_redraws = static_cast<int>(to_integer(v));
         if (c.deployment.max_redraws < 1) throw std::invalid_argument("must be >= 1");
       }},
      {"sensor_positions_km", [](ExperimentConfig& c, const std::string& v) {
         c.deployment.positions_km.clear();
         for (const auto& p : split(v, ';'))
           if (!p.empty()) c.deployment.positions_km.push_back(to_point(p));
       }},
      {"input_mbit", [](ExperimentConfig& c, const std::string& v) {
         c.deployment.input_mbit = to_list(v);
         for (double b : c.deployment.input_mbit)
           if (b < 0) throw std::invalid_argument("loads must be >= 0");
       }},
      {"uav_start_km", horizontal_km(&MissionSpec::uav_start)},
      {"uav_end_km", horizontal_km(&MissionSpec::uav_end)},
      {"end_user_km", horizontal_km(&MissionSpec::end_user)},
      {"uav_altitude_m", positive([](ExperimentConfig& c, double v) { c.mission.uav_altitude = v; })},
      {"total_time_s", positive([](ExperimentConfig& c, double v) { c.mission.total_time = v; })},
      {"frame_s", positive([](ExperimentConfig& c, double v) { c.mission.frame_duration = v; })},
      {"bandwidth_hz", positive([](ExperimentConfig& c, double v) { c.mission.bandwidth = v; })},
      {"noise_dbm_per_hz", number([](ExperimentConfig& c, double v) { c.noise_dbm_per_hz = v; })},
      {"ref_snr_db", number([](ExperimentConfig& c, double v) { c.ref_snr_db = v; })},
      {"energy_budget_j", positive([](ExperimentConfig& c, double v) { c.mission.energy_budget = v; })},
      {"uav_mass_kg", positive([](ExperimentConfig& c, double v) { c.mission.uav_mass = v; })},
      {"v_max_mps", positive([](ExperimentConfig& c, double v) { c.mission.v_max = v; })},
      {"uav_cpu_hz", positive([](ExperimentConfig& c, double v) { c.mission.uav_cpu = v; })},
      {"leo_cpu_hz", positive([](ExperimentConfig& c, double v) { c.mission.leo_cpu = v; })},
      {"switched_capacitance_uav", positive([](ExperimentConfig& c, double v) { c.mission.gamma_uav = v; })},
      {"switched_capacitance_leo", positive([](ExperimentConfig& c, double v) { c.mission.gamma_leo = v; })},
      {"cycles_per_bit_uav", positive([](ExperimentConfig& c, double v) { c.sensor_defaults.cycles_per_bit_uav = v; })},
      {"cycles_per_bit_leo", positive([](ExperimentConfig& c, double v) { c.sensor_defaults.cycles_per_bit_leo = v; })},
      {"output_ratio_uav", number([](ExperimentConfig& c, double v) { c.sensor_defaults.output_ratio_uav = v; })},
      {"output_ratio_leo", number([](ExperimentConfig& c, double v) { c.sensor_defaults.output_ratio_leo = v; })},
      {"leo_speed_mps", positive([](ExperimentConfig& c, double v) { c.mission.orbit.speed = v; })},
      {"orbit_height_m", positive([](ExperimentConfig& c, double v) { c.mission.orbit.orbit_height = v; })},
      {"elevation_deg", number([](ExperimentConfig& c, double v) { c.mission.orbit.elevation_angle = v * kPi / 180; })},
      {"earth_radius_m", positive([](ExperimentConfig& c, double v) { c.mission.orbit.earth_radius = v; })},
      {"leo_altitude_m", positive([](ExperimentConfig& c, double v) { c.mission.orbit.altitude_above_uav = v; })},
      {"antenna_gain_db", number([](ExperimentConfig& c, double v) { c.mission.orbit.antenna_gain = std::pow(10.0, v / 10); })},
      {"visible_time_override_s", positive([](ExperimentConfig& c, double v) { c.mission.orbit.visible_time_override = v; })},
      {"ground_track_start_km", [](ExperimentConfig& c, const std::string& v) { c.ground_track_start_km = to_point(v); }},
      {"ground_track_heading_deg", number([](ExperimentConfig& c, double v) { c.ground_track_heading_deg = v; })},
      {"ground_track_speed_mps", number([](ExperimentConfig& c, double v) {
         if (v < 0) throw std::invalid_argument("must be >= 0");
         c.ground_track_speed = v;
       })},
      {"scheme", [](ExperimentConfig& c, const std::string& v) { c.scheme = parse_scheme(v); }},
      {"scenario", [](ExperimentConfig& c, const std::string& v) {
         c.scenario = parse_scenario_choice(v, c.intermediate_frames);
       }},
      {"intermediate_frames", [](ExperimentConfig& c, const std::string& v) {
         c.intermediate_frames = static_cast<int>(to_integer(v));
       }},
      {"seed", [](ExperimentConfig& c, const std::string& v) {
         std::size_t used = 0;
         if (v.empty() || v[0] == '-') throw std::invalid_argument("expected an unsigned integer");
         c.seed = std::stoull(v, &used);
         if (used != v.size()) throw std::invalid_argument("expected an unsigned integer");
       }},
      {"stationarity_tol", positive([](ExperimentConfig& c, double v) { c.driver.stationarity_tol = v; })},
      {"max_outer_iterations", [](ExperimentConfig& c, const std::string& v) {
         c.driver.max_outer_iterations = static_cast<int>(to_integer(v));
       }},
      {"step_gamma0", number([](ExperimentConfig& c, double v) { c.driver.gamma0 = v; })},
      {"step_delta", number([](ExperimentConfig& c, double v) { c.driver.delta = v; })},
      {"tau_uplink_uav_leo", number([](ExperimentConfig& c, double v) { c.driver.surrogate.tau_uplink_uav_leo = v; })},
      {"tau_position", number([](ExperimentConfig& c, double v) { c.driver.surrogate.tau_position = v; })},
      {"tau_compute", number([](ExperimentConfig& c, double v) { c.driver.surrogate.tau_compute = v; })},
      {"tau_auxiliary", number([](ExperimentConfig& c, double v) { c.driver.surrogate.tau_auxiliary = v; })},
      {"inner_kkt_tol", number([](ExperimentConfig& c, double v) { c.driver.inner.kkt_tolerance = v; })},
      {"inner_max_iterations", [](ExperimentConfig& c, const std::string& v) {
         c.driver.inner.max_iterations = static_cast<int>(to_integer(v));
       }},
      {"output_dir", [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  return table;
}

int frames_for(double total_time, double frame_duration) {
  if (!(total_time > 0) || !(frame_duration > 0))
    throw ConfigError("total_time_s and frame_s must be positive");
  const double ratio = total_time / frame_duration;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * ratio)
    throw ConfigError("total_time_s = " + format_number(total_time) + " is not a multiple of frame_s = " +
                      format_number(frame_duration));
  return static_cast<int>(n);
}

std::vector<Position3> ground_track(const ExperimentConfig& c, const MissionSpec& m) {
  const double speed = c.ground_track_speed ? *c.ground_track_speed : projected_ground_speed(m.orbit);
  const Position3 start{c.ground_track_start_km.x * 1e3, c.ground_track_start_km.y * 1e3, 0.0};
  return straight_ground_track(start, c.ground_track_heading_deg * kPi / 180, speed, m.N(), m.frame_duration);
}

void validate_mission(const MissionSpec& m) {
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid mission: ") + e.what());
  }
}

// Bits sensor k can push to the UAV over the first N - 4 frames at full budget.
double budget_limited_upload(const MissionSpec& m, int k, const std::vector<Position3>& path) {
  const double slot = m.slot_bandwidth_time();
  double total = 0;
  for (int n = 0; n < m.N() - 4; ++n) {
    const double g = sensor_uav_gain(m, k + 1, path[n]);
    total += slot * std::log2(1.0 + m.energy_budget * g / (m.noise_density * slot));
  }
  return total;
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + file.string());
}

double rounded(double v) { return std::stod(format_number(v)); }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  cfg.mission.uav_start = {5000.0, 0.0, 1000.0};
  cfg.mission.uav_end = {10000.0, 5000.0, 1000.0};
  cfg.mission.end_user = {10000.0, 5000.0, 0.0};

  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  for (int number = 1; std::getline(in, line); ++number) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(number);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + ": unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + key + ": " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + key + ": " + e.what());
    }
  }

  MissionSpec& m = cfg.mission;
  m.frame_count = frames_for(m.total_time, m.frame_duration);
  m.uav_start.z = m.uav_end.z = m.uav_altitude;
  m.noise_density = dbm_per_hz_to_w_per_hz(cfg.noise_dbm_per_hz);
  m.reference_gain = reference_gain_from_snr(cfg.ref_snr_db, m.noise_density, m.bandwidth);

  const DeploymentSpec& d = cfg.deployment;
  const auto K = static_cast<std::size_t>(d.sensor_count);
  if (!d.random && d.positions_km.size() != K)
    throw ConfigError(source + ": sensor_positions_km: explicit deployment needs " + std::to_string(K) + " positions");
  if (!d.positions_km.empty() && d.positions_km.size() != K)
    throw ConfigError(source + ": sensor_positions_km: expected " + std::to_string(K) + " positions");
  if (!d.input_mbit.empty() && d.input_mbit.size() != K)
    throw ConfigError(source + ": input_mbit: expected " + std::to_string(K) + " loads");
  try {
    cfg.driver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }

  // Field checks on a one-sensor stand-in; the real sensors come from materialize().
  MissionSpec probe = m;
  probe.sensors.assign(1, cfg.sensor_defaults);
  probe.orbit.ground_track.assign(m.N(), Position3{});
  validate_mission(probe);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

MissionSpec materialize(const ExperimentConfig& cfg) {
  const DeploymentSpec& d = cfg.deployment;
  MissionSpec m = cfg.mission;
  const int K = d.sensor_count;
  m.sensors.assign(K, cfg.sensor_defaults);
  m.orbit.ground_track = ground_track(cfg, m);
  const std::vector<Position3> straight = constant_velocity_path(m);

  std::mt19937_64 rng(cfg.seed);
  for (int k = 0; k < K; ++k) {
    SensorSpec& s = m.sensors[k];
    if (!d.input_mbit.empty()) {
      s.input_bits = d.input_mbit[k] * 1e6;
    } else {
      const bool leo = d.beta_pattern[k % d.beta_pattern.size()] == 1;
      const double f = leo ? uniform(rng, d.leo_load_min, d.leo_load_max) : uniform(rng, d.uav_load_min, d.uav_load_max);
      s.input_bits = f * uav_capacity_bits(m, k + 1);
    }
    if (!d.positions_km.empty()) {
      s.position = {d.positions_km[k].x * 1e3, d.positions_km[k].y * 1e3, 0.0};
      continue;
    }
    const double side = d.area_km * 1e3;
    bool placed = false;
    for (int attempt = 0; attempt < d.max_redraws && !placed; ++attempt) {
      const double x = uniform(rng, 0, side);
      const double y = uniform(rng, 0, side);
      s.position = {x, y, 0.0};
      placed = s.input_bits <= d.budget_margin * budget_limited_upload(m, k, straight);
    }
    if (!placed)
      throw InfeasibleInstance("sensor " + std::to_string(k + 1) + " load cannot be uploaded within the energy budget after " +
                               std::to_string(d.max_redraws) + " placements");
  }
  validate_mission(m);
  return m;
}

MissionSpec with_horizon(const MissionSpec& mission, const ExperimentConfig& cfg, double total_time) {
  MissionSpec m = mission;
  m.total_time = total_time;
  m.frame_count = frames_for(total_time, m.frame_duration);
  m.orbit.ground_track = ground_track(cfg, m);
  validate_mission(m);
  return m;
}

Scenario resolve_scenario(const ExperimentConfig& cfg, const MissionSpec& m) {
  const int N = m.N();
  switch (cfg.scenario) {
    case ScenarioChoice::Auto: return classify_scenario(m, visible_time(m));
    case ScenarioChoice::AlwaysOn: return Scenario::always_on(N);
    case ScenarioChoice::AlwaysOff: return Scenario::always_off();
    case ScenarioChoice::Intermediate: {
      const int nt = cfg.intermediate_frames < 0 ? N / 2 : cfg.intermediate_frames;
      if (nt > N) throw ConfigError("intermediate_frames = " + std::to_string(nt) + " exceeds N = " + std::to_string(N));
      if (nt == 0) return Scenario::always_off();
      if (nt == N) return Scenario::always_on(N);
      return Scenario::intermediate(nt);
    }
  }
  throw std::logic_error("unknown scenario choice");
}

ResultBundle run_experiment(const ExperimentConfig& cfg, const MissionSpec& mission, const Scenario& scenario) {
  ResultBundle b;
  b.mission = mission;
  b.scheme = cfg.scheme;
  b.scenario = scenario;
  b.seed = cfg.seed;
  const auto t0 = std::chrono::steady_clock::now();
  b.result = run_scheme(cfg.scheme, mission, scenario, cfg.driver);
  b.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return b;
}

ResultBundle run_experiment(const ExperimentConfig& cfg) {
  const MissionSpec m = materialize(cfg);
  return run_experiment(cfg, m, resolve_scenario(cfg, m));
}

void export_results(const ResultBundle& b, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  const MissionSpec& m = b.mission;
  const RunResult& r = b.result;
  const int K = m.K(), N = m.N();

  {
    const auto file = dir / "trajectory.csv";
    auto out = open_output(file);
    out << "n,x_km,y_km\n";
    for (int n = 0; n <= N; ++n) {
      const Position3& q = r.z.path.waypoints[n];
      out << n + 1 << ',' << format_number(q.x / 1e3) << ',' << format_number(q.y / 1e3) << '\n';
    }
    finish(out, file);
  }
  {
    const auto file = dir / "bits.csv";
    auto out = open_output(file);
    out << "k,n,L_IU,L_UL,l_L,L_LU,l_U\n";
    const BitAllocation& a = r.z.bits;
    for (int k = 0; k < K; ++k)
      for (int n = 0; n < N; ++n)
        out << k + 1 << ',' << n + 1 << ',' << format_number(a.uplink_sensor_uav(k, n) / 1e6) << ','
            << format_number(a.uplink_uav_leo(k, n) / 1e6) << ',' << format_number(a.compute_leo(k, n) / 1e6) << ','
            << format_number(a.downlink_leo_uav(k, n) / 1e6) << ',' << format_number(a.compute_uav(k, n) / 1e6) << '\n';
    finish(out, file);
  }

  // Per-frame sums over sensors; the end-user downlink is charged to the last frame.
  const EnergyBreakdown& e = r.energy;
  const std::vector<std::string> names = {"comp_uav", "comp_leo", "tx_sensor_uav", "tx_uav_leo",
                                          "tx_leo_uav", "flying", "tx_uav_end"};
  std::vector<double> sums(names.size(), 0.0);
  double objective = 0, total = 0;
  {
    const auto file = dir / "energy.csv";
    auto out = open_output(file);
    out << 'n';
    for (const auto& name : names) out << ',' << name;
    out << ",objective,total\n";
    for (int n = 0; n < N; ++n) {
      const std::vector<double> row = {e.comp_uav.col(n).sum(),      e.comp_leo.col(n).sum(),
                                       e.tx_sensor_uav.col(n).sum(), e.tx_uav_leo.col(n).sum(),
                                       e.tx_leo_uav.col(n).sum(),    e.flying(n),
                                       n == N - 1 ? e.downlink_end : 0.0};
      out << n + 1;
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << ',' << format_number(row[c]);
        sums[c] += rounded(row[c]);
      }
      const double obj = row[0] + row[3] + row[5];
      out << ',' << format_number(obj) << ',' << format_number(obj + row[6]) << '\n';
      objective += rounded(obj);
      total += rounded(obj + row[6]);
    }
    finish(out, file);
  }
  {
    const auto file = dir / "trace.csv";
    auto out = open_output(file);
    out << "v,objective_J,residual,gamma,inner_status,max_violation\n";
    for (const TraceRow& t : r.trace.rows)
      out << t.v << ',' << format_number(t.objective_J) << ',' << format_number(t.residual) << ','
          << format_number(t.gamma) << ',' << to_string(t.inner_status) << ',' << format_number(t.max_violation)
          << '\n';
    finish(out, file);
  }
  {
    // Totals are sums of the exported per-frame values so the files agree exactly.
    nlohmann::json totals;
    for (std::size_t c = 0; c < names.size(); ++c) totals[names[c]] = rounded(sums[c]);
    totals["objective"] = rounded(objective);
    totals["total"] = rounded(total);
    nlohmann::json j;
    j["scheme"] = to_string(b.scheme);
    j["scenario"] = to_string(b.scenario);
    j["seed"] = b.seed;
    j["status"] = to_string(r.status);
    j["iterations"] = r.iterations;
    j["message"] = r.message;
    j["sensors"] = K;
    j["frames"] = N;
    j["total_time_s"] = rounded(m.total_time);
    j["frame_s"] = rounded(m.frame_duration);
    j["energy_J"] = totals;
    j["data_usage_rate"] = rounded(r.plan.data_usage_rate());
    j["downlink_end_mbit"] = rounded(e.downlink_end_bits / 1e6);
    if (!r.trace.rows.empty()) {
      j["final_residual"] = rounded(r.trace.rows.back().residual);
      j["max_violation"] = rounded(r.trace.rows.back().max_violation);
    }
    const auto file = dir / "summary.json";
    auto out = open_output(file);
    out << j.dump(2) << '\n';
    finish(out, file);
  }
}

std::vector<LatencyCell> fig7_sweep(const ExperimentConfig& cfg, const std::vector<double>& horizons) {
  const MissionSpec base = materialize(cfg);
  std::vector<LatencyCell> cells;
  for (double T : horizons) {
    const MissionSpec m = with_horizon(base, cfg, T);
    const int N = m.N();
    for (const Scenario& sc : {Scenario::always_on(N), Scenario::always_off(), Scenario::intermediate(N / 2)})
      for (Scheme scheme : {Scheme::Joint, Scheme::TrajectoryOnly, Scheme::BitOnly, Scheme::None}) {
        LatencyCell cell{scheme, to_string(sc.kind), T, std::nan(""), std::nan(""), ""};
        try {
          const RunResult r = run_scheme(scheme, m, sc, cfg.driver);
          cell.total_energy_J = r.energy.report_total;
          cell.objective_J = r.energy.objective_total;
          cell.status = to_string(r.status);
        } catch (const std::exception& ex) {
          cell.status = std::string("error: ") + ex.what();
        }
        cells.push_back(cell);
      }
  }
  return cells;
}

namespace {

std::string csv_text(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

void write_latency_table(const std::vector<LatencyCell>& cells, const std::filesystem::path& file) {
  auto out = open_output(file);
  out << "scheme,scenario,total_time_s,total_energy_J,objective_J,status\n";
  for (const auto& c : cells)
    out << to_string(c.scheme) << ',' << c.scenario << ',' << format_number(c.total_time) << ','
        << format_number(c.total_energy_J) << ',' << format_number(c.objective_J) << ',' << csv_text(c.status)
        << '\n';
  finish(out, file);
}

std::vector<AccessCell> fig8_tradeoff(const ExperimentConfig& cfg, const std::vector<double>& fractions) {
  const MissionSpec m = materialize(cfg);
  const int N = m.N();
  std::vector<AccessCell> cells;
  for (double f : fractions) {
    if (!(f >= 0 && f <= 1)) throw ConfigError("access fraction " + format_number(f) + " outside [0, 1]");
    const int nt = static_cast<int>(std::lround(f * N));
    const Scenario sc = nt <= 0 ? Scenario::always_off() : nt >= N ? Scenario::always_on(N) : Scenario::intermediate(nt);
    AccessCell cell{f, nt, to_string(sc.kind), std::nan(""), std::nan(""), std::nan(""), ""};
    try {
      const RunResult r = run_scheme(cfg.scheme, m, sc, cfg.driver);
      cell.total_energy_J = r.energy.report_total;
      cell.objective_J = r.energy.objective_total;
      cell.data_usage_rate = r.plan.data_usage_rate();
      cell.status = to_string(r.status);
    } catch (const std::exception& ex) {
      cell.status = std::string("error: ") + ex.what();
    }
    cells.push_back(cell);
  }
  return cells;
}

void write_access_table(const std::vector<AccessCell>& cells, const std::filesystem::path& file) {
  auto out = open_output(file);
  out << "fraction,last_connected_frame,scenario,total_energy_J,objective_J,data_usage_rate,status\n";
  for (const auto& c : cells)
    out << format_number(c.fraction) << ',' << c.last_connected_frame << ',' << c.scenario << ','
        << format_number(c.total_energy_J) << ',' << format_number(c.objective_J) << ','
        << format_number(c.data_usage_rate) << ',' << csv_text(c.status)
        << '\n';
  finish(out, file);
}

}  // namespace msca
