#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "msca/errors.hpp"
#include "msca/experiment.hpp"

using namespace msca;

namespace {

enum Exit { Ok = 0, Failure = 1, Infeasible = 2, NotConverged = 3, BadConfig = 4 };

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, scheme, scenario;
  std::optional<double> tol;
  std::optional<int> max_iters;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Config file (key = value)");
  cmd->add_option("--seed", o.seed, "Deployment seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--scheme", o.scheme, "joint, bit_only, trajectory_only or none");
  cmd->add_option("--scenario", o.scenario, "auto, always_on, always_off, intermediate[:N_t]");
  cmd->add_option("--tol", o.tol, "SCA stationarity tolerance");
  cmd->add_option("--max-iters", o.max_iters, "Outer iteration limit");
}

ExperimentConfig configure(const Overrides& o) {
  std::string text;
  ExperimentConfig base = o.config.empty() ? parse_config("", "<defaults>") : load_config(o.config);
  // Overrides go through the same parser so they get the same checks.
  auto set = [&](const std::string& key, const std::string& value) {
    text += key + " = " + value + "\n";
  };
  if (o.seed) set("seed", std::to_string(*o.seed));
  if (o.scheme) set("scheme", *o.scheme);
  if (o.scenario) set("scenario", *o.scenario);
  if (o.max_iters) set("max_outer_iterations", std::to_string(*o.max_iters));
  if (o.tol) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *o.tol);
    set("stationarity_tol", buf);
  }
  if (!text.empty()) {
    const ExperimentConfig patch = parse_config(text, "<command line>");
    if (o.seed) base.seed = patch.seed;
    if (o.scheme) base.scheme = patch.scheme;
    if (o.scenario) {
      base.scenario = patch.scenario;
      if (patch.intermediate_frames >= 0) base.intermediate_frames = patch.intermediate_frames;
    }
    if (o.max_iters) base.driver.max_outer_iterations = patch.driver.max_outer_iterations;
    if (o.tol) base.driver.stationarity_tol = patch.driver.stationarity_tol;
  }
  if (o.out) base.output_dir = *o.out;
  return base;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw ConfigError("bad list entry '" + item + "'");
  }
  return out;
}

// "a:step:b" or a comma list.
std::vector<double> parse_range(const std::string& s) {
  if (s.find(':') == std::string::npos) return parse_list(s);
  std::vector<double> p;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) p.push_back(std::stod(item));
  if (p.size() != 3 || !(p[1] > 0) || p[2] < p[0]) throw ConfigError("range must be start:step:stop");
  std::vector<double> out;
  const long count = std::lround(std::floor((p[2] - p[0]) / p[1] + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(p[0] + i * p[1]);
  return out;
}

int cmd_run(const Overrides& o) {
  const ExperimentConfig cfg = configure(o);
  const ResultBundle b = run_experiment(cfg);
  export_results(b, cfg.output_dir);
  const auto& r = b.result;
  std::printf("%s %s: status %s after %d iterations, total %s J, usage %.4f (%.2f s)\n", to_string(b.scheme).c_str(),
              to_string(b.scenario).c_str(), to_string(r.status).c_str(), r.iterations,
              format_number(r.energy.report_total).c_str(), r.plan.data_usage_rate(), b.runtime_s);
  if (!r.message.empty()) std::printf("note: %s\n", r.message.c_str());
  return r.status == RunStatus::Converged ? Ok : NotConverged;
}

int cmd_latency(const Overrides& o, const std::string& horizons) {
  const ExperimentConfig cfg = configure(o);
  const auto cells = fig7_sweep(cfg, parse_range(horizons));
  std::filesystem::create_directories(cfg.output_dir);
  const auto file = std::filesystem::path(cfg.output_dir) / "latency.csv";
  write_latency_table(cells, file);
  int failed = 0;
  for (const auto& c : cells) failed += c.status != "converged";
  std::printf("%zu cells written to %s, %d not converged\n", cells.size(), file.string().c_str(), failed);
  return failed ? NotConverged : Ok;
}

int cmd_access(const Overrides& o, const std::string& fractions) {
  const ExperimentConfig cfg = configure(o);
  const auto cells = fig8_tradeoff(cfg, parse_list(fractions));
  std::filesystem::create_directories(cfg.output_dir);
  const auto file = std::filesystem::path(cfg.output_dir) / "access.csv";
  write_access_table(cells, file);
  int failed = 0;
  for (const auto& c : cells) failed += c.status != "converged";
  std::printf("%zu cells written to %s, %d not converged\n", cells.size(), file.string().c_str(), failed);
  return failed ? NotConverged : Ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint bit allocation and UAV trajectory optimization for UAV/LEO offloading"};
  app.require_subcommand(1);

  Overrides run_o, lat_o, acc_o;
  std::string horizons = "360:90:1620";
  std::string fractions = "0,0.125,0.25,0.375,0.5,0.625,0.75,0.875,1";

  auto* run = app.add_subcommand("run", "Run one experiment and export its results");
  add_common(run, run_o);
  auto* lat = app.add_subcommand("sweep-latency", "Energy versus mission time for every scheme and scenario");
  add_common(lat, lat_o);
  lat->add_option("--horizons", horizons, "Mission times in s, start:step:stop or a comma list");
  auto* acc = app.add_subcommand("sweep-access", "Energy and data usage versus LEO access fraction");
  add_common(acc, acc_o);
  acc->add_option("--fractions", fractions, "Comma list of access fractions in [0, 1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : BadConfig;
  }

  try {
    if (*run) return cmd_run(run_o);
    if (*lat) return cmd_latency(lat_o, horizons);
    if (*acc) return cmd_access(acc_o, fractions);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return BadConfig;
  } catch (const InfeasibleInstance& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return Infeasible;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return BadConfig;
  } catch (const IterationLimit& e) {
    std::fprintf(stderr, "not converged: %s\n", e.what());
    return NotConverged;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "not converged: %s\n", e.what());
    return NotConverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return Failure;
  }
  return Ok;
}
