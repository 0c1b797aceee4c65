#include "msca/plan.hpp"

#include <algorithm>
#include <stdexcept>

namespace msca {

std::string to_string(Family f) {
  switch (f) {
    case Family::UplinkSensorUav: return "L_IU";
    case Family::UplinkUavLeo: return "L_UL";
    case Family::ComputeLeo: return "l_L";
    case Family::DownlinkLeoUav: return "L_LU";
    case Family::ComputeUav: return "l_U";
  }
  return "?";
}

std::string to_string(SensorRole r) {
  switch (r) {
    case SensorRole::Idle: return "idle";
    case SensorRole::UavComputing: return "uav";
    case SensorRole::LeoComputing: return "leo";
    case SensorRole::LeoThenUav: return "leo_then_uav";
  }
  return "?";
}

double ScenarioPlan::data_usage_rate() const {
  if (total_input_bits <= 0.0) return 1.0;
  double processed = 0.0;
  for (const auto& s : sensors) processed += s.processed_bits();
  return processed / total_input_bits;
}

namespace {

void plan_uav(ScenarioPlan& plan, int k, double bits, int N) {
  SensorPlan& sp = plan.sensors[k];
  sp.uav_bits = bits;
  if (bits <= 0.0) return;
  sp.role = SensorRole::UavComputing;
  sp.window(Family::UplinkSensorUav) = {1, N - 2};
  sp.window(Family::ComputeUav) = {2, N - 1};
  plan.prefixes.push_back({k, {{Family::ComputeUav, 1}}, Family::UplinkSensorUav, 0, 1.0, N - 2});
  plan.totals.push_back({k, {{Family::UplinkSensorUav, 1.0}}, bits});
  plan.totals.push_back({k, {{Family::ComputeUav, 1.0}}, bits});
}

// LEO pipeline over `rows` relay frames: relay 2..rows+1, compute 3..rows+2, return 4..rows+3.
void plan_leo_pipeline(ScenarioPlan& plan, int k, double leo_bits, double ratio, int rows) {
  SensorPlan& sp = plan.sensors[k];
  sp.window(Family::UplinkUavLeo) = {2, rows + 1};
  sp.window(Family::ComputeLeo) = {3, rows + 2};
  sp.window(Family::DownlinkLeoUav) = {4, rows + 3};
  plan.prefixes.push_back({k, {{Family::ComputeLeo, 2}}, Family::UplinkUavLeo, 1, 1.0, rows});
  plan.prefixes.push_back({k, {{Family::DownlinkLeoUav, 3}}, Family::ComputeLeo, 2, ratio, rows});
  plan.totals.push_back({k, {{Family::ComputeLeo, 1.0}}, leo_bits});
  plan.totals.push_back({k, {{Family::ComputeLeo, 1.0}, {Family::UplinkUavLeo, -1.0}}, 0.0});
  plan.totals.push_back({k, {{Family::DownlinkLeoUav, 1.0}, {Family::UplinkUavLeo, -ratio}}, 0.0});
}

}  // namespace

ScenarioPlan make_plan(const MissionSpec& m, const Scenario& scenario) {
  m.validate();
  const int K = m.K(), N = m.N();
  ScenarioPlan plan;
  plan.scenario = scenario;
  plan.access = build_access_profile(scenario, m);
  plan.schedule = schedule_offloading(m, plan.access);
  plan.sensors.assign(K, SensorPlan{});
  const int nt = scenario.kind == ScenarioKind::AlwaysOn ? N : scenario.last_connected_frame;

  for (int k = 0; k < K; ++k) {
    const double I = m.sensors[k].input_bits;
    const double cap = uav_capacity_bits(m, k + 1);
    const double ratio = m.sensors[k].output_ratio_leo;
    plan.total_input_bits += I;
    SensorPlan& sp = plan.sensors[k];
    if (plan.schedule.beta(k) == 0) {
      plan_uav(plan, k, std::min(I, cap), N);
    } else if (scenario.kind == ScenarioKind::AlwaysOn) {
      if (N < 5) throw std::invalid_argument("LEO computing needs at least 5 frames");
      sp.role = SensorRole::LeoComputing;
      sp.leo_bits = I;
      sp.window(Family::UplinkSensorUav) = {1, N - 4};
      plan.prefixes.push_back({k, {{Family::UplinkUavLeo, 1}}, Family::UplinkSensorUav, 0, 1.0, N - 4});
      plan.totals.push_back({k, {{Family::UplinkSensorUav, 1.0}}, I});
      plan_leo_pipeline(plan, k, I, ratio, N - 4);
    } else {
      // LEO share proportional to the connected part of the full pipeline length; the
      // rest is computed on the UAV after the link drops, capped by its capacity.
      if (N < 5 || nt < 1) throw std::invalid_argument("LEO computing needs a connected frame and N >= 5");
      const int rows = std::min(nt, N - 4);
      const double share = std::min(1.0, static_cast<double>(nt) / (N - 4));
      const FrameWindow uav_window{nt + 2, N - 1};
      sp.role = SensorRole::LeoThenUav;
      sp.leo_bits = share * I;
      sp.uav_bits = uav_window.empty() ? 0.0 : (1.0 - share) * std::min(I, cap);
      sp.window(Family::UplinkSensorUav) = {1, N - 2};
      if (sp.uav_bits > 0.0) {
        sp.window(Family::ComputeUav) = uav_window;
        plan.prefixes.push_back({k, {{Family::UplinkUavLeo, 1}, {Family::ComputeUav, 1}},
                                 Family::UplinkSensorUav, 0, 1.0, N - 2});
        plan.totals.push_back({k, {{Family::ComputeUav, 1.0}}, sp.uav_bits});
      } else {
        plan.prefixes.push_back({k, {{Family::UplinkUavLeo, 1}}, Family::UplinkSensorUav, 0, 1.0, N - 2});
      }
      plan.totals.push_back({k, {{Family::UplinkSensorUav, 1.0}}, sp.leo_bits + sp.uav_bits});
      plan_leo_pipeline(plan, k, sp.leo_bits, ratio, rows);
    }
    sp.unprocessed_bits = std::max(0.0, I - sp.processed_bits());
  }
  return plan;
}

}  // namespace msca
