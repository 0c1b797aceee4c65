#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "msca/mission.hpp"
#include "msca/scenario.hpp"

namespace msca {

enum class Family { UplinkSensorUav = 0, UplinkUavLeo, ComputeLeo, DownlinkLeoUav, ComputeUav };
inline constexpr int kFamilyCount = 5;
inline constexpr std::array<Family, kFamilyCount> kFamilies = {
    Family::UplinkSensorUav, Family::UplinkUavLeo, Family::ComputeLeo, Family::DownlinkLeoUav,
    Family::ComputeUav};
std::string to_string(Family f);

// Inclusive 1-based frame range; empty when first > last.
struct FrameWindow {
  int first = 1;
  int last = 0;
  bool empty() const { return first > last; }
  int size() const { return empty() ? 0 : last - first + 1; }
  bool contains(int frame) const { return frame >= first && frame <= last; }
  bool operator==(const FrameWindow&) const = default;
};

enum class SensorRole { Idle, UavComputing, LeoComputing, LeoThenUav };
std::string to_string(SensorRole r);

struct SensorPlan {
  SensorRole role = SensorRole::Idle;
  std::array<FrameWindow, kFamilyCount> windows{};
  double leo_bits = 0;          // computed on the LEO
  double uav_bits = 0;          // computed on the UAV
  double unprocessed_bits = 0;  // beyond UAV capacity, dropped

  const FrameWindow& window(Family f) const { return windows[static_cast<int>(f)]; }
  FrameWindow& window(Family f) { return windows[static_cast<int>(f)]; }
  double processed_bits() const { return leo_bits + uav_bits; }
};

// For n = 1..rows:  sum_{i<=n} sum_lhs x_f(i + shift)  <=  ratio * sum_{i<=n} x_rhs(i + rhs_shift).
struct PrefixConstraint {
  int sensor = 0;  // 0-based
  std::vector<std::pair<Family, int>> lhs;
  Family rhs = Family::UplinkSensorUav;
  int rhs_shift = 0;
  double ratio = 1.0;
  int rows = 0;
};

// sum_f coef_f * (sum of x_f over its window) = target.
struct TotalConstraint {
  int sensor = 0;
  std::vector<std::pair<Family, double>> terms;
  double target = 0.0;
};

struct ScenarioPlan {
  Scenario scenario;
  AccessProfile access;
  ScheduleProfile schedule;
  std::vector<SensorPlan> sensors;
  std::vector<PrefixConstraint> prefixes;
  std::vector<TotalConstraint> totals;
  double total_input_bits = 0;

  // Processed bits over collected bits (1 when nothing was collected).
  double data_usage_rate() const;
};

// Throws std::invalid_argument when a LEO-computing sensor has no room for its pipeline.
ScenarioPlan make_plan(const MissionSpec& mission, const Scenario& scenario);

}  // namespace msca
