#pragma once

#include <string>

#include "msca/driver.hpp"

namespace msca {

enum class Scheme { Joint, BitOnly, TrajectoryOnly, None };
std::string to_string(Scheme s);
// Accepts joint, bit_only, trajectory_only, none.
Scheme parse_scheme(const std::string& name);

// Constant-velocity path with the repaired equal allocation; no optimization.
RunResult run_no_optimization(const MissionSpec& mission, const Scenario& scenario);

// Bits optimized along the fixed constant-velocity path.
RunResult run_bit_only(const MissionSpec& mission, const Scenario& scenario, const DriverOptions& options = {});

// Waypoints optimized with the equal allocation held fixed. The SCA starts from the
// straight path even when that path breaks the energy budget; if no feasible path
// is found, the budget-repaired allocation is used instead.
RunResult run_trajectory_only(const MissionSpec& mission, const Scenario& scenario,
                              const DriverOptions& options = {});

RunResult run_scheme(Scheme scheme, const MissionSpec& mission, const Scenario& scenario,
                     const DriverOptions& options = {});

}  // namespace msca
