#include "msca/baselines.hpp"

#include <stdexcept>

#include "msca/errors.hpp"

namespace msca {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Joint: return "joint";
    case Scheme::BitOnly: return "bit_only";
    case Scheme::TrajectoryOnly: return "trajectory_only";
    case Scheme::None: return "none";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::Joint, Scheme::BitOnly, Scheme::TrajectoryOnly, Scheme::None})
    if (to_string(s) == name) return s;
  throw ConfigError("unknown scheme '" + name + "' (expected joint, bit_only, trajectory_only or none)");
}

RunResult run_no_optimization(const MissionSpec& m, const Scenario& scenario) {
  RunResult r;
  r.plan = make_plan(m, scenario);
  r.z = feasible_initialization(m, r.plan);
  r.energy = evaluate_energy(r.z.bits, r.z.path, m);
  TraceRow row;
  row.objective_J = r.energy.objective_total;
  row.max_violation = check_feasibility(r.z, r.plan, m).max_violation;
  r.trace.rows.push_back(row);
  return r;
}

RunResult run_bit_only(const MissionSpec& m, const Scenario& scenario, const DriverOptions& options) {
  const ScenarioPlan plan = make_plan(m, scenario);
  return run_from(m, plan, feasible_initialization(m, plan), options, SchemeMask{true, false});
}

RunResult run_trajectory_only(const MissionSpec& m, const Scenario& scenario, const DriverOptions& options) {
  const ScenarioPlan plan = make_plan(m, scenario);
  const SchemeMask mask{false, true};
  RunResult r = run_from(m, plan, equal_allocation(m, plan), options, mask);
  if (r.status != RunStatus::NumericalFailure && check_feasibility(r.z, plan, m).max_violation <= 1e-8) return r;
  RunResult repaired = run_from(m, plan, feasible_initialization(m, plan), options, mask);
  repaired.message = "equal allocation admits no feasible path; budget-repaired allocation used" +
                     (repaired.message.empty() ? "" : "; " + repaired.message);
  return repaired;
}

RunResult run_scheme(Scheme scheme, const MissionSpec& m, const Scenario& scenario, const DriverOptions& options) {
  switch (scheme) {
    case Scheme::Joint: return run(m, scenario, options);
    case Scheme::BitOnly: return run_bit_only(m, scenario, options);
    case Scheme::TrajectoryOnly: return run_trajectory_only(m, scenario, options);
    case Scheme::None: return run_no_optimization(m, scenario);
  }
  throw std::logic_error("unknown scheme");
}

}  // namespace msca
