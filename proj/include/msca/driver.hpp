#pragma once

#include <string>
#include <vector>

#include "msca/assemble.hpp"
#include "msca/energy.hpp"
#include "msca/ipm.hpp"

namespace msca {

struct DriverOptions {
  double stationarity_tol = 1e-4;  // on packed working-unit vectors
  int max_outer_iterations = 500;
  double gamma0 = 1.0;  // gamma(v) = gamma0 / (1 + delta v)
  double delta = 0.1;
  SurrogateParams surrogate;
  SolverOptions inner = [] {
    SolverOptions o;
    o.kkt_tolerance = 1e-9;
    o.complementarity_tolerance = 1e-13;
    o.max_iterations = 300;
    return o;
  }();
  Units units;

  double gamma(int v) const { return gamma0 / (1.0 + delta * v); }
  void validate() const;
};

struct TraceRow {
  int v = 0;
  double objective_J = 0;  // parent objective at z(v)
  double residual = 0;     // |z_hat(z(v)) - z(v)|
  double gamma = 0;
  SolverStatus inner_status = SolverStatus::Optimal;
  double max_violation = 0;  // original constraints at z(v)
};

struct IterateTrace {
  std::vector<TraceRow> rows;
};

enum class RunStatus { Converged, IterationLimit, NumericalFailure };
std::string to_string(RunStatus s);

struct RunResult {
  ScenarioPlan plan;
  DecisionVector z;
  EnergyBreakdown energy;
  IterateTrace trace;
  RunStatus status = RunStatus::Converged;
  int iterations = 0;
  std::string message;
};

// Equal split over every active window, budget water-filling of the sensor uplink at
// the constant-velocity path, and earliest-first repair of the prefix constraints.
// If the straight path cannot carry the loads, constant-speed detours toward the
// load centroid are tried. Throws InfeasibleInstance when none works.
DecisionVector feasible_initialization(const MissionSpec& mission, const ScenarioPlan& plan);

// Equal split over every active window at the constant-velocity path, repaired only
// for the prefix constraints; the energy budget is not enforced.
DecisionVector equal_allocation(const MissionSpec& mission, const ScenarioPlan& plan);

// Per-frame sensor uplink limit from the energy budget at the given path.
Eigen::MatrixXd uplink_caps(const MissionSpec& mission, const Trajectory& path, double margin = 1e-6);

// Objective of the scenario problem in joules (UAV computing, UAV->LEO, flying).
double parent_objective(const DecisionVector& z, const MissionSpec& mission);

struct StepResult {
  DecisionVector next;
  TraceRow row;
  SolverResult inner;
};

// One surrogate solve at z(v) followed by z(v+1) = z(v) + gamma(v) (z_hat - z(v)).
StepResult sca_step(const DecisionVector& z, int v, const MissionSpec& mission, const ScenarioPlan& plan,
                    const DriverOptions& options, const SchemeMask& mask = {});

// SCA from a given feasible start with the blocks in `mask` free.
RunResult run_from(const MissionSpec& mission, const ScenarioPlan& plan, DecisionVector start,
                   const DriverOptions& options, const SchemeMask& mask = {});

// Joint optimization for the scenario: plan, initialization and SCA.
RunResult run(const MissionSpec& mission, const Scenario& scenario, const DriverOptions& options = {});

}  // namespace msca
