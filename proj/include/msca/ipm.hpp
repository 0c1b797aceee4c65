#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>

#include "msca/program.hpp"

namespace msca {

struct KktReport {
  double stationarity = 0;  // |grad L|_inf
  double primal = 0;        // max equality residual or positive inequality value
  double dual = 0;          // most negative inequality multiplier
  double complementarity = 0;  // max |lambda_i c_i(x)|
  double max() const;
};

struct SolverOptions {
  double kkt_tolerance = 1e-6;          // stationarity
  double complementarity_tolerance = 1e-6;
  double feasibility_tolerance = 1e-10;
  int max_iterations = 200;
  double fraction_to_boundary = 0.995;
  double initial_slack = 1e-2;   // floor on starting slacks
  double initial_dual = 1.0;
  double primal_regularization = 1e-10;
  double dual_regularization = 1e-10;
  int refinement_steps = 2;
  // Called once per iteration with (iteration, residuals, mean complementarity, step).
  std::function<void(int, const KktReport&, double, double)> monitor;
};


enum class SolverStatus { Optimal, IterationLimit, NumericalFailure };
std::string to_string(SolverStatus s);

struct SolverResult {
  Eigen::VectorXd x;
  Eigen::VectorXd eq_duals;    // y
  Eigen::VectorXd ineq_duals;  // lambda, linear rows first
  double objective = 0;
  KktReport kkt;
  SolverStatus status = SolverStatus::NumericalFailure;
  int iterations = 0;
};

// Infeasible-start primal-dual interior point with Mehrotra predictor-corrector.
SolverResult solve_convex(const ConvexProgram& program, const SolverOptions& options = {});

struct Duals {
  Eigen::VectorXd eq, ineq;
};

// KKT residuals at x. Without duals, multipliers are fitted by least squares on the
// constraints active within `active_tol` (negative fits count as dual infeasibility).
KktReport check_kkt(const ConvexProgram& program, const Eigen::VectorXd& x,
                    const std::optional<Duals>& duals = std::nullopt, double active_tol = 1e-6);

}  // namespace msca
