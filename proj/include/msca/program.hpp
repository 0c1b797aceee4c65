#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

#include "msca/surrogates.hpp"

namespace msca {

// Local argument of a smooth term: a program variable, or a constant when var < 0.
struct TermArg {
  int var = -1;
  double constant = 0.0;
};

// A smooth convex function of a few program variables.
struct SmoothTerm {
  std::vector<TermArg> args;
  SmoothFn fn;

  Eigen::VectorXd gather(const Eigen::VectorXd& x) const;
};

// min  sum objective(x)
// s.t. A_eq x = b_eq,  A_in x <= b_in,  nonlinear_j(x) <= 0.
struct ConvexProgram {
  int num_vars = 0;
  std::vector<SmoothTerm> objective;
  Eigen::SparseMatrix<double, Eigen::RowMajor> A_eq;
  Eigen::VectorXd b_eq;
  Eigen::SparseMatrix<double, Eigen::RowMajor> A_in;
  Eigen::VectorXd b_in;
  std::vector<SmoothTerm> nonlinear;
  Eigen::VectorXd start;  // feasible (or nearly) starting point

  int num_eq() const { return static_cast<int>(b_eq.size()); }
  int num_ineq() const { return static_cast<int>(b_in.size()) + static_cast<int>(nonlinear.size()); }

  double objective_value(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr) const;
  // Stacked [A_in x - b_in; nonlinear(x)], optionally with the Jacobian.
  Eigen::VectorXd inequality_values(const Eigen::VectorXd& x,
                                    Eigen::SparseMatrix<double, Eigen::RowMajor>* jac = nullptr) const;
  // Largest violation of any constraint at x (equalities by absolute residual).
  double max_violation(const Eigen::VectorXd& x) const;
  // Throws std::invalid_argument on inconsistent dimensions or out-of-range indices.
  void validate() const;
};

// Incremental builder for the sparse constraint blocks.
class ProgramBuilder {
 public:
  int add_variable(double start_value);
  int add_equality(const std::vector<std::pair<int, double>>& row, double rhs);
  int add_inequality(const std::vector<std::pair<int, double>>& row, double rhs);
  void add_objective(SmoothTerm term) { program_.objective.push_back(std::move(term)); }
  void add_nonlinear(SmoothTerm term) { program_.nonlinear.push_back(std::move(term)); }
  void set_start(int var, double v) { start_[var] = v; }
  double start(int var) const { return start_[var]; }
  int num_vars() const { return static_cast<int>(start_.size()); }
  ConvexProgram build();

 private:
  ConvexProgram program_;
  std::vector<double> start_;
  std::vector<Eigen::Triplet<double>> eq_, in_;
  std::vector<double> beq_, bin_;
};

}  // namespace msca
