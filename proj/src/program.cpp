#include "msca/program.hpp"

#include <algorithm>
#include <stdexcept>

namespace msca {

Eigen::VectorXd SmoothTerm::gather(const Eigen::VectorXd& x) const {
  Eigen::VectorXd loc(args.size());
  for (size_t i = 0; i < args.size(); ++i) loc(i) = args[i].var >= 0 ? x(args[i].var) : args[i].constant;
  return loc;
}

double ConvexProgram::objective_value(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
  double f = 0.0;
  if (grad) grad->setZero(num_vars);
  Eigen::VectorXd g;
  for (const auto& t : objective) {
    f += t.fn(t.gather(x), grad ? &g : nullptr, nullptr);
    if (grad)
      for (size_t i = 0; i < t.args.size(); ++i)
        if (t.args[i].var >= 0) (*grad)(t.args[i].var) += g(i);
  }
  return f;
}

Eigen::VectorXd ConvexProgram::inequality_values(const Eigen::VectorXd& x,
                                                 Eigen::SparseMatrix<double, Eigen::RowMajor>* jac) const {
  const int ml = static_cast<int>(b_in.size());
  Eigen::VectorXd c(num_ineq());
  if (ml > 0) c.head(ml) = A_in * x - b_in;
  std::vector<Eigen::Triplet<double>> trip;
  if (jac) {
    trip.reserve(A_in.nonZeros() + 3 * nonlinear.size());
    for (int r = 0; r < A_in.outerSize(); ++r)
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(A_in, r); it; ++it)
        trip.emplace_back(r, static_cast<int>(it.col()), it.value());
  }
  Eigen::VectorXd g;
  for (size_t j = 0; j < nonlinear.size(); ++j) {
    const auto& t = nonlinear[j];
    c(ml + j) = t.fn(t.gather(x), jac ? &g : nullptr, nullptr);
    if (jac)
      for (size_t i = 0; i < t.args.size(); ++i)
        if (t.args[i].var >= 0) trip.emplace_back(ml + static_cast<int>(j), t.args[i].var, g(i));
  }
  if (jac) {
    jac->resize(num_ineq(), num_vars);
    jac->setFromTriplets(trip.begin(), trip.end());
  }
  return c;
}

double ConvexProgram::max_violation(const Eigen::VectorXd& x) const {
  double v = 0.0;
  if (num_eq() > 0) v = (A_eq * x - b_eq).cwiseAbs().maxCoeff();
  if (num_ineq() > 0) v = std::max(v, inequality_values(x).maxCoeff());
  return std::max(v, 0.0);
}

void ConvexProgram::validate() const {
  auto check_term = [&](const SmoothTerm& t) {
    if (!t.fn) throw std::invalid_argument("term without function");
    for (const auto& a : t.args)
      if (a.var >= num_vars) throw std::invalid_argument("term references unknown variable");
  };
  if (A_eq.rows() != b_eq.size() || (A_eq.rows() > 0 && A_eq.cols() != num_vars))
    throw std::invalid_argument("equality block dimensions inconsistent");
  if (A_in.rows() != b_in.size() || (A_in.rows() > 0 && A_in.cols() != num_vars))
    throw std::invalid_argument("inequality block dimensions inconsistent");
  if (start.size() != num_vars) throw std::invalid_argument("start point has wrong dimension");
  for (const auto& t : objective) check_term(t);
  for (const auto& t : nonlinear) check_term(t);
}

int ProgramBuilder::add_variable(double start_value) {
  start_.push_back(start_value);
  return static_cast<int>(start_.size()) - 1;
}

int ProgramBuilder::add_equality(const std::vector<std::pair<int, double>>& row, double rhs) {
  const int r = static_cast<int>(beq_.size());
  for (const auto& [j, a] : row) eq_.emplace_back(r, j, a);
  beq_.push_back(rhs);
  return r;
}

int ProgramBuilder::add_inequality(const std::vector<std::pair<int, double>>& row, double rhs) {
  const int r = static_cast<int>(bin_.size());
  for (const auto& [j, a] : row) in_.emplace_back(r, j, a);
  bin_.push_back(rhs);
  return r;
}

ConvexProgram ProgramBuilder::build() {
  ConvexProgram p = std::move(program_);
  p.num_vars = num_vars();
  p.start = Eigen::Map<const Eigen::VectorXd>(start_.data(), num_vars());
  p.A_eq.resize(static_cast<int>(beq_.size()), p.num_vars);
  p.A_eq.setFromTriplets(eq_.begin(), eq_.end());
  p.b_eq = Eigen::Map<const Eigen::VectorXd>(beq_.data(), static_cast<int>(beq_.size()));
  p.A_in.resize(static_cast<int>(bin_.size()), p.num_vars);
  p.A_in.setFromTriplets(in_.begin(), in_.end());
  p.b_in = Eigen::Map<const Eigen::VectorXd>(bin_.data(), static_cast<int>(bin_.size()));
  p.validate();
  *this = ProgramBuilder{};
  return p;
}

}  // namespace msca
