#include <cmath>

#include "doctest.h"
#include "msca/ipm.hpp"

using namespace msca;
using Eigen::VectorXd;

namespace {

// 0.5 * |x - c|^2 on a single variable.
SmoothTerm half_square(int var, double c) {
  return {{{var, 0.0}}, [c](const VectorXd& x, VectorXd* g, Eigen::MatrixXd* H) {
            if (g) *g = VectorXd::Constant(1, x(0) - c);
            if (H) *H = Eigen::MatrixXd::Identity(1, 1);
            return 0.5 * (x(0) - c) * (x(0) - c);
          }};
}

}  // namespace

TEST_CASE("unconstrained quadratic returns its centre") {
  ProgramBuilder b;
  const double c[3] = {1.5, -2.0, 0.25};
  for (int i = 0; i < 3; ++i) {
    b.add_variable(0.0);
    b.add_objective(half_square(i, c[i]));
  }
  const ConvexProgram p = b.build();
  const SolverResult r = solve_convex(p);
  REQUIRE(r.status == SolverStatus::Optimal);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(r.x(i) - c[i]) < 1e-8);
  CHECK(check_kkt(p, r.x).max() <= 1e-12);
}

TEST_CASE("exponential with a lower bound sits on the bound") {
  // min 2^x - 1 + y^2  s.t.  x >= 1
  ProgramBuilder b;
  const int x = b.add_variable(3.0), y = b.add_variable(2.0);
  b.add_objective({{{x, 0}}, [](const VectorXd& v, VectorXd* g, Eigen::MatrixXd* H) {
                     const double e = std::exp2(v(0));
                     if (g) *g = VectorXd::Constant(1, M_LN2 * e);
                     if (H) *H = Eigen::MatrixXd::Constant(1, 1, M_LN2 * M_LN2 * e);
                     return e - 1.0;
                   }});
  b.add_objective({{{y, 0}}, [](const VectorXd& v, VectorXd* g, Eigen::MatrixXd* H) {
                     if (g) *g = VectorXd::Constant(1, 2 * v(0));
                     if (H) *H = Eigen::MatrixXd::Constant(1, 1, 2.0);
                     return v(0) * v(0);
                   }});
  b.add_inequality({{x, -1.0}}, -1.0);
  const ConvexProgram p = b.build();
  const SolverResult r = solve_convex(p);
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(r.x(1)) < 1e-7);
  CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(r.ineq_duals(0) == doctest::Approx(2 * M_LN2).epsilon(1e-5));
}

TEST_CASE("nonlinear disk constraint with equality") {
  // min (x - 2)^2 + (y - 2)^2  s.t.  x^2 + y^2 <= 1,  x - y = 0
  ProgramBuilder b;
  const int x = b.add_variable(0.0), y = b.add_variable(0.0);
  b.add_objective(half_square(x, 2.0));
  b.add_objective(half_square(y, 2.0));
  b.add_nonlinear({{{x, 0}, {y, 0}}, [](const VectorXd& v, VectorXd* g, Eigen::MatrixXd* H) {
                     if (g) *g = 2 * v;
                     if (H) *H = 2 * Eigen::MatrixXd::Identity(2, 2);
                     return v.squaredNorm() - 1.0;
                   }});
  b.add_equality({{x, 1.0}, {y, -1.0}}, 0.0);
  const ConvexProgram p = b.build();
  const SolverResult r = solve_convex(p);
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(r.x(0) == doctest::Approx(M_SQRT1_2).epsilon(1e-7));
  CHECK(r.x(1) == doctest::Approx(M_SQRT1_2).epsilon(1e-7));
  CHECK(p.max_violation(r.x) <= 1e-10);
}

TEST_CASE("check_kkt flags non-optimal candidates") {
  ProgramBuilder b;
  const int x = b.add_variable(0.0);
  b.add_objective(half_square(x, 2.0));
  b.add_inequality({{x, 1.0}}, 1.0);  // x <= 1
  const ConvexProgram p = b.build();
  const SolverResult r = solve_convex(p);
  REQUIRE(r.status == SolverStatus::Optimal);
  CHECK(check_kkt(p, r.x).max() <= 1e-6);
  VectorXd moved = r.x;
  moved(0) -= 1e-3;
  CHECK(check_kkt(p, moved).stationarity > 1e-6);
  CHECK(check_kkt(p, VectorXd::Zero(1)).stationarity > 1e-6);
}

TEST_CASE("solver is deterministic") {
  ProgramBuilder b;
  const int x = b.add_variable(0.3), y = b.add_variable(0.1);
  b.add_objective(half_square(x, 4.0));
  b.add_objective(half_square(y, -1.0));
  b.add_inequality({{x, 1.0}, {y, 1.0}}, 1.0);
  b.add_inequality({{y, -1.0}}, 0.0);
  const ConvexProgram p = b.build();
  const SolverResult a = solve_convex(p), c = solve_convex(p);
  CHECK(a.x == c.x);
  CHECK(a.ineq_duals == c.ineq_duals);
  CHECK(a.iterations == c.iterations);
}
