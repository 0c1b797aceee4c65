#include "msca/ipm.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msca {

double KktReport::max() const { return std::max({stationarity, primal, dual, complementarity}); }

std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Optimal: return "optimal";
    case SolverStatus::IterationLimit: return "iteration_limit";
    case SolverStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

using RowSp = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ColSp = Eigen::SparseMatrix<double>;
using Eigen::VectorXd;

struct Point {
  VectorXd x, s, lam, y;
};

struct Eval {
  double f = 0;
  VectorXd grad, c;
  RowSp J;
};

struct Residual {
  VectorXd rd, ri, re, rc;
  double norm() const {
    return std::sqrt(rd.squaredNorm() + ri.squaredNorm() + re.squaredNorm() + rc.squaredNorm());
  }
};

double max_abs(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Largest alpha in (0, 1] keeping v + alpha dv >= 0.
double max_step(const VectorXd& v, const VectorXd& dv) {
  double a = 1.0;
  for (int i = 0; i < v.size(); ++i)
    if (dv(i) < 0) a = std::min(a, -v(i) / dv(i));
  return a;
}

class InteriorPoint {
 public:
  InteriorPoint(const ConvexProgram& p, const SolverOptions& o)
      : P_(p), o_(o), n_(p.num_vars), me_(p.num_eq()), mi_(p.num_ineq()),
        ml_(static_cast<int>(p.b_in.size())) {}

  SolverResult run() {
    SolverResult res;
    Point z;
    z.x = P_.start;
    Eval e = evaluate(z.x);
    z.s = (-e.c).cwiseMax(o_.initial_slack);
    z.lam = VectorXd::Constant(mi_, o_.initial_dual);
    z.y = VectorXd::Zero(me_);
    bool analyzed = false;
    int it = 0;
    for (;; ++it) {
      res.kkt = report(z, e);
      if (res.kkt.stationarity <= o_.kkt_tolerance && res.kkt.complementarity <= o_.complementarity_tolerance &&
          res.kkt.primal <= o_.feasibility_tolerance) {
        res.status = SolverStatus::Optimal;
        break;
      }
      if (it >= o_.max_iterations) {
        res.status = SolverStatus::IterationLimit;
        break;
      }
      assemble(z, e);
      if (!analyzed) {
        ldlt_.analyzePattern(K_);
        analyzed = true;
      }
      ldlt_.factorize(K_);
      if (ldlt_.info() != Eigen::Success) {
        res.status = SolverStatus::NumericalFailure;
        break;
      }
      const double mu = mi_ ? z.s.dot(z.lam) / mi_ : 0.0;
      Residual r = residual(z, e, 0.0);

      // Predictor.
      Point d = newton(z, e, r);
      double sigma = 0.0;
      if (mi_ > 0) {
        const double ap = max_step(z.s, d.s), ad = max_step(z.lam, d.lam);
        const double mu_aff = (z.s + ap * d.s).dot(z.lam + ad * d.lam) / mi_;
        sigma = std::clamp(std::pow(mu_aff / mu, 3), 0.0, 1.0);
        // Corrector.
        r.rc = z.s.cwiseProduct(z.lam) + d.s.cwiseProduct(d.lam) - VectorXd::Constant(mi_, sigma * mu);
        d = newton(z, e, r);
      }
      double alpha = 0.0;
      if (!line_search(z, e, d, sigma * mu, alpha)) {
        // Fall back to a centred Newton step before giving up.
        sigma = 0.2;
        r = residual(z, e, sigma * mu);
        d = newton(z, e, r);
        if (!line_search(z, e, d, sigma * mu, alpha)) {
          res.status = SolverStatus::NumericalFailure;
          break;
        }
      }
      if (o_.monitor) o_.monitor(it, res.kkt, mu, alpha);
    }
    res.x = z.x;
    res.eq_duals = z.y;
    res.ineq_duals = z.lam;
    res.objective = e.f;
    res.iterations = it;
    return res;
  }

 private:
  Eval evaluate(const VectorXd& x) const {
    Eval e;
    e.f = P_.objective_value(x, &e.grad);
    e.c = P_.inequality_values(x, &e.J);
    return e;
  }

  Residual residual(const Point& z, const Eval& e, double target) const {
    Residual r;
    r.rd = e.grad;
    if (mi_) r.rd += e.J.transpose() * z.lam;
    if (me_) r.rd += P_.A_eq.transpose() * z.y;
    r.ri = e.c + z.s;
    r.re = me_ ? VectorXd(P_.A_eq * z.x - P_.b_eq) : VectorXd();
    r.rc = z.s.cwiseProduct(z.lam) - VectorXd::Constant(mi_, target);
    return r;
  }

  KktReport report(const Point& z, const Eval& e) const {
    KktReport k;
    const Residual r = residual(z, e, 0.0);
    k.stationarity = max_abs(r.rd);
    k.primal = me_ ? max_abs(r.re) : 0.0;
    if (mi_) k.primal = std::max(k.primal, std::max(0.0, e.c.maxCoeff()));
    k.dual = mi_ ? std::max(0.0, -z.lam.minCoeff()) : 0.0;
    k.complementarity = mi_ ? z.lam.cwiseProduct(e.c).cwiseAbs().maxCoeff() : 0.0;
    return k;
  }

  void push_block(const std::vector<TermArg>& args, const Eigen::MatrixXd& H, double w) {
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i].var < 0) continue;
      for (size_t j = 0; j < args.size(); ++j)
        if (args[j].var >= 0) trip_.emplace_back(args[i].var, args[j].var, w * H(i, j));
    }
  }

  // Regularized quasi-definite KKT matrix [W + J'DJ + dx I, A'; A, -dy I].
  void assemble(const Point& z, const Eval& e) {
    trip_.clear();
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    for (const auto& t : P_.objective) {
      t.fn(t.gather(z.x), nullptr, &H);
      push_block(t.args, H, 1.0);
    }
    const VectorXd D = z.lam.cwiseQuotient(z.s);
    for (size_t j = 0; j < P_.nonlinear.size(); ++j) {
      const auto& t = P_.nonlinear[j];
      const int row = ml_ + static_cast<int>(j);
      t.fn(t.gather(z.x), &g, &H);
      H = z.lam(row) * H + D(row) * g * g.transpose();
      push_block(t.args, H, 1.0);
    }
    for (int r = 0; r < ml_; ++r)
      for (RowSp::InnerIterator a(P_.A_in, r); a; ++a)
        for (RowSp::InnerIterator b(P_.A_in, r); b; ++b)
          trip_.emplace_back(static_cast<int>(a.col()), static_cast<int>(b.col()), D(r) * a.value() * b.value());
    for (int i = 0; i < n_; ++i) trip_.emplace_back(i, i, o_.primal_regularization);
    for (int r = 0; r < me_; ++r) {
      for (RowSp::InnerIterator a(P_.A_eq, r); a; ++a) {
        trip_.emplace_back(n_ + r, static_cast<int>(a.col()), a.value());
        trip_.emplace_back(static_cast<int>(a.col()), n_ + r, a.value());
      }
      trip_.emplace_back(n_ + r, n_ + r, -o_.dual_regularization);
    }
    K_.resize(n_ + me_, n_ + me_);
    K_.setFromTriplets(trip_.begin(), trip_.end());
    (void)e;
  }

  VectorXd solve(const VectorXd& b) const {
    VectorXd sol = ldlt_.solve(b);
    for (int k = 0; k < o_.refinement_steps; ++k) {
      VectorXd r = b - K_ * sol;
      r.head(n_) += o_.primal_regularization * sol.head(n_);
      r.tail(me_) -= o_.dual_regularization * sol.tail(me_);
      sol += ldlt_.solve(r);
    }
    return sol;
  }

  Point newton(const Point& z, const Eval& e, const Residual& r) const {
    Point d;
    VectorXd rhs(n_ + me_);
    rhs.head(n_) = -r.rd;
    if (mi_) {
      const VectorXd D = z.lam.cwiseQuotient(z.s);
      rhs.head(n_) -= e.J.transpose() * (D.cwiseProduct(r.ri) - r.rc.cwiseQuotient(z.s));
    }
    if (me_) rhs.tail(me_) = -r.re;
    const VectorXd sol = solve(rhs);
    d.x = sol.head(n_);
    d.y = sol.tail(me_);
    if (mi_) {
      d.s = -r.ri - e.J * d.x;
      d.lam = (-r.rc - z.lam.cwiseProduct(d.s)).cwiseQuotient(z.s);
    } else {
      d.s = d.lam = VectorXd();
    }
    return d;
  }

  bool line_search(Point& z, Eval& e, const Point& d, double target, double& alpha) const {
    alpha = 1.0;
    if (mi_) {
      alpha = std::min(1.0, o_.fraction_to_boundary *
                                std::min(max_step(z.s, d.s), max_step(z.lam, d.lam)));
    }
    const double phi0 = residual(z, e, target).norm();
    for (int k = 0; k < 40; ++k, alpha *= 0.5) {
      Point t;
      t.x = z.x + alpha * d.x;
      t.y = z.y + alpha * d.y;
      t.s = mi_ ? VectorXd(z.s + alpha * d.s) : VectorXd();
      t.lam = mi_ ? VectorXd(z.lam + alpha * d.lam) : VectorXd();
      Eval et = evaluate(t.x);
      if (!std::isfinite(et.f) || !et.c.allFinite()) continue;
      const double phi = residual(t, et, target).norm();
      if (phi <= (1.0 - 1e-4 * alpha) * phi0) {
        z = std::move(t);
        e = std::move(et);
        return true;
      }
    }
    return false;
  }

  const ConvexProgram& P_;
  const SolverOptions& o_;
  int n_, me_, mi_, ml_;
  std::vector<Eigen::Triplet<double>> trip_;
  ColSp K_;
  Eigen::SimplicialLDLT<ColSp, Eigen::Lower> ldlt_;
};

}  // namespace

SolverResult solve_convex(const ConvexProgram& program, const SolverOptions& options) {
  program.validate();
  if (!(options.kkt_tolerance > 0.0)) throw std::invalid_argument("kkt_tolerance must be positive");
  if (!(options.complementarity_tolerance > 0.0))
    throw std::invalid_argument("complementarity_tolerance must be positive");
  return InteriorPoint(program, options).run();
}

KktReport check_kkt(const ConvexProgram& P, const VectorXd& x, const std::optional<Duals>& duals,
                    double active_tol) {
  if (x.size() != P.num_vars) throw std::invalid_argument("candidate has wrong dimension");
  VectorXd grad;
  P.objective_value(x, &grad);
  RowSp J;
  const VectorXd c = P.inequality_values(x, &J);
  const int mi = P.num_ineq(), me = P.num_eq();
  VectorXd lam = VectorXd::Zero(mi), y = VectorXd::Zero(me);
  if (duals) {
    if (duals->ineq.size() != mi || duals->eq.size() != me)
      throw std::invalid_argument("dual vectors have wrong dimension");
    lam = duals->ineq;
    y = duals->eq;
  } else {
    std::vector<int> active;
    for (int i = 0; i < mi; ++i)
      if (c(i) >= -active_tol) active.push_back(i);
    const int p = static_cast<int>(active.size()) + me;
    if (p > 0) {
      // G = [J_A' A_eq'], fit w minimizing |grad + G w|.
      std::vector<Eigen::Triplet<double>> trip;
      for (size_t a = 0; a < active.size(); ++a)
        for (RowSp::InnerIterator it(J, active[a]); it; ++it)
          trip.emplace_back(static_cast<int>(it.col()), static_cast<int>(a), it.value());
      for (int r = 0; r < me; ++r)
        for (RowSp::InnerIterator it(P.A_eq, r); it; ++it)
          trip.emplace_back(static_cast<int>(it.col()), static_cast<int>(active.size()) + r, it.value());
      ColSp G(P.num_vars, p);
      G.setFromTriplets(trip.begin(), trip.end());
      ColSp N = G.transpose() * G;
      ColSp I(p, p);
      I.setIdentity();
      N += 1e-14 * I;
      Eigen::SimplicialLDLT<ColSp> ldlt(N);
      if (ldlt.info() == Eigen::Success) {
        VectorXd w = ldlt.solve(-(G.transpose() * grad));
        for (size_t a = 0; a < active.size(); ++a) lam(active[a]) = w(a);
        y = w.tail(me);
      }
    }
  }
  VectorXd rd = grad;
  if (mi) rd += J.transpose() * lam;
  if (me) rd += P.A_eq.transpose() * y;
  KktReport k;
  k.stationarity = max_abs(rd);
  k.primal = me ? max_abs(P.A_eq * x - P.b_eq) : 0.0;
  if (mi) k.primal = std::max(k.primal, std::max(0.0, c.maxCoeff()));
  k.dual = mi ? std::max(0.0, -lam.minCoeff()) : 0.0;
  k.complementarity = mi ? lam.cwiseProduct(c).cwiseAbs().maxCoeff() : 0.0;
  return k;
}

}  // namespace msca
