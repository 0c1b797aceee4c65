#include "msca/assemble.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

namespace msca {

namespace {

SmoothFn proximal(Eigen::VectorXd y, double tau) {
  return [y = std::move(y), tau](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
    const Eigen::VectorXd d = x - y;
    if (g) *g = tau * d;
    if (H) *H = tau * Eigen::MatrixXd::Identity(x.size(), x.size());
    return 0.5 * tau * d.squaredNorm();
  };
}

// c * |(x2, y2) - (x1, y1)|^2 on local (x1, y1, x2, y2), shifted by `offset`.
SmoothFn squared_step(double c, double offset) {
  return [c, offset](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
    const double dx = x(2) - x(0), dy = x(3) - x(1);
    if (g) *g = Eigen::Vector4d(-2 * c * dx, -2 * c * dy, 2 * c * dx, 2 * c * dy);
    if (H) {
      H->setZero(4, 4);
      for (int a = 0; a < 2; ++a) {
        (*H)(a, a) = (*H)(a + 2, a + 2) = 2 * c;
        (*H)(a, a + 2) = (*H)(a + 2, a) = -2 * c;
      }
    }
    return c * (dx * dx + dy * dy) + offset;
  };
}

class Assembler {
 public:
  Assembler(const MissionSpec& m, const ScenarioPlan& plan, const DecisionVector& z, const SurrogateParams& p,
            const SchemeMask& mask, const Units& u)
      : m_(m), plan_(plan), z_(z), p_(p), mask_(mask), u_(u), layout_(plan, m.N(), mask) {}

  InnerProblem run() {
    const Eigen::VectorXd start = layout_.pack(z_, u_);
    for (int i = 0; i < layout_.size(); ++i) b_.add_variable(start(i));
    if (mask_.bits_free) {
      add_prefixes();
      add_totals();
      add_nonnegativity();
      add_auxiliary_proximal();
      add_compute();
    }
    add_uav_leo();
    add_budget();
    if (mask_.path_free) {
      add_flying();
      add_speed();
    }
    InnerProblem out{b_.build(), layout_};
    out.program.validate();
    return out;
  }

 private:
  double bits(Family f, int k, int frame) const { return bits_of(z_.bits, f)(k, frame - 1) / u_.bit; }

  TermArg bit_arg(Family f, int k, int frame) const {
    return {layout_.bit(k, f, frame), bits(f, k, frame)};
  }
  TermArg pos_arg(int waypoint, int axis) const {
    const Position3& q = z_.path.waypoints[waypoint - 1];
    return {layout_.position(waypoint, axis), (axis == 0 ? q.x : q.y) / u_.position};
  }

  // Backlog form of each prefix row: b_n = b_{n-1} + ratio * rhs - lhs >= 0. The last
  // row is implied by the totals and left out.
  void add_prefixes() {
    for (const auto& pc : plan_.prefixes) {
      int prev = -1;
      double backlog = 0.0;
      for (int n = 1; n < pc.rows; ++n) {
        std::vector<std::pair<int, double>> row;
        double flow = 0.0;
        for (const auto& [f, shift] : pc.lhs)
          if (const int i = layout_.bit(pc.sensor, f, n + shift); i >= 0) {
            row.emplace_back(i, 1.0);
            flow -= bits(f, pc.sensor, n + shift);
          }
        if (const int i = layout_.bit(pc.sensor, pc.rhs, n + pc.rhs_shift); i >= 0) {
          row.emplace_back(i, -pc.ratio);
          flow += pc.ratio * bits(pc.rhs, pc.sensor, n + pc.rhs_shift);
        }
        backlog += flow;
        const int bn = b_.add_variable(std::max(backlog, 0.0));
        row.emplace_back(bn, 1.0);
        if (prev >= 0) row.emplace_back(prev, -1.0);
        b_.add_equality(row, 0.0);
        b_.add_inequality({{bn, -1.0}}, 0.0);
        prev = bn;
      }
    }
  }

  void add_totals() {
    const int N = m_.N();
    for (const auto& t : plan_.totals) {
      std::vector<std::pair<int, double>> row;
      for (const auto& [f, c] : t.terms)
        for (int n = 1; n <= N; ++n)
          if (const int i = layout_.bit(t.sensor, f, n); i >= 0) row.emplace_back(i, c);
      b_.add_equality(row, t.target / u_.bit);
    }
  }

  void add_nonnegativity() {
    const int K = m_.K(), N = m_.N();
    for (int k = 0; k < K; ++k)
      for (Family f : kFamilies)
        for (int n = 1; n <= N; ++n)
          if (const int i = layout_.bit(k, f, n); i >= 0) b_.add_inequality({{i, -1.0}}, 0.0);
  }

  // One term per variable keeps the Hessian diagonal.
  void add_auxiliary_proximal() {
    const int K = m_.K(), N = m_.N();
    for (int k = 0; k < K; ++k)
      for (Family f : {Family::UplinkSensorUav, Family::ComputeLeo, Family::DownlinkLeoUav})
        for (int n = 1; n <= N; ++n)
          if (const int i = layout_.bit(k, f, n); i >= 0)
            b_.add_objective({{{i, 0.0}}, proximal(Eigen::VectorXd::Constant(1, bits(f, k, n)), p_.tau_auxiliary)});
  }

  void add_compute() {
    const int K = m_.K(), N = m_.N();
    for (int n = 1; n <= N; ++n) {
      std::vector<int> members;
      SmoothTerm t;
      std::vector<double> y;
      for (int k = 0; k < K; ++k)
        if (const int i = layout_.bit(k, Family::ComputeUav, n); i >= 0) {
          members.push_back(k + 1);
          t.args.push_back({i, 0.0});
          y.push_back(bits(Family::ComputeUav, k, n));
        }
      if (members.empty()) continue;
      auto s = std::make_shared<FrameComputeSurrogate>(m_, members, Eigen::Map<Eigen::VectorXd>(y.data(), y.size()),
                                                       p_, u_);
      t.fn = [s](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) { return (*s)(x, g, H); };
      b_.add_objective(std::move(t));
    }
  }

  void add_uav_leo() {
    const int K = m_.K(), N = m_.N();
    for (int k = 0; k < K; ++k) {
      const FrameWindow& w = plan_.sensors[k].window(Family::UplinkUavLeo);
      for (int n = w.first; n <= w.last; ++n) {
        const TermArg L = bit_arg(Family::UplinkUavLeo, k, n);
        if (L.var < 0 && L.constant <= 0.0) continue;
        if (n > N) break;
        SmoothTerm t;
        t.args = {L, pos_arg(n, 0), pos_arg(n, 1)};
        if (L.var < 0 && t.args[1].var < 0 && t.args[2].var < 0) continue;
        auto s = std::make_shared<UavLeoEnergySurrogate>(
            m_, n, Eigen::Vector3d(L.constant, t.args[1].constant, t.args[2].constant), p_, u_);
        t.fn = [s](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) { return (*s)(x, g, H); };
        b_.add_objective(std::move(t));
      }
    }
  }

  // (E - budget) / budget <= 0 on (L^{I,U}, x_n, y_n). The product is bounded by its
  // upper model when both factors move and taken exactly when one is fixed.
  void add_budget() {
    const int K = m_.K(), N = m_.N();
    const double eps = m_.energy_budget;
    for (int k = 0; k < K; ++k)
      for (int n = 1; n <= N; ++n) {
        const TermArg L = bit_arg(Family::UplinkSensorUav, k, n);
        if (L.var < 0 && L.constant <= 0.0) continue;
        SmoothTerm t;
        t.args = {L, pos_arg(n, 0), pos_arg(n, 1)};
        const bool path_moves = t.args[1].var >= 0;
        if (L.var < 0 && !path_moves) continue;
        auto s = std::make_shared<BudgetSurrogate>(
            m_, k + 1, Eigen::Vector3d(L.constant, t.args[1].constant, t.args[2].constant), u_);
        const bool exact = L.var < 0 || !path_moves;
        t.fn = [s, exact, eps](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
          const double v = exact ? s->original(x, g, H) : (*s)(x, g, H);
          if (g) *g /= eps;
          if (H) *H /= eps;
          return (v - eps) / eps;
        };
        b_.add_nonlinear(std::move(t));
      }
  }

  void add_flying() {
    const int N = m_.N();
    const double c = m_.flying_coefficient() * u_.position * u_.position /
                     (m_.frame_duration * m_.frame_duration) / u_.energy;
    for (int n = 1; n <= N; ++n) {
      SmoothTerm t;
      t.args = {pos_arg(n, 0), pos_arg(n, 1), pos_arg(n + 1, 0), pos_arg(n + 1, 1)};
      t.fn = squared_step(c, 0.0);
      b_.add_objective(std::move(t));
    }
  }

  // (|q_{n+1} - q_n|^2 - r^2) / r^2 <= 0 with r the largest step per frame.
  void add_speed() {
    const int N = m_.N();
    const double r = m_.v_max * m_.frame_duration / u_.position;
    for (int n = 1; n <= N; ++n) {
      SmoothTerm t;
      t.args = {pos_arg(n, 0), pos_arg(n, 1), pos_arg(n + 1, 0), pos_arg(n + 1, 1)};
      if (std::all_of(t.args.begin(), t.args.end(), [](const TermArg& a) { return a.var < 0; })) continue;
      t.fn = squared_step(1.0 / (r * r), -1.0);
      b_.add_nonlinear(std::move(t));
    }
  }

  const MissionSpec& m_;
  const ScenarioPlan& plan_;
  const DecisionVector& z_;
  const SurrogateParams& p_;
  SchemeMask mask_;
  const Units& u_;
  VariableLayout layout_;
  ProgramBuilder b_;
};

}  // namespace

InnerProblem assemble_inner(const MissionSpec& m, const ScenarioPlan& plan, const DecisionVector& z,
                            const SurrogateParams& p, const SchemeMask& mask, const Units& u) {
  if (z.bits.K() != m.K() || z.bits.N() != m.N() || z.path.N() != m.N())
    throw std::invalid_argument("expansion dimensions do not match the mission");
  if (static_cast<int>(plan.sensors.size()) != m.K()) throw std::invalid_argument("plan does not match the mission");
  return Assembler(m, plan, z, p, mask, u).run();
}

InnerProblem assemble_always_on(const MissionSpec& m, const ScenarioPlan& plan, const DecisionVector& z,
                                const SurrogateParams& p, const SchemeMask& mask, const Units& u) {
  if (plan.scenario.kind != ScenarioKind::AlwaysOn) throw std::invalid_argument("plan is not always-on");
  return assemble_inner(m, plan, z, p, mask, u);
}

InnerProblem assemble_always_off(const MissionSpec& m, const ScenarioPlan& plan, const DecisionVector& z,
                                 const SurrogateParams& p, const SchemeMask& mask, const Units& u) {
  if (plan.scenario.kind != ScenarioKind::AlwaysOff) throw std::invalid_argument("plan is not always-off");
  return assemble_inner(m, plan, z, p, mask, u);
}

InnerProblem assemble_intermediate(const MissionSpec& m, const ScenarioPlan& plan, const DecisionVector& z,
                                   const SurrogateParams& p, const SchemeMask& mask, const Units& u) {
  if (plan.scenario.kind != ScenarioKind::IntermediateDisconnected)
    throw std::invalid_argument("plan is not intermediate-disconnected");
  const int nt = plan.scenario.last_connected_frame;
  if (nt <= 0 || nt >= m.N()) throw std::invalid_argument("intermediate scenario needs 0 < N_t < N");
  return assemble_inner(m, plan, z, p, mask, u);
}

}  // namespace msca
