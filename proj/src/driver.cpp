#include "msca/driver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "msca/errors.hpp"

namespace msca {

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::IterationLimit: return "iteration_limit";
    case RunStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

void DriverOptions::validate() const {
  if (!(stationarity_tol > 0)) throw std::invalid_argument("stationarity_tol must be positive");
  if (max_outer_iterations < 1) throw std::invalid_argument("max_outer_iterations must be at least 1");
  if (!(gamma0 > 0 && gamma0 <= 1)) throw std::invalid_argument("gamma0 must lie in (0, 1]");
  if (!(delta >= 0)) throw std::invalid_argument("delta must be nonnegative");
}

Eigen::MatrixXd uplink_caps(const MissionSpec& m, const Trajectory& path, double margin) {
  const int K = m.K(), N = m.N();
  const double slot = m.slot_bandwidth_time();
  Eigen::MatrixXd caps(K, N);
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < N; ++n) {
      const double g = sensor_uav_gain(m, k + 1, path.waypoints[n]);
      caps(k, n) = slot * std::log2(1.0 + m.energy_budget * (1.0 - margin) * g / (m.noise_density * slot));
    }
  return caps;
}

double parent_objective(const DecisionVector& z, const MissionSpec& m) {
  return evaluate_energy(z.bits, z.path, m).objective_total;
}

namespace {

// Frame-indexed series: entry f holds frame f (1-based); entry 0 unused.
using Series = std::vector<double>;

void equal_split(Series& s, const FrameWindow& w, double total) {
  for (int f = w.first; f <= w.last; ++f) s[f] = total / w.size();
}

// Delayed copy: dst(f + shift) = ratio * src(f) over the source window.
void delay(Series& dst, const Series& src, const FrameWindow& w, int shift, double ratio) {
  for (int f = w.first; f <= w.last; ++f) dst[f + shift] = ratio * src[f];
}

// min(cap_f, lambda) summing to total over the window.
bool water_fill(Series& x, const FrameWindow& w, const Series& cap, double total) {
  std::vector<double> c(cap.begin() + w.first, cap.begin() + w.last + 1);
  if (std::accumulate(c.begin(), c.end(), 0.0) < total) return false;
  std::sort(c.begin(), c.end());
  double rest = total, level = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    const double share = rest / static_cast<double>(c.size() - i);
    if (c[i] >= share) {
      level = share;
      break;
    }
    rest -= c[i];
  }
  for (int f = w.first; f <= w.last; ++f) x[f] = std::min(cap[f], level);
  return true;
}

// Each frame at its cap until the total is reached; maximizes every prefix sum.
bool earliest_fill(Series& x, const FrameWindow& w, const Series& cap, double total) {
  double rest = total;
  for (int f = w.first; f <= w.last; ++f) {
    x[f] = std::min(cap[f], rest);
    rest -= x[f];
  }
  return rest <= 1e-12 * std::max(1.0, total);
}

// Water-fill, then move mass earlier until the cumulative sums reach `demand`
// (demand[f] = required sum of x over frames <= f).
bool fill_with_deadlines(Series& x, const FrameWindow& w, const Series& cap, double total, const Series& demand) {
  if (!water_fill(x, w, cap, total)) return false;
  double cum = 0;
  for (int n = w.first; n <= w.last; ++n) {
    cum += x[n];
    double short_by = demand[n] - cum;
    if (short_by <= 1e-12 * std::max(1.0, total)) continue;
    const double moved = short_by;
    for (int f = n; f >= w.first && short_by > 0; --f) {
      const double add = std::min(cap[f] - x[f], short_by);
      if (add > 0) { x[f] += add; short_by -= add; }
    }
    if (short_by > 1e-9 * std::max(1.0, total)) return false;
    double take = moved - short_by;
    for (int f = w.last; f > n && take > 0; --f) {
      const double sub = std::min(x[f], take);
      x[f] -= sub;
      take -= sub;
    }
    if (take > 1e-9 * std::max(1.0, total)) return false;
    cum += moved;
  }
  return true;
}

Series cumulative_demand(int N, const std::vector<const Series*>& lhs, int shift) {
  Series d(N + 2, 0.0);
  double cum = 0;
  for (int n = 1; n <= N; ++n) {
    for (const Series* s : lhs)
      if (n + shift <= N) cum += (*s)[n + shift];
    d[n] = cum;
  }
  return d;
}

struct SensorSeries {
  Series iu, ul, ll, lu, u;
};

SensorSeries initialize_sensor(const MissionSpec& m, const SensorPlan& sp, int k, const Series& cap) {
  const int N = m.N();
  SensorSeries s{Series(N + 2, 0.0), Series(N + 2, 0.0), Series(N + 2, 0.0), Series(N + 2, 0.0),
                 Series(N + 2, 0.0)};
  const double O = m.sensors[k].output_ratio_leo;
  const FrameWindow wiu = sp.window(Family::UplinkSensorUav);
  auto fail = [&] {
    throw InfeasibleInstance("sensor " + std::to_string(k + 1) +
                             " cannot upload its load within the energy budget over the available frames");
  };

  switch (sp.role) {
    case SensorRole::Idle:
      break;
    case SensorRole::UavComputing: {
      equal_split(s.u, sp.window(Family::ComputeUav), sp.uav_bits);
      if (!fill_with_deadlines(s.iu, wiu, cap, sp.uav_bits, cumulative_demand(N, {&s.u}, 1))) {
        if (!water_fill(s.iu, wiu, cap, sp.uav_bits)) fail();
        std::fill(s.u.begin(), s.u.end(), 0.0);
        delay(s.u, s.iu, wiu, 1, 1.0);
      }
      break;
    }
    case SensorRole::LeoComputing: {
      const double I = sp.leo_bits;
      equal_split(s.ul, sp.window(Family::UplinkUavLeo), I);
      if (!fill_with_deadlines(s.iu, wiu, cap, I, cumulative_demand(N, {&s.ul}, 1))) {
        if (!water_fill(s.iu, wiu, cap, I)) fail();
        std::fill(s.ul.begin(), s.ul.end(), 0.0);
        delay(s.ul, s.iu, wiu, 1, 1.0);
      }
      delay(s.ll, s.ul, sp.window(Family::UplinkUavLeo), 1, 1.0);
      delay(s.lu, s.ll, sp.window(Family::ComputeLeo), 1, O);
      break;
    }
    case SensorRole::LeoThenUav: {
      const FrameWindow wul = sp.window(Family::UplinkUavLeo), wu = sp.window(Family::ComputeUav);
      const double total = sp.leo_bits + sp.uav_bits;
      equal_split(s.ul, wul, sp.leo_bits);
      if (!wu.empty()) equal_split(s.u, wu, sp.uav_bits);
      if (!fill_with_deadlines(s.iu, wiu, cap, total, cumulative_demand(N, {&s.ul, &s.u}, 1))) {
        // First-in-first-out from the earliest possible upload.
        if (!earliest_fill(s.iu, wiu, cap, total)) fail();
        std::fill(s.ul.begin(), s.ul.end(), 0.0);
        std::fill(s.u.begin(), s.u.end(), 0.0);
        double backlog = 0, leo_left = sp.leo_bits, uav_left = sp.uav_bits;
        for (int n = wiu.first; n <= wiu.last; ++n) {
          backlog += s.iu[n];
          const int f = n + 1;
          if (wul.contains(f)) {
            const double t = std::min(backlog, leo_left);
            s.ul[f] = t, backlog -= t, leo_left -= t;
          }
          if (wu.contains(f)) {
            const double t = std::min(backlog, uav_left);
            s.u[f] = t, backlog -= t, uav_left -= t;
          }
        }
        const double tol = 1e-9 * std::max(1.0, total);
        if (leo_left > tol || uav_left > tol) fail();
      }
      delay(s.ll, s.ul, wul, 1, 1.0);
      delay(s.lu, s.ll, sp.window(Family::ComputeLeo), 1, O);
      break;
    }
  }
  return s;
}

DecisionVector initialize(const MissionSpec& m, const ScenarioPlan& plan, const Trajectory& path,
                          const Eigen::MatrixXd& caps) {
  const int K = m.K(), N = m.N();
  DecisionVector z{BitAllocation::zeros(K, N), path};
  for (int k = 0; k < K; ++k) {
    Series cap(N + 2, 0.0);
    for (int n = 1; n <= N; ++n) cap[n] = caps(k, n - 1);
    const SensorSeries s = initialize_sensor(m, plan.sensors[k], k, cap);
    for (int n = 1; n <= N; ++n) {
      z.bits.uplink_sensor_uav(k, n - 1) = s.iu[n];
      z.bits.uplink_uav_leo(k, n - 1) = s.ul[n];
      z.bits.compute_leo(k, n - 1) = s.ll[n];
      z.bits.downlink_leo_uav(k, n - 1) = s.lu[n];
      z.bits.compute_uav(k, n - 1) = s.u[n];
    }
  }
  return z;
}

// Constant speed along start -> via -> end, or nothing if that breaks the speed limit.
std::optional<Trajectory> detour(const MissionSpec& m, const Position3& via) {
  const int N = m.N();
  Position3 a = m.uav_start, b = m.uav_end, v = via;
  a.z = b.z = v.z = m.uav_altitude;
  const double l1 = std::sqrt(horizontal_distance_sq(a, v)), l2 = std::sqrt(horizontal_distance_sq(v, b));
  const double total = l1 + l2;
  if (total / N > m.v_max * m.frame_duration * (1.0 - 1e-9)) return std::nullopt;
  Trajectory path{std::vector<Position3>(N + 1)};
  for (int n = 0; n <= N; ++n) {
    const double s = total * n / N;
    const auto lerp = [&](const Position3& p, const Position3& q, double t) {
      return Position3{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y), m.uav_altitude};
    };
    path.waypoints[n] = s <= l1 ? lerp(a, v, l1 > 0 ? s / l1 : 0.0) : lerp(v, b, l2 > 0 ? (s - l1) / l2 : 1.0);
  }
  path.waypoints[0] = m.uav_start;
  path.waypoints[N] = m.uav_end;
  return path;
}

std::optional<DecisionVector> try_initialize(const MissionSpec& m, const ScenarioPlan& plan, const Trajectory& path,
                                             std::string* why) {
  try {
    DecisionVector z = initialize(m, plan, path, uplink_caps(m, path));
    const FeasibilityReport rep = check_feasibility(z, plan, m);
    if (rep.max_violation <= 1e-8) return z;
    *why = "initialization violates " + rep.worst;
  } catch (const InfeasibleInstance& e) {
    *why = e.what();
  }
  return std::nullopt;
}

}  // namespace

DecisionVector feasible_initialization(const MissionSpec& m, const ScenarioPlan& plan) {
  std::string why;
  if (auto z = try_initialize(m, plan, Trajectory{constant_velocity_path(m)}, &why)) return *z;
  // Detours through a via point pulled from the midpoint toward the load centroid.
  double weight = 0, cx = 0, cy = 0;
  for (const auto& s : m.sensors) weight += s.input_bits, cx += s.input_bits * s.position.x, cy += s.input_bits * s.position.y;
  if (weight <= 0) throw InfeasibleInstance(why);
  cx /= weight, cy /= weight;
  const double mx = 0.5 * (m.uav_start.x + m.uav_end.x), my = 0.5 * (m.uav_start.y + m.uav_end.y);
  for (int i = 1; i <= 8; ++i) {
    const double t = i / 8.0;
    const auto path = detour(m, {mx + t * (cx - mx), my + t * (cy - my), 0.0});
    if (!path) break;
    std::string ignored;
    if (auto z = try_initialize(m, plan, *path, &ignored)) return *z;
  }
  throw InfeasibleInstance(why);
}

DecisionVector equal_allocation(const MissionSpec& m, const ScenarioPlan& plan) {
  const Eigen::MatrixXd unlimited = Eigen::MatrixXd::Constant(m.K(), m.N(), std::numeric_limits<double>::infinity());
  return initialize(m, plan, Trajectory{constant_velocity_path(m)}, unlimited);
}

StepResult sca_step(const DecisionVector& z, int v, const MissionSpec& m, const ScenarioPlan& plan,
                    const DriverOptions& opt, const SchemeMask& mask) {
  StepResult out{z, {}, {}};
  const InnerProblem ip = assemble_inner(m, plan, z, opt.surrogate, mask, opt.units);
  const Eigen::VectorXd zv = ip.layout.pack(z, opt.units);
  out.row.v = v;
  out.row.gamma = opt.gamma(v);
  out.row.objective_J = parent_objective(z, m);
  out.row.max_violation = check_feasibility(z, plan, m, opt.units).max_violation;
  if (ip.layout.size() == 0) {
    out.inner.status = SolverStatus::Optimal;
    return out;
  }
  out.inner = solve_convex(ip.program, opt.inner);
  out.row.inner_status = out.inner.status;
  const Eigen::VectorXd zh = out.inner.x.head(ip.layout.size());
  out.row.residual = stationarity_residual(zv, zh);
  ip.layout.unpack(zv + out.row.gamma * (zh - zv), opt.units, out.next);
  return out;
}

namespace {

// Inner results short of the tolerance (iteration limit, or a line search stalled at
// round-off) are still usable when nearly optimal and feasible.
constexpr double kFeasible = 1e-8;

bool usable(const SolverResult& r) {
  if (r.status == SolverStatus::Optimal) return true;
  return r.x.size() > 0 && r.kkt.primal <= 1e-9 && r.kkt.max() <= 1e-6;
}

}  // namespace

RunResult run_from(const MissionSpec& m, const ScenarioPlan& plan, DecisionVector z, const DriverOptions& opt,
                   const SchemeMask& mask) {
  opt.validate();
  RunResult res;
  res.plan = plan;
  DecisionVector best = z;
  double best_obj = std::numeric_limits<double>::infinity();
  res.status = RunStatus::IterationLimit;
  for (int v = 0; v < opt.max_outer_iterations; ++v) {
    StepResult st = sca_step(z, v, m, plan, opt, mask);
    res.trace.rows.push_back(st.row);
    res.iterations = v + 1;
    if (st.row.max_violation <= kFeasible && st.row.objective_J < best_obj) {
      best_obj = st.row.objective_J;
      best = z;
    }
    if (!usable(st.inner)) {
      res.status = RunStatus::NumericalFailure;
      res.message = "inner solver stopped with status " + to_string(st.inner.status) + " at outer iteration " +
                    std::to_string(v);
      z = best;
      break;
    }
    if (st.row.residual <= opt.stationarity_tol) {
      res.status = RunStatus::Converged;
      break;
    }
    z = std::move(st.next);
  }
  if (res.status == RunStatus::IterationLimit) {
    res.message = "stationarity residual above tolerance after " + std::to_string(res.iterations) + " iterations";
    z = best;
  }
  res.z = std::move(z);
  res.energy = evaluate_energy(res.z.bits, res.z.path, m);
  return res;
}

RunResult run(const MissionSpec& m, const Scenario& scenario, const DriverOptions& opt) {
  const ScenarioPlan plan = make_plan(m, scenario);
  return run_from(m, plan, feasible_initialization(m, plan), opt);
}

}  // namespace msca
