#include "msca/decision.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "msca/scenario.hpp"

namespace msca {

Eigen::MatrixXd& bits_of(BitAllocation& a, Family f) {
  switch (f) {
    case Family::UplinkSensorUav: return a.uplink_sensor_uav;
    case Family::UplinkUavLeo: return a.uplink_uav_leo;
    case Family::ComputeLeo: return a.compute_leo;
    case Family::DownlinkLeoUav: return a.downlink_leo_uav;
    case Family::ComputeUav: return a.compute_uav;
  }
  throw std::logic_error("unknown family");
}

const Eigen::MatrixXd& bits_of(const BitAllocation& a, Family f) {
  return bits_of(const_cast<BitAllocation&>(a), f);
}

VariableLayout::VariableLayout(const ScenarioPlan& plan, int frame_count, const SchemeMask& mask)
    : frames_(frame_count), mask_(mask) {
  const int K = static_cast<int>(plan.sensors.size());
  first_.assign(K, {-1, -1, -1, -1, -1});
  windows_.resize(K);
  if (mask.bits_free) {
    for (int k = 0; k < K; ++k)
      for (Family f : kFamilies) {
        const FrameWindow& w = plan.sensors[k].window(f);
        windows_[k][static_cast<int>(f)] = w;
        if (w.empty()) continue;
        first_[k][static_cast<int>(f)] = size_;
        size_ += w.size();
      }
  }
  pos_.assign(2 * (frame_count + 1), -1);
  if (mask.path_free)
    for (int w = 2; w <= frame_count; ++w) {
      pos_[2 * (w - 1)] = size_++;
      pos_[2 * (w - 1) + 1] = size_++;
    }
}

int VariableLayout::bit(int k, Family f, int frame) const {
  const int i = first_[k][static_cast<int>(f)];
  const FrameWindow& w = windows_[k][static_cast<int>(f)];
  if (i < 0 || !w.contains(frame)) return -1;
  return i + frame - w.first;
}

int VariableLayout::position(int waypoint, int axis) const {
  if (waypoint < 1 || waypoint > frames_ + 1) return -1;
  return pos_[2 * (waypoint - 1) + axis];
}

Eigen::VectorXd VariableLayout::pack(const DecisionVector& z, const Units& u) const {
  Eigen::VectorXd v(size_);
  const int K = static_cast<int>(first_.size());
  for (int k = 0; k < K; ++k)
    for (Family f : kFamilies)
      for (int n = 1; n <= frames_; ++n)
        if (const int i = bit(k, f, n); i >= 0) v(i) = bits_of(z.bits, f)(k, n - 1) / u.bit;
  for (int w = 1; w <= frames_ + 1; ++w) {
    if (const int i = position(w, 0); i >= 0) v(i) = z.path.waypoints[w - 1].x / u.position;
    if (const int i = position(w, 1); i >= 0) v(i) = z.path.waypoints[w - 1].y / u.position;
  }
  return v;
}

void VariableLayout::unpack(const Eigen::VectorXd& v, const Units& u, DecisionVector& z) const {
  if (v.size() < size_) throw std::invalid_argument("packed vector too short");
  const int K = static_cast<int>(first_.size());
  for (int k = 0; k < K; ++k)
    for (Family f : kFamilies)
      for (int n = 1; n <= frames_; ++n)
        if (const int i = bit(k, f, n); i >= 0) bits_of(z.bits, f)(k, n - 1) = std::max(0.0, v(i)) * u.bit;
  for (int w = 1; w <= frames_ + 1; ++w) {
    if (const int i = position(w, 0); i >= 0) z.path.waypoints[w - 1].x = v(i) * u.position;
    if (const int i = position(w, 1); i >= 0) z.path.waypoints[w - 1].y = v(i) * u.position;
  }
}

FeasibilityReport check_feasibility(const DecisionVector& z, const ScenarioPlan& plan, const MissionSpec& m,
                                    const Units& u) {
  const int K = m.K(), N = m.N();
  if (z.bits.K() != K || z.bits.N() != N || z.path.N() != N)
    throw std::invalid_argument("decision vector dimensions do not match the mission");
  FeasibilityReport rep;
  auto note = [&](double v, auto&& describe) {
    if (v > rep.max_violation) {
      rep.max_violation = v;
      std::ostringstream os;
      describe(os);
      rep.worst = os.str();
    }
  };
  auto x = [&](int k, Family f, int frame) {
    return frame >= 1 && frame <= N ? bits_of(z.bits, f)(k, frame - 1) / u.bit : 0.0;
  };

  for (int k = 0; k < K; ++k)
    for (Family f : kFamilies) {
      const FrameWindow& w = plan.sensors[k].window(f);
      for (int n = 1; n <= N; ++n) {
        const double v = x(k, f, n);
        note(-v, [&](auto& os) { os << "negative " << to_string(f) << " sensor " << k + 1 << " frame " << n; });
        if (!w.contains(n))
          note(std::abs(v), [&](auto& os) { os << to_string(f) << " outside window, sensor " << k + 1 << " frame " << n; });
      }
    }

  for (const auto& p : plan.prefixes) {
    double lhs = 0, rhs = 0;
    for (int n = 1; n <= p.rows; ++n) {
      for (const auto& [f, shift] : p.lhs) lhs += x(p.sensor, f, n + shift);
      rhs += p.ratio * x(p.sensor, p.rhs, n + p.rhs_shift);
      note(lhs - rhs, [&](auto& os) { os << "prefix on " << to_string(p.rhs) << " sensor " << p.sensor + 1 << " row " << n; });
    }
  }

  for (const auto& t : plan.totals) {
    double s = 0;
    for (const auto& [f, c] : t.terms) s += c * bits_of(z.bits, f).row(t.sensor).sum() / u.bit;
    note(std::abs(s - t.target / u.bit), [&](auto& os) { os << "total sensor " << t.sensor + 1; });
  }

  for (int n = 1; n <= N; ++n) {
    const Position3& p = z.path.waypoints[n - 1];
    for (int k = 0; k < K; ++k) {
      const double L = z.bits.uplink_sensor_uav(k, n - 1);
      if (L <= 0.0) continue;
      const double e = sensor_to_uav_energy(L, sensor_uav_gain(m, k + 1, p), m);
      note((e - m.energy_budget) / m.energy_budget,
           [&](auto& os) { os << "energy budget sensor " << k + 1 << " frame " << n; });
    }
    const double v2 = z.path.velocity(n, m.frame_duration).squaredNorm();
    note(v2 / (m.v_max * m.v_max) - 1.0, [&](auto& os) { os << "speed frame " << n; });
  }

  auto endpoint = [&](const Position3& a, const Position3& b) {
    return std::hypot(a.x - b.x, a.y - b.y) / u.position;
  };
  note(endpoint(z.path.waypoints.front(), m.uav_start), [](auto& os) { os << "start point"; });
  note(endpoint(z.path.waypoints.back(), m.uav_end), [](auto& os) { os << "end point"; });
  return rep;
}

double stationarity_residual(const Eigen::VectorXd& z, const Eigen::VectorXd& z_hat) {
  if (z.size() != z_hat.size()) throw std::invalid_argument("stationarity_residual: dimension mismatch");
  return (z_hat - z).norm();
}

}  // namespace msca
