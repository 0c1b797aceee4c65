#include "msca/surrogates.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace msca {

ProductSurrogate::ProductSurrogate(SmoothFn f1, SmoothFn f2, Eigen::VectorXd y, double tau, Eigen::MatrixXd H)
    : f1_(std::move(f1)), f2_(std::move(f2)), y_(std::move(y)), tau_(tau), H_(std::move(H)) {
  if (!(tau_ > 0.0)) throw std::invalid_argument("proximal weight must be positive");
  if (H_.rows() != y_.size() || H_.cols() != y_.size())
    throw std::invalid_argument("proximal matrix has wrong dimensions");
  Eigen::LLT<Eigen::MatrixXd> llt(H_);
  if (!H_.isApprox(H_.transpose()) || llt.info() != Eigen::Success)
    throw std::invalid_argument("proximal matrix must be symmetric positive definite");
  f1y_ = f1_(y_, nullptr, nullptr);
  f2y_ = f2_(y_, nullptr, nullptr);
}

double ProductSurrogate::operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                                   Eigen::MatrixXd* hess) const {
  Eigen::VectorXd g1, g2;
  Eigen::MatrixXd H1, H2;
  const double a = f1_(x, grad ? &g1 : nullptr, hess ? &H1 : nullptr);
  const double b = f2_(x, grad ? &g2 : nullptr, hess ? &H2 : nullptr);
  const Eigen::VectorXd d = x - y_;
  const Eigen::VectorXd Hd = H_ * d;
  if (grad) *grad = f2y_ * g1 + f1y_ * g2 + tau_ * Hd;
  if (hess) *hess = f2y_ * H1 + f1y_ * H2 + tau_ * H_;
  return a * f2y_ + f1y_ * b + 0.5 * tau_ * d.dot(Hd);
}

ProductUpperBound::ProductUpperBound(SmoothFn h1, SmoothFn h2, Eigen::VectorXd y1, Eigen::VectorXd y2)
    : h1_(std::move(h1)), h2_(std::move(h2)), y1_(std::move(y1)), y2_(std::move(y2)) {
  h1y_ = h1_(y1_, &g1y_, nullptr);
  h2y_ = h2_(y2_, &g2y_, nullptr);
}

double ProductUpperBound::operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                                   Eigen::MatrixXd* hess) const {
  const int n1 = dim1(), n2 = dim2();
  if (x.size() != n1 + n2) throw std::invalid_argument("ProductUpperBound: dimension mismatch");
  const Eigen::VectorXd x1 = x.head(n1), x2 = x.tail(n2);
  Eigen::VectorXd g1, g2;
  Eigen::MatrixXd H1, H2;
  const bool need_g = grad || hess;
  const double a = h1_(x1, need_g ? &g1 : nullptr, hess ? &H1 : nullptr);
  const double b = h2_(x2, need_g ? &g2 : nullptr, hess ? &H2 : nullptr);
  // Remainders vanish identically at the expansion point.
  const double d1 = a - h1y_, d2 = b - h2y_;
  const double r1 = 0.5 * d1 * d1 + h1y_ * (d1 - g1y_.dot(x1 - y1_));
  const double r2 = 0.5 * d2 * d2 + h2y_ * (d2 - g2y_.dot(x2 - y2_));
  const double s = a + b;
  if (grad) {
    grad->resize(n1 + n2);
    grad->head(n1) = s * g1 - h1y_ * g1y_;
    grad->tail(n2) = s * g2 - h2y_ * g2y_;
  }
  if (hess) {
    hess->resize(n1 + n2, n1 + n2);
    hess->topLeftCorner(n1, n1) = g1 * g1.transpose() + s * H1;
    hess->bottomRightCorner(n2, n2) = g2 * g2.transpose() + s * H2;
    hess->topRightCorner(n1, n2) = g1 * g2.transpose();
    hess->bottomLeftCorner(n2, n1) = g2 * g1.transpose();
  }
  return a * b + r1 + r2;
}

namespace {

// c * (2^{x(i) * rate} - 1) on a single coordinate i of a vector of length dim.
SmoothFn exp2_term(int dim, int i, double c, double rate) {
  return [=](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
    const double e = std::exp2(x(i) * rate);
    const double d1 = c * M_LN2 * rate * e;
    if (g) { g->setZero(dim); (*g)(i) = d1; }
    if (H) { H->setZero(dim, dim); (*H)(i, i) = d1 * M_LN2 * rate; }
    return c * std::expm1(x(i) * rate * M_LN2);
  };
}

// scale^2 ((x(i) - cx)^2 + (x(i+1) - cy)^2) + c0, with (cx, cy) in scaled coordinates.
SmoothFn dist2_term(int dim, int i, double cx, double cy, double scale, double c0) {
  return [=](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
    const double dx = x(i) - cx, dy = x(i + 1) - cy, s2 = scale * scale;
    if (g) { g->setZero(dim); (*g)(i) = 2 * s2 * dx; (*g)(i + 1) = 2 * s2 * dy; }
    if (H) { H->setZero(dim, dim); (*H)(i, i) = (*H)(i + 1, i + 1) = 2 * s2; }
    return s2 * (dx * dx + dy * dy) + c0;
  };
}

double product_with_grad(const SmoothFn& f1, const SmoothFn& f2, const Eigen::VectorXd& x,
                         Eigen::VectorXd* grad) {
  Eigen::VectorXd g1, g2;
  const double a = f1(x, grad ? &g1 : nullptr, nullptr);
  const double b = f2(x, grad ? &g2 : nullptr, nullptr);
  if (grad) *grad = b * g1 + a * g2;
  return a * b;
}

}  // namespace

UavLeoEnergySurrogate::UavLeoEnergySurrogate(const MissionSpec& m, int frame, const Eigen::Vector3d& y,
                                             const SurrogateParams& p, const Units& u)
    : f1_(exp2_term(3, 0,
                    m.noise_density * m.slot_bandwidth_time() /
                        (m.reference_gain * m.orbit.antenna_gain) / u.energy,
                    u.bit / m.slot_bandwidth_time())),
      f2_([&] {
        if (frame < 1 || frame > static_cast<int>(m.orbit.ground_track.size()))
          throw std::out_of_range("no ground-track entry for frame");
        const Position3& leo = m.orbit.ground_track[frame - 1];
        const double hl = m.orbit.altitude_above_uav;
        return dist2_term(3, 1, leo.x / u.position, leo.y / u.position, u.position, hl * hl);
      }()),
      model_(f1_, f2_, y, 1.0,
             Eigen::Vector3d(p.tau_uplink_uav_leo, p.tau_position, p.tau_position).asDiagonal().toDenseMatrix()) {}

double UavLeoEnergySurrogate::original(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
  return product_with_grad(f1_, f2_, x, grad);
}

namespace {

SmoothFn linear_term(Eigen::VectorXd c) {
  return [c = std::move(c)](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
    if (g) *g = c;
    if (H) H->setZero(c.size(), c.size());
    return c.dot(x);
  };
}

SmoothFn squared_linear_term(Eigen::VectorXd w) {
  return [w = std::move(w)](const Eigen::VectorXd& x, Eigen::VectorXd* g, Eigen::MatrixXd* H) {
    const double s = w.dot(x);
    if (g) *g = 2 * s * w;
    if (H) *H = 2 * w * w.transpose();
    return s * s;
  };
}

void compute_weights(const MissionSpec& m, const std::vector<int>& sensors, const Units& u,
                     Eigen::VectorXd& c, Eigen::VectorXd& w) {
  const int M = static_cast<int>(sensors.size());
  c.resize(M);
  w.resize(M);
  for (int j = 0; j < M; ++j) {
    const int k = sensors[j];
    if (k < 1 || k > m.K()) throw std::out_of_range("sensor index out of range");
    const double C = m.sensors[k - 1].cycles_per_bit_uav;
    c(j) = m.gamma_uav * C * u.bit / (m.frame_duration * m.frame_duration) / u.energy;
    w(j) = C * u.bit;
  }
}

}  // namespace

ComputeEnergySurrogate::ComputeEnergySurrogate(const MissionSpec& m, std::vector<int> sensors, int member,
                                               const Eigen::VectorXd& y, const SurrogateParams& p,
                                               const Units& u)
    : f1_([&] {
        Eigen::VectorXd c, w;
        compute_weights(m, sensors, u, c, w);
        if (member < 0 || member >= c.size()) throw std::out_of_range("member out of range");
        Eigen::VectorXd e = Eigen::VectorXd::Zero(c.size());
        e(member) = c(member);
        return linear_term(e);
      }()),
      f2_([&] {
        Eigen::VectorXd c, w;
        compute_weights(m, sensors, u, c, w);
        return squared_linear_term(w);
      }()),
      model_(f1_, f2_, y, p.tau_compute, Eigen::MatrixXd::Identity(y.size(), y.size())) {}

double ComputeEnergySurrogate::original(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
  return product_with_grad(f1_, f2_, x, grad);
}

FrameComputeSurrogate::FrameComputeSurrogate(const MissionSpec& m, std::vector<int> sensors,
                                             const Eigen::VectorXd& y, const SurrogateParams& p,
                                             const Units& u)
    : y_(y), tau_(p.tau_compute), members_(static_cast<double>(sensors.size())) {
  compute_weights(m, sensors, u, c_, w_);
  if (y_.size() != c_.size()) throw std::invalid_argument("expansion size mismatch");
  if (!(tau_ > 0.0)) throw std::invalid_argument("proximal weight must be positive");
  const double s = w_.dot(y_);
  f2y_ = s * s;
  sum_f1y_ = c_.dot(y_);
}

double FrameComputeSurrogate::operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                                         Eigen::MatrixXd* hess) const {
  const double s = w_.dot(x);
  const Eigen::VectorXd d = x - y_;
  const double mt = members_ * tau_;
  if (grad) *grad = f2y_ * c_ + 2 * sum_f1y_ * s * w_ + mt * d;
  if (hess) {
    *hess = 2 * sum_f1y_ * w_ * w_.transpose();
    hess->diagonal().array() += mt;
  }
  return f2y_ * c_.dot(x) + sum_f1y_ * s * s + 0.5 * mt * d.squaredNorm();
}

double FrameComputeSurrogate::original(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const {
  const double s = w_.dot(x), a = c_.dot(x);
  if (grad) *grad = s * s * c_ + 2 * a * s * w_;
  return a * s * s;
}

BudgetSurrogate::BudgetSurrogate(const MissionSpec& m, int sensor, const Eigen::Vector3d& y, const Units& u)
    : scale_(m.noise_density * m.slot_bandwidth_time() / m.reference_gain * u.position * u.position),
      h1_(exp2_term(1, 0, 1.0, u.bit / m.slot_bandwidth_time())),
      h2_([&] {
        if (sensor < 1 || sensor > m.K()) throw std::out_of_range("sensor index out of range");
        const Position3& s = m.sensors[sensor - 1].position;
        const double hu = m.uav_altitude / u.position;
        return dist2_term(2, 0, s.x / u.position, s.y / u.position, 1.0, hu * hu);
      }()),
      model_(h1_, h2_, y.head<1>(), y.tail<2>()) {}

double BudgetSurrogate::operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) const {
  const double v = model_(x, grad, hess);
  if (grad) *grad *= scale_;
  if (hess) *hess *= scale_;
  return scale_ * v;
}

double BudgetSurrogate::original(const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) const {
  Eigen::VectorXd g1, g2;
  Eigen::MatrixXd H1, H2;
  const Eigen::VectorXd x1 = x.head(1), x2 = x.tail(2);
  const bool need_g = grad || hess;
  const double a = h1_(x1, need_g ? &g1 : nullptr, hess ? &H1 : nullptr);
  const double b = h2_(x2, need_g ? &g2 : nullptr, hess ? &H2 : nullptr);
  if (grad) {
    grad->resize(3);
    (*grad)(0) = scale_ * b * g1(0);
    grad->tail<2>() = scale_ * a * g2;
  }
  if (hess) {
    hess->resize(3, 3);
    (*hess)(0, 0) = b * H1(0, 0);
    hess->bottomRightCorner<2, 2>() = a * H2;
    hess->topRightCorner<1, 2>() = g1(0) * g2.transpose();
    hess->bottomLeftCorner<2, 1>() = g2 * g1(0);
    *hess *= scale_;
  }
  return scale_ * a * b;
}

}  // namespace msca
