#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "msca/mission.hpp"

namespace msca {

// Value with optional gradient and Hessian outputs (either may be null).
using SmoothFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess)>;

// Product-of-convex objective model: f1(x) f2(y) + f1(y) f2(x) + tau/2 (x-y)' H (x-y).
// Matches the gradient of f1*f2 at y; its value there is 2 f1(y) f2(y).
class ProductSurrogate {
 public:
  ProductSurrogate(SmoothFn f1, SmoothFn f2, Eigen::VectorXd y, double tau, Eigen::MatrixXd H);
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr,
                    Eigen::MatrixXd* hess = nullptr) const;
  const Eigen::VectorXd& expansion() const { return y_; }

 private:
  SmoothFn f1_, f2_;
  Eigen::VectorXd y_;
  double tau_;
  Eigen::MatrixXd H_;
  double f1y_, f2y_;
};

// Upper bound of h1(x1) h2(x2), tight at (y1, y2):
// 1/2 (h1 + h2)^2 - 1/2 (h1(y1)^2 + h2(y2)^2) - h1(y1) h1'(y1)(x1-y1) - h2(y2) h2'(y2)(x2-y2).
// Evaluated as h1 h2 + R1 + R2 with R_i >= 0 the linearization remainders of h_i^2 / 2.
class ProductUpperBound {
 public:
  ProductUpperBound(SmoothFn h1, SmoothFn h2, Eigen::VectorXd y1, Eigen::VectorXd y2);
  // x = [x1; x2].
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr,
                    Eigen::MatrixXd* hess = nullptr) const;
  int dim1() const { return static_cast<int>(y1_.size()); }
  int dim2() const { return static_cast<int>(y2_.size()); }

 private:
  SmoothFn h1_, h2_;
  Eigen::VectorXd y1_, y2_;
  double h1y_, h2y_;
  Eigen::VectorXd g1y_, g2y_;
};

// Working units: variables are bits / bit and metres / position; objective values are
// joules / energy.
struct Units {
  double bit = 1e6;
  double position = 1e3;
  double energy = 1e3;
};

// Proximal weights in working units: 1e-6 times a squared typical magnitude of 10
// (Mbit or km).
struct SurrogateParams {
  double tau_uplink_uav_leo = 1e-4;
  double tau_position = 1e-4;
  double tau_compute = 1e-4;
  // Bit families that appear in no objective term (sensor uplink, LEO compute and
  // downlink) get a plain proximal term so the inner minimizer is unique.
  double tau_auxiliary = 1e-4;
};

// UAV->LEO transmit energy of one sensor in one frame; local variables (L, x, y).
class UavLeoEnergySurrogate {
 public:
  UavLeoEnergySurrogate(const MissionSpec& mission, int frame, const Eigen::Vector3d& expansion,
                        const SurrogateParams& params, const Units& units = {});
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr,
                    Eigen::MatrixXd* hess = nullptr) const { return model_(x, grad, hess); }
  // Exact energy in the same units.
  double original(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr) const;

 private:
  SmoothFn f1_, f2_;
  ProductSurrogate model_;
};

// UAV computation energy of sensor `member` among the sensors computing in one frame;
// local variables are the bits of every member.
class ComputeEnergySurrogate {
 public:
  ComputeEnergySurrogate(const MissionSpec& mission, std::vector<int> sensors, int member,
                         const Eigen::VectorXd& expansion, const SurrogateParams& params,
                         const Units& units = {});
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr,
                    Eigen::MatrixXd* hess = nullptr) const { return model_(x, grad, hess); }
  double original(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr) const;

 private:
  SmoothFn f1_, f2_;
  ProductSurrogate model_;
};

// Sum of ComputeEnergySurrogate over all members of the frame, built from one shared
// expansion of the load (no per-member recomputation of the coupling sum).
class FrameComputeSurrogate {
 public:
  FrameComputeSurrogate(const MissionSpec& mission, std::vector<int> sensors,
                        const Eigen::VectorXd& expansion, const SurrogateParams& params,
                        const Units& units = {});
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr,
                    Eigen::MatrixXd* hess = nullptr) const;
  double original(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr) const;

 private:
  Eigen::VectorXd c_;  // gamma C_k bit / Delta^2 / energy, so f1_k = c_k l_k
  Eigen::VectorXd w_;  // C_k bit, so f2 = (w . l)^2
  Eigen::VectorXd y_;
  double f2y_, sum_f1y_, tau_, members_;
};

// Sensor uplink energy in joules on local variables (L, x, y), with the position
// factor measured in (units.position)^2.
class BudgetSurrogate {
 public:
  BudgetSurrogate(const MissionSpec& mission, int sensor, const Eigen::Vector3d& expansion,
                  const Units& units = {});
  double operator()(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr,
                    Eigen::MatrixXd* hess = nullptr) const;
  double original(const Eigen::VectorXd& x, Eigen::VectorXd* grad = nullptr,
                  Eigen::MatrixXd* hess = nullptr) const;

 private:
  double scale_;  // N_0 slot / g_0 * position^2
  SmoothFn h1_, h2_;
  ProductUpperBound model_;
};

}  // namespace msca
