#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

#include "msca/energy.hpp"
#include "msca/plan.hpp"
#include "msca/surrogates.hpp"

namespace msca {

struct DecisionVector {
  BitAllocation bits;
  Trajectory path;

  bool operator==(const DecisionVector& o) const {
    return bits == o.bits && path.waypoints == o.path.waypoints;
  }
};

Eigen::MatrixXd& bits_of(BitAllocation& a, Family f);
const Eigen::MatrixXd& bits_of(const BitAllocation& a, Family f);

// Which blocks of the decision vector are optimized; the rest stay at the expansion.
struct SchemeMask {
  bool bits_free = true;
  bool path_free = true;
};

// Map between free decision entries and a flat vector in working units.
class VariableLayout {
 public:
  VariableLayout(const ScenarioPlan& plan, int frame_count, const SchemeMask& mask);

  // Index of (sensor k 0-based, family, frame 1-based), or -1 if not free.
  int bit(int k, Family f, int frame) const;
  // Index of waypoint coordinate (waypoint 1..N+1, axis 0 = x, 1 = y), or -1.
  int position(int waypoint, int axis) const;
  int size() const { return size_; }
  const SchemeMask& mask() const { return mask_; }

  Eigen::VectorXd pack(const DecisionVector& z, const Units& units) const;
  // Writes free entries of `v` into `z`; bits are clamped at zero.
  void unpack(const Eigen::VectorXd& v, const Units& units, DecisionVector& z) const;

 private:
  int frames_;
  SchemeMask mask_;
  std::vector<std::array<int, kFamilyCount>> first_;  // index of the window's first frame
  std::vector<std::array<FrameWindow, kFamilyCount>> windows_;
  std::vector<int> pos_;  // 2 * (N+1)
  int size_ = 0;
};

struct FeasibilityReport {
  double max_violation = 0;  // working units: Mbit, km, budget and speed relative
  std::string worst;         // description of the largest violation
};

// Every constraint of the scenario problem at z, including the last prefix rows and the
// zero pattern outside the index windows.
FeasibilityReport check_feasibility(const DecisionVector& z, const ScenarioPlan& plan,
                                    const MissionSpec& mission, const Units& units = {});

// |z_hat - z|_2 over packed vectors of equal length.
double stationarity_residual(const Eigen::VectorXd& z, const Eigen::VectorXd& z_hat);

}  // namespace msca
