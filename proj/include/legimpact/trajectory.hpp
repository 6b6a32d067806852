#pragma once

#include <vector>

#include "legimpact/leg_model.hpp"

namespace legimpact {

// One swing from foot position A to B. The horizontal progress follows a
// cycloidal profile (zero velocity and acceleration at both ends) and the
// vertical coordinate adds a half-sine clearance of apex_height on top of
// the straight A->B interpolation.
struct TrajectorySpec {
  FootPoint start{-15.0, -40.0};  // A (cm)
  FootPoint end{15.0, -40.0};     // B (cm)
  double apex_height = 8.0;       // swing clearance (cm)
  int steps = 100;                // tick count
  double tick_dt = 0.02;          // control period (s)

  void validate() const;  // throws std::invalid_argument
};

struct TrajectoryTick {
  JointState state;       // angles + velocities at the tick
  Eigen::Vector2d accel;  // joint accelerations (rad/s²)
  FootPoint foot;         // planned foot position (cm)
};

// Samples the swing path, runs IK (theta_k in [0, pi] branch) and maps foot
// velocity/acceleration to joint space analytically. First and last tick have
// zero velocity and acceleration.
// Throws UnreachablePoint if any sample leaves the open reachable annulus.
std::vector<TrajectoryTick> generate_swing_trajectory(const TrajectorySpec& spec,
                                                      const LegGeometry& geom);

}  // namespace legimpact
