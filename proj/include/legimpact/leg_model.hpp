#pragma once

#include <Eigen/Core>

namespace legimpact {

using TorqueVector = Eigen::Vector2d;  // (hip, knee) in N·cm
using FootPoint = Eigen::Vector2d;     // leg-plane (x, z) in cm

// Two-link planar leg, hip at the origin.
//
// Angle convention (used everywhere in this repo): theta_h is the hip angle
// measured from the +x axis, positive counterclockwise; theta_k is the knee
// angle of link 2 relative to link 1. z points up, gravity acts along -z.
struct LegGeometry {
  double l1 = 25.0;          // link-1 length (cm)
  double l2 = 25.0;          // link-2 length (cm)
  double m1 = 1.2;           // link-1 mass (kg)
  double m2 = 0.8;           // link-2 mass (kg)
  double com1 = 12.5;        // link-1 COM distance from hip (cm)
  double com2 = 12.5;        // link-2 COM distance from knee (cm)
  double i1 = 62.5;          // link-1 inertia about its COM (kg·cm²), uniform rod default
  double i2 = 125.0 / 3.0;   // link-2 inertia about its COM (kg·cm²)
  double b_h = 0.5;          // hip viscous friction (N·cm·s/rad)
  double b_k = 0.5;          // knee viscous friction (N·cm·s/rad)
  double gravity = 981.0;    // (cm/s²)

  double reach_min() const { return std::abs(l1 - l2); }
  double reach_max() const { return l1 + l2; }

  // throws std::invalid_argument on a non-physical geometry
  void validate() const;
};

struct JointState {
  double theta_h = 0.0;  // rad
  double theta_k = 0.0;  // rad
  double omega_h = 0.0;  // rad/s
  double omega_k = 0.0;  // rad/s
};

FootPoint forward_kinematics(const LegGeometry& geom, const JointState& q);

// Analytic d(foot)/d(theta_h, theta_k) of forward_kinematics, entries in cm.
// Singular configurations (theta_k = 0 or pi) are legal outputs.
Eigen::Matrix2d jacobian(const LegGeometry& geom, const JointState& q);

// d/dt of the Jacobian at (q, omega); used to map foot accelerations to
// joint accelerations.
Eigen::Matrix2d jacobian_dot(const LegGeometry& geom, const JointState& q);

// Closed-form IK, always the theta_k in [0, pi] branch (with the foot below
// the hip this is the trailing-knee posture). Velocities are left zero.
// Throws NoIkSolution when the point is outside the reachable annulus.
JointState inverse_kinematics(const LegGeometry& geom, const FootPoint& foot);

// Rigid-body torque tau = M(theta)·thetadd + C(theta, omega)·omega + G(theta)
// + B·omega for the planar 2R chain, returned in N·cm.
TorqueVector inverse_dynamics(const LegGeometry& geom, const JointState& q,
                              const Eigen::Vector2d& accel);

}  // namespace legimpact
