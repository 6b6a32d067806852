#pragma once

// Independent reference implementations used only by tests. Each one computes
// its result by a different route than the library code it checks.

#include <Eigen/Dense>
#include <vector>

#include "legimpact/leg_model.hpp"
#include "legimpact/mlp.hpp"

namespace oracles {

// Central finite differences of forward_kinematics, step 1e-6 rad.
Eigen::Matrix2d fd_jacobian(const legimpact::LegGeometry& geom, const legimpact::JointState& q,
                            double step = 1e-6);

// Energy-method inverse dynamics: builds the Lagrangian from COM positions
// (kinetic energy via finite-difference position Jacobians, potential energy
// from heights) and evaluates tau_i = d/dt(dL/dqd_i) - dL/dq_i numerically.
// Friction is added on top. Returns N·cm.
Eigen::Vector2d lagrangian_inverse_dynamics(const legimpact::LegGeometry& geom,
                                            const legimpact::JointState& q,
                                            const Eigen::Vector2d& accel);

// Plain double-loop evaluation of the network (no Eigen in the math path).
Eigen::VectorXd naive_mlp_eval(const legimpact::Network& net, const Eigen::VectorXd& input);

// Central finite differences of the training loss over the flattened
// parameter vector.
Eigen::VectorXd fd_loss_gradient(legimpact::Network net, const Eigen::MatrixXd& x_norm,
                                 const Eigen::MatrixXd& t_norm, double step = 1e-6);

// Textbook linear Kalman filter on the random-walk system x' = x + u + w,
// z = x + v (A = I, H = I).
struct LinearKf {
  Eigen::VectorXd x;
  Eigen::MatrixXd p;

  void predict(const Eigen::VectorXd& u, const Eigen::MatrixXd& q) {
    x += u;
    p += q;
  }
  void update(const Eigen::VectorXd& z, const Eigen::MatrixXd& r) {
    const Eigen::MatrixXd s = p + r;
    const Eigen::MatrixXd k = p * s.inverse();
    x += k * (z - x);
    p -= k * s * k.transpose();
  }
};

}  // namespace oracles
