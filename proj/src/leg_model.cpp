#include "legimpact/leg_model.hpp"

#include <cmath>
#include <stdexcept>

#include "legimpact/errors.hpp"

namespace legimpact {

void LegGeometry::validate() const {
  if (l1 <= 0 || l2 <= 0) throw std::invalid_argument("link lengths must be positive");
  if (m1 <= 0 || m2 <= 0) throw std::invalid_argument("link masses must be positive");
  if (i1 <= 0 || i2 <= 0) throw std::invalid_argument("link inertias must be positive");
  if (com1 <= 0 || com1 > l1) throw std::invalid_argument("com1 must be in (0, l1]");
  if (com2 <= 0 || com2 > l2) throw std::invalid_argument("com2 must be in (0, l2]");
  if (b_h < 0 || b_k < 0) throw std::invalid_argument("friction coefficients must be >= 0");
}

FootPoint forward_kinematics(const LegGeometry& geom, const JointState& q) {
  const double a = q.theta_h;
  const double ab = q.theta_h + q.theta_k;
  return {geom.l1 * std::cos(a) + geom.l2 * std::cos(ab),
          geom.l1 * std::sin(a) + geom.l2 * std::sin(ab)};
}

Eigen::Matrix2d jacobian(const LegGeometry& geom, const JointState& q) {
  const double s1 = std::sin(q.theta_h), c1 = std::cos(q.theta_h);
  const double s12 = std::sin(q.theta_h + q.theta_k);
  const double c12 = std::cos(q.theta_h + q.theta_k);
  Eigen::Matrix2d j;
  j << -geom.l1 * s1 - geom.l2 * s12, -geom.l2 * s12,
        geom.l1 * c1 + geom.l2 * c12,  geom.l2 * c12;
  return j;
}

Eigen::Matrix2d jacobian_dot(const LegGeometry& geom, const JointState& q) {
  const double s1 = std::sin(q.theta_h), c1 = std::cos(q.theta_h);
  const double s12 = std::sin(q.theta_h + q.theta_k);
  const double c12 = std::cos(q.theta_h + q.theta_k);
  const double w1 = q.omega_h;
  const double w12 = q.omega_h + q.omega_k;
  Eigen::Matrix2d jd;
  jd << -geom.l1 * c1 * w1 - geom.l2 * c12 * w12, -geom.l2 * c12 * w12,
        -geom.l1 * s1 * w1 - geom.l2 * s12 * w12, -geom.l2 * s12 * w12;
  return jd;
}

JointState inverse_kinematics(const LegGeometry& geom, const FootPoint& foot) {
  const double r2 = foot.squaredNorm();
  const double cos_k =
      (r2 - geom.l1 * geom.l1 - geom.l2 * geom.l2) / (2.0 * geom.l1 * geom.l2);
  if (cos_k < -1.0 || cos_k > 1.0) {
    throw NoIkSolution("foot point outside the reachable annulus");
  }
  JointState q;
  q.theta_k = std::acos(cos_k);  // [0, pi] branch, never switches
  q.theta_h = std::atan2(foot.y(), foot.x()) -
              std::atan2(geom.l2 * std::sin(q.theta_k),
                         geom.l1 + geom.l2 * std::cos(q.theta_k));
  return q;
}

TorqueVector inverse_dynamics(const LegGeometry& geom, const JointState& q,
                              const Eigen::Vector2d& accel) {
  // Internally SI (m, kg, N·m); inputs/outputs keep the repo's cm / N·cm units.
  const double l1 = geom.l1 * 1e-2;
  const double lc1 = geom.com1 * 1e-2;
  const double lc2 = geom.com2 * 1e-2;
  const double i1 = geom.i1 * 1e-4;  // kg·cm² -> kg·m²
  const double i2 = geom.i2 * 1e-4;
  const double g = geom.gravity * 1e-2;
  const double m1 = geom.m1, m2 = geom.m2;

  const double c2 = std::cos(q.theta_k), s2 = std::sin(q.theta_k);
  const double c1 = std::cos(q.theta_h);
  const double c12 = std::cos(q.theta_h + q.theta_k);

  Eigen::Matrix2d mass;
  mass(0, 0) = m1 * lc1 * lc1 + i1 + i2 +
               m2 * (l1 * l1 + lc2 * lc2 + 2.0 * l1 * lc2 * c2);
  mass(0, 1) = i2 + m2 * (lc2 * lc2 + l1 * lc2 * c2);
  mass(1, 0) = mass(0, 1);
  mass(1, 1) = i2 + m2 * lc2 * lc2;

  const double h = m2 * l1 * lc2 * s2;
  const double w1 = q.omega_h, w2 = q.omega_k;
  Eigen::Vector2d coriolis;
  coriolis(0) = -h * w2 * (2.0 * w1 + w2);
  coriolis(1) = h * w1 * w1;

  Eigen::Vector2d grav;
  grav(0) = (m1 * lc1 + m2 * l1) * g * c1 + m2 * lc2 * g * c12;
  grav(1) = m2 * lc2 * g * c12;

  const Eigen::Vector2d tau_nm = mass * accel + coriolis + grav;
  // friction acts in N·cm directly
  Eigen::Vector2d friction(geom.b_h * w1, geom.b_k * w2);
  return tau_nm * 100.0 + friction;
}

}  // namespace legimpact
