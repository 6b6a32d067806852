#include <doctest.h>

#include <cmath>

#include "legimpact/errors.hpp"
#include "legimpact/leg_model.hpp"
#include "legimpact/rng.hpp"
#include "oracles.hpp"

using namespace legimpact;

namespace {

LegGeometry default_geom() { return LegGeometry{}; }

JointState random_state(Rng& rng) {
  JointState q;
  q.theta_h = rng.uniform(-M_PI, M_PI);
  q.theta_k = rng.uniform(-M_PI, M_PI);
  q.omega_h = rng.uniform(-4.0, 4.0);
  q.omega_k = rng.uniform(-4.0, 4.0);
  return q;
}

}  // namespace

TEST_CASE("forward kinematics at reference poses") {
  const LegGeometry geom = default_geom();

  FootPoint p = forward_kinematics(geom, {0.0, 0.0, 0, 0});
  CHECK(p.x() == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(p.y() == doctest::Approx(0.0).epsilon(1e-12));

  p = forward_kinematics(geom, {M_PI / 2, 0.0, 0, 0});
  CHECK(p.x() == doctest::Approx(0.0).scale(1).epsilon(1e-12));
  CHECK(p.y() == doctest::Approx(50.0).epsilon(1e-12));

  p = forward_kinematics(geom, {0.0, M_PI / 2, 0, 0});
  CHECK(p.x() == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(p.y() == doctest::Approx(25.0).epsilon(1e-12));
}

TEST_CASE("analytic jacobian matches the finite-difference oracle") {
  const LegGeometry geom = default_geom();

  // right-angle knee, value frozen from the oracle
  const JointState bent{0.0, M_PI / 2, 0, 0};
  const Eigen::Matrix2d expected = (Eigen::Matrix2d() << -25.0, -25.0, 25.0, 0.0).finished();
  CHECK((oracles::fd_jacobian(geom, bent) - expected).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((jacobian(geom, bent) - expected).cwiseAbs().maxCoeff() < 1e-9);

  Rng rng(42);
  for (int i = 0; i < 1000; ++i) {
    const JointState q = random_state(rng);
    const Eigen::Matrix2d analytic = jacobian(geom, q);
    const Eigen::Matrix2d fd = oracles::fd_jacobian(geom, q);
    const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
    CHECK((analytic - fd).cwiseAbs().maxCoeff() / scale < 1e-4);
  }
}

TEST_CASE("straight leg is singular") {
  const LegGeometry geom = default_geom();
  CHECK(jacobian(geom, {0.7, 0.0, 0, 0}).determinant() == doctest::Approx(0.0).scale(1).epsilon(1e-9));
}

TEST_CASE("inverse dynamics: equilibrium and statics") {
  LegGeometry geom = default_geom();

  geom.gravity = 0.0;
  const TorqueVector zero = inverse_dynamics(geom, {0.3, 0.8, 0, 0}, Eigen::Vector2d::Zero());
  CHECK(zero.cwiseAbs().maxCoeff() == doctest::Approx(0.0).scale(1).epsilon(1e-12));

  // static leg: only the gravity term remains
  geom.gravity = 981.0;
  const JointState q{-1.9, 1.3, 0, 0};
  const TorqueVector tau = inverse_dynamics(geom, q, Eigen::Vector2d::Zero());
  const double g = 9.81;
  const double c1 = std::cos(q.theta_h), c12 = std::cos(q.theta_h + q.theta_k);
  const double expected_h = ((geom.m1 * 0.125 + geom.m2 * 0.25) * g * c1 +
                             geom.m2 * 0.125 * g * c12) * 100.0;
  const double expected_k = geom.m2 * 0.125 * g * c12 * 100.0;
  CHECK(tau(0) == doctest::Approx(expected_h).epsilon(1e-10));
  CHECK(tau(1) == doctest::Approx(expected_k).epsilon(1e-10));
}

TEST_CASE("inverse dynamics matches the energy-method oracle") {
  const LegGeometry geom = default_geom();
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const JointState q = random_state(rng);
    const Eigen::Vector2d accel(rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0));
    const TorqueVector tau = inverse_dynamics(geom, q, accel);
    const Eigen::Vector2d ref = oracles::lagrangian_inverse_dynamics(geom, q, accel);
    const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    CHECK((tau - ref).cwiseAbs().maxCoeff() / scale < 1e-3);
  }
}

TEST_CASE("coriolis torques do no net work over a closed knee loop") {
  LegGeometry geom = default_geom();
  geom.gravity = 0.0;
  geom.b_h = geom.b_k = 0.0;

  // constant omega, theta_k sweeps a full turn; integrate tau·omega dt
  const double wh = 0.7, wk = 1.3;
  const int n = 20000;
  const double period = 2.0 * M_PI / wk;
  const double dt = period / n;
  double work = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) * dt;
    const JointState q{0.4 + wh * t, wk * t, wh, wk};
    const TorqueVector tau = inverse_dynamics(geom, q, Eigen::Vector2d::Zero());
    work += (tau(0) * wh + tau(1) * wk) * dt;
  }
  CHECK(std::abs(work) < 1e-3);
}

TEST_CASE("FK/IK round trip over random reachable points") {
  const LegGeometry geom = default_geom();
  Rng rng(11);
  int checked = 0;
  while (checked < 1000) {
    const double r = rng.uniform(geom.reach_min() + 1.0, geom.reach_max() - 1.0);
    const double phi = rng.uniform(-M_PI, M_PI);
    const FootPoint target(r * std::cos(phi), r * std::sin(phi));
    const JointState q = inverse_kinematics(geom, target);
    CHECK(q.theta_k >= 0.0);
    CHECK(q.theta_k <= M_PI);
    const FootPoint back = forward_kinematics(geom, q);
    CHECK((back - target).norm() < 1e-6);
    ++checked;
  }
}

TEST_CASE("IK rejects unreachable points") {
  const LegGeometry geom = default_geom();
  CHECK_THROWS_AS(inverse_kinematics(geom, {80.0, 0.0}), NoIkSolution);
  LegGeometry uneven = geom;
  uneven.l2 = 10.0;
  CHECK_THROWS_AS(inverse_kinematics(uneven, {2.0, 0.0}), NoIkSolution);
}

TEST_CASE("geometry validation") {
  LegGeometry geom = default_geom();
  geom.m1 = -1.0;
  CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
  geom = default_geom();
  geom.com2 = geom.l2 + 1.0;
  CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
  geom = default_geom();
  geom.b_h = -0.1;
  CHECK_THROWS_AS(geom.validate(), std::invalid_argument);
}
