#include <doctest.h>

#include <cmath>

#include "legimpact/errors.hpp"
#include "legimpact/trajectory.hpp"

using namespace legimpact;

TEST_CASE("identical endpoints are rejected") {
  TrajectorySpec spec;
  spec.start = spec.end = {10.0, -30.0};
  CHECK_THROWS_AS(generate_swing_trajectory(spec, LegGeometry{}), std::invalid_argument);
}

TEST_CASE("straight-down step lands on the target") {
  TrajectorySpec spec;
  spec.start = {20.0, -25.0};
  spec.end = {20.0, -38.0};
  spec.apex_height = 5.0;
  spec.steps = 100;

  const auto ticks = generate_swing_trajectory(spec, LegGeometry{});
  REQUIRE(ticks.size() == 100);
  const FootPoint last = forward_kinematics(LegGeometry{}, ticks.back().state);
  CHECK((last - spec.end).norm() < 1e-6);
  const FootPoint first = forward_kinematics(LegGeometry{}, ticks.front().state);
  CHECK((first - spec.start).norm() < 1e-6);
}

TEST_CASE("endpoints have zero velocity and acceleration") {
  TrajectorySpec spec;
  const auto ticks = generate_swing_trajectory(spec, LegGeometry{});
  for (const TrajectoryTick* tick : {&ticks.front(), &ticks.back()}) {
    CHECK(std::abs(tick->state.omega_h) < 1e-12);
    CHECK(std::abs(tick->state.omega_k) < 1e-12);
    CHECK(tick->accel.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("swing clears the chord by the configured apex") {
  TrajectorySpec spec;
  spec.start = {-15.0, -40.0};
  spec.end = {15.0, -40.0};
  spec.apex_height = 8.0;
  const auto ticks = generate_swing_trajectory(spec, LegGeometry{});
  double peak = -1e9;
  for (const auto& tick : ticks) peak = std::max(peak, tick.foot.y());
  CHECK(peak == doctest::Approx(-40.0 + 8.0).epsilon(1e-3));
}

TEST_CASE("below-ground endpoint depth is generated fine at plant scale") {
  // endpoint z set below the ground plane (the -460 mm setup scaled to this
  // 50 cm leg): reachable, so the swing generates without error
  TrajectorySpec spec;
  spec.start = {-12.0, -40.0};
  spec.end = {12.0, -46.0};
  spec.apex_height = 6.0;
  const auto ticks = generate_swing_trajectory(spec, LegGeometry{});
  const FootPoint last = forward_kinematics(LegGeometry{}, ticks.back().state);
  CHECK(last.y() == doctest::Approx(-46.0).epsilon(1e-9));
}

TEST_CASE("samples outside the annulus raise UnreachablePoint") {
  TrajectorySpec spec;
  spec.start = {-20.0, -40.0};
  spec.end = {20.0, -40.0};
  spec.apex_height = 95.0;  // apex pushes the path beyond full extension
  CHECK_THROWS_AS(generate_swing_trajectory(spec, LegGeometry{}), UnreachablePoint);

  spec.apex_height = 5.0;
  spec.end = {49.0, -10.0};  // endpoint just past full reach
  CHECK_THROWS_AS(generate_swing_trajectory(spec, LegGeometry{}), UnreachablePoint);

  // inner boundary with uneven links: the path crosses too close to the hip
  LegGeometry uneven;
  uneven.l2 = 10.0;
  uneven.com2 = 5.0;
  spec.start = {-20.0, -20.0};
  spec.end = {20.0, -20.0};
  spec.apex_height = 12.0;
  CHECK_THROWS_AS(generate_swing_trajectory(spec, uneven), UnreachablePoint);
}

TEST_CASE("joint velocities are consistent with finite differences of angles") {
  TrajectorySpec spec;
  spec.steps = 400;
  const auto ticks = generate_swing_trajectory(spec, LegGeometry{});
  for (size_t i = 1; i + 1 < ticks.size(); ++i) {
    const double fd_h =
        (ticks[i + 1].state.theta_h - ticks[i - 1].state.theta_h) / (2.0 * spec.tick_dt);
    const double fd_k =
        (ticks[i + 1].state.theta_k - ticks[i - 1].state.theta_k) / (2.0 * spec.tick_dt);
    CHECK(ticks[i].state.omega_h == doctest::Approx(fd_h).epsilon(5e-3).scale(1.0));
    CHECK(ticks[i].state.omega_k == doctest::Approx(fd_k).epsilon(5e-3).scale(1.0));
  }
}
