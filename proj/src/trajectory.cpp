#include "legimpact/trajectory.hpp"

#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "legimpact/errors.hpp"

namespace legimpact {

void TrajectorySpec::validate() const {
  if (steps < 2) throw std::invalid_argument("trajectory needs at least 2 steps");
  if (tick_dt <= 0) throw std::invalid_argument("tick_dt must be positive");
  if (apex_height < 0) throw std::invalid_argument("apex_height must be >= 0");
  if ((start - end).norm() == 0.0) throw std::invalid_argument("start and end must differ");
}

std::vector<TrajectoryTick> generate_swing_trajectory(const TrajectorySpec& spec,
                                                      const LegGeometry& geom) {
  spec.validate();
  geom.validate();

  const double total_time = (spec.steps - 1) * spec.tick_dt;
  const Eigen::Vector2d span = spec.end - spec.start;

  std::vector<TrajectoryTick> ticks;
  ticks.reserve(spec.steps);

  for (int i = 0; i < spec.steps; ++i) {
    const double u = static_cast<double>(i) / (spec.steps - 1);
    // cycloidal progress: v' = 0 and v'' = 0 at both endpoints
    const double v = u - std::sin(2.0 * M_PI * u) / (2.0 * M_PI);
    const double dv = 1.0 - std::cos(2.0 * M_PI * u);
    const double ddv = 2.0 * M_PI * std::sin(2.0 * M_PI * u);

    const Eigen::Vector2d clearance(0.0, spec.apex_height * std::sin(M_PI * v));
    const Eigen::Vector2d pos = spec.start + span * v + clearance;

    Eigen::Vector2d dpos_dv = span;
    dpos_dv.y() += spec.apex_height * M_PI * std::cos(M_PI * v);
    const Eigen::Vector2d d2pos_dv2(0.0, -spec.apex_height * M_PI * M_PI * std::sin(M_PI * v));

    const Eigen::Vector2d vel = dpos_dv * dv / total_time;
    const Eigen::Vector2d acc =
        (d2pos_dv2 * dv * dv + dpos_dv * ddv) / (total_time * total_time);

    const double r = pos.norm();
    if (!(r > geom.reach_min() && r < geom.reach_max())) {
      throw UnreachablePoint("swing sample at tick " + std::to_string(i) +
                             " leaves the reachable annulus (r=" + std::to_string(r) + " cm)");
    }

    TrajectoryTick tick;
    tick.foot = pos;
    tick.state = inverse_kinematics(geom, pos);

    const Eigen::Matrix2d j = jacobian(geom, tick.state);
    const Eigen::Vector2d omega = j.inverse() * vel;
    tick.state.omega_h = omega(0);
    tick.state.omega_k = omega(1);
    tick.accel = j.inverse() * (acc - jacobian_dot(geom, tick.state) * omega);

    ticks.push_back(tick);
  }
  return ticks;
}

}  // namespace legimpact
