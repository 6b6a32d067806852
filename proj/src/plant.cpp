#include "legimpact/plant.hpp"

#include <algorithm>
#include <stdexcept>

namespace legimpact {

void ContactSchedule::validate(int trajectory_steps) const {
  if (trigger_step < 0 || trigger_step >= trajectory_steps)
    throw std::invalid_argument("contact trigger_step must lie within the trajectory");
  if (ramp_steps < 1) throw std::invalid_argument("contact ramp_steps must be >= 1");
}

double ContactSchedule::ramp_scale(int step) const {
  if (step < trigger_step) return 0.0;
  return std::min(1.0, static_cast<double>(step - trigger_step + 1) / ramp_steps);
}

PlantOutput plant_step(const LegGeometry& geom, const TrajectoryTick& tick, int step_index,
                       const std::optional<ContactSchedule>& contact, const NoiseSpec& noise,
                       Rng& rng) {
  PlantOutput out;
  out.state = tick.state;
  out.torque_true = inverse_dynamics(geom, tick.state, tick.accel);

  if (contact) {
    const double scale = contact->ramp_scale(step_index);
    if (scale > 0.0) {
      out.contact_active = true;
      if (contact->mode == ContactMode::kTorqueOffset) {
        out.torque_true += scale * contact->force;
      } else {
        out.torque_true += scale * (jacobian(geom, tick.state).transpose() * contact->force);
      }
    }
  }

  const double u0 = rng.uniform();
  const double u1 = rng.uniform();
  const auto perturb = [&](double u) {
    return noise.symmetric ? noise.pct * (u - 0.5) : noise.pct * u;
  };
  out.torque_measured(0) = out.torque_true(0) * (1.0 + perturb(u0));
  out.torque_measured(1) = out.torque_true(1) * (1.0 + perturb(u1));
  return out;
}

}  // namespace legimpact
