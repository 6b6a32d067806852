#pragma once

#include <optional>

#include "legimpact/leg_model.hpp"
#include "legimpact/rng.hpp"
#include "legimpact/trajectory.hpp"

namespace legimpact {

enum class ContactMode {
  kTorqueOffset,    // add the configured pair (N·cm) to the joint torques
  kJacobianForce,   // add Jᵀ·F for a world-frame force F (N)
};

// Injected contact, ramped linearly over ramp_steps ticks from trigger_step.
struct ContactSchedule {
  int trigger_step = 50;
  ContactMode mode = ContactMode::kJacobianForce;
  Eigen::Vector2d force{0.0, -8.0};  // world force (N) or torque offset (N·cm)
  int ramp_steps = 1;

  void validate(int trajectory_steps) const;  // throws std::invalid_argument
  double ramp_scale(int step) const;          // 0 before trigger, then up to 1
};

struct NoiseSpec {
  double pct = 0.10;       // measurement noise amplitude as a torque fraction
  bool symmetric = false;  // false: u ~ U[0, pct] (one-sided); true: U[-pct/2, pct/2]
};

struct PlantOutput {
  JointState state;             // realized joint state p_r
  TorqueVector torque_true;     // N·cm, includes contact torque
  TorqueVector torque_measured; // torque_true · (1 + u) componentwise
  bool contact_active = false;
};

// Advances the synthetic plant by one control tick. Exactly two noise draws
// are consumed from rng per call regardless of noise_pct, so torque changes
// at a fixed seed never shift the noise sequence.
PlantOutput plant_step(const LegGeometry& geom, const TrajectoryTick& tick, int step_index,
                       const std::optional<ContactSchedule>& contact, const NoiseSpec& noise,
                       Rng& rng);

}  // namespace legimpact
