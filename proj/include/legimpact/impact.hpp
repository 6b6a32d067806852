#pragma once

#include <vector>

#include "legimpact/leg_model.hpp"

namespace legimpact {

struct ImpactConfig {
  Eigen::Vector2d t_threshold{1.0, 1.0};  // model-error compensation (N·cm)
  int debounce_steps = 2;                 // consecutive exceedances before latching

  void validate() const;  // throws std::invalid_argument
};

// max(0, |t_f − t_p| − threshold) componentwise
Eigen::Vector2d torque_diff(const TorqueVector& t_f, const TorqueVector& t_p,
                            const ImpactConfig& cfg);

// Torque excess to per-joint impact intensity: divide by the instantaneous
// joint-to-foot lever arm (hip→foot and knee→foot distances, clamped to
// 0.1 cm). N·cm over cm gives N.
Eigen::Vector2d gamma_force_map(const Eigen::Vector2d& t_diff, const JointState& q,
                                const LegGeometry& geom);

struct ImpactEstimate {
  Eigen::Vector2d t_diff{0.0, 0.0};
  Eigen::Vector2d force{0.0, 0.0};
  bool collided = false;  // latched state at this tick
};

struct ImpactEvent {
  int step = 0;                          // first tick of the exceedance run
  Eigen::Vector2d peak_force{0.0, 0.0};  // running peak per joint over the run
};

// Per-run latch: a collision event opens after debounce_steps consecutive
// ticks with any force component > 0 and closes when the force returns to
// zero. One detector instance per estimate stream.
class ImpactDetector {
 public:
  explicit ImpactDetector(const ImpactConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

  // consumes one estimate, returns it with the latched flag filled in
  ImpactEstimate feed(int step, ImpactEstimate est);

  // convenience: torque_diff -> gamma_force_map -> feed
  ImpactEstimate update(int step, const TorqueVector& t_f, const TorqueVector& t_p,
                        const JointState& q, const LegGeometry& geom);

  bool latched() const { return latched_; }
  const std::vector<ImpactEvent>& events() const { return events_; }

 private:
  ImpactConfig cfg_;
  int consecutive_ = 0;
  int run_start_ = -1;
  bool latched_ = false;
  Eigen::Vector2d run_peak_{0.0, 0.0};
  std::vector<ImpactEvent> events_;
};

}  // namespace legimpact
