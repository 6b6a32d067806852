#include "legimpact/impact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace legimpact {

void ImpactConfig::validate() const {
  if ((t_threshold.array() < 0).any())
    throw std::invalid_argument("t_threshold components must be >= 0");
  if (debounce_steps < 1) throw std::invalid_argument("debounce_steps must be >= 1");
}

Eigen::Vector2d torque_diff(const TorqueVector& t_f, const TorqueVector& t_p,
                            const ImpactConfig& cfg) {
  return ((t_f - t_p).cwiseAbs() - cfg.t_threshold).cwiseMax(0.0);
}

Eigen::Vector2d gamma_force_map(const Eigen::Vector2d& t_diff, const JointState& q,
                                const LegGeometry& geom) {
  constexpr double kMinLever = 0.1;  // cm
  const FootPoint foot = forward_kinematics(geom, q);
  const FootPoint knee(geom.l1 * std::cos(q.theta_h), geom.l1 * std::sin(q.theta_h));
  const double r_h = std::max(kMinLever, foot.norm());
  const double r_k = std::max(kMinLever, (foot - knee).norm());
  return {t_diff(0) / r_h, t_diff(1) / r_k};
}

ImpactEstimate ImpactDetector::update(int step, const TorqueVector& t_f, const TorqueVector& t_p,
                                      const JointState& q, const LegGeometry& geom) {
  ImpactEstimate est;
  est.t_diff = torque_diff(t_f, t_p, cfg_);
  est.force = gamma_force_map(est.t_diff, q, geom);
  return feed(step, est);
}

ImpactEstimate ImpactDetector::feed(int step, ImpactEstimate est) {
  const bool exceeded = (est.force.array() > 0.0).any();
  if (exceeded) {
    if (consecutive_ == 0) {
      run_start_ = step;
      run_peak_.setZero();
    }
    ++consecutive_;
    run_peak_ = run_peak_.cwiseMax(est.force);
    if (!latched_ && consecutive_ >= cfg_.debounce_steps) {
      latched_ = true;
      events_.push_back({run_start_, run_peak_});
    } else if (latched_) {
      events_.back().peak_force = run_peak_;
    }
  } else {
    consecutive_ = 0;
    latched_ = false;
  }
  est.collided = latched_;
  return est;
}

}  // namespace legimpact
