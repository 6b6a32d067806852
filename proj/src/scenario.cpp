#include "legimpact/scenario.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace legimpact {

void ScenarioConfig::validate() const {
  geometry.validate();
  trajectory.validate();
  if (contact) contact->validate(trajectory.steps);
  if (noise.pct < 0) throw std::invalid_argument("noise pct must be >= 0");
  ukf.validate();
  impact.validate();
  if (auto_margin < 1.0) throw std::invalid_argument("auto_margin must be >= 1");
  if (calibration_runs < 1) throw std::invalid_argument("calibration_runs must be >= 1");
}

RunRecord run_scenario_with_threshold(const ScenarioConfig& cfg, const Predictor& predictor,
                                      const Eigen::Vector2d& threshold) {
  cfg.validate();

  const std::vector<TrajectoryTick> ticks = generate_swing_trajectory(cfg.trajectory, cfg.geometry);

  Rng plant_rng(derive_seed(cfg.seed, 11));
  UkfFilter filter(cfg.ukf, derive_seed(cfg.seed, 12));
  filter.initialize(ticks.front().state, predictor);

  ImpactConfig impact_cfg = cfg.impact;
  impact_cfg.t_threshold = threshold;
  ImpactDetector detector(impact_cfg);

  RunRecord record;
  record.threshold_used = threshold;
  record.rows.reserve(ticks.size());

  for (int step = 0; step < static_cast<int>(ticks.size()); ++step) {
    const PlantOutput plant = plant_step(cfg.geometry, ticks[step], step, cfg.contact,
                                         cfg.noise, plant_rng);
    const StepTrace trace = filter.step(plant.state, plant.torque_measured, predictor);
    const ImpactEstimate est =
        detector.update(step, filter.state().t_f, trace.t_p, plant.state, cfg.geometry);

    TickRow row;
    row.step = step;
    row.state = plant.state;
    row.t_true = plant.torque_true;
    row.t_m = plant.torque_measured;
    row.t_p = trace.t_p;
    row.t_f = filter.state().t_f;
    row.innovation = trace.innovation;
    row.cp00 = filter.state().c_p(0, 0);
    row.cp01 = filter.state().c_p(0, 1);
    row.cp11 = filter.state().c_p(1, 1);
    row.t_diff = est.t_diff;
    row.force = est.force;
    row.contact_active = plant.contact_active;
    row.latched = est.collided;
    record.rows.push_back(row);

    if (cfg.stop_on_collision && est.collided) break;
  }

  record.events = detector.events();
  return record;
}

Eigen::Vector2d calibrate_threshold(const ScenarioConfig& cfg, int n_runs,
                                    const Predictor& predictor) {
  if (n_runs < 1) throw std::invalid_argument("calibration needs n_runs >= 1");

  ScenarioConfig calib = cfg;
  calib.contact.reset();
  calib.stop_on_collision = false;

  Eigen::Vector2d max_diff(0.0, 0.0);
  const Eigen::Vector2d huge =
      Eigen::Vector2d::Constant(std::numeric_limits<double>::max());
  for (int run = 0; run < n_runs; ++run) {
    calib.seed = derive_seed(cfg.seed, 100 + static_cast<uint64_t>(run));
    const RunRecord record = run_scenario_with_threshold(calib, predictor, huge);
    for (const TickRow& row : record.rows) {
      max_diff = max_diff.cwiseMax((row.t_f - row.t_p).cwiseAbs());
    }
  }
  return max_diff * cfg.auto_margin;
}

RunRecord run_scenario(const ScenarioConfig& cfg, const Predictor& predictor) {
  const Eigen::Vector2d threshold = cfg.threshold_mode == ThresholdMode::kFixed
                                        ? Eigen::Vector2d(cfg.impact.t_threshold)
                                        : calibrate_threshold(cfg, cfg.calibration_runs, predictor);
  return run_scenario_with_threshold(cfg, predictor, threshold);
}

std::optional<int> SummaryStats::max_latency() const {
  if (latencies.empty()) return std::nullopt;
  return *std::max_element(latencies.begin(), latencies.end());
}

SummaryStats summarize(const std::vector<RunRecord>& records, std::optional<int> trigger_step) {
  if (records.empty()) throw std::invalid_argument("summarize needs at least one record");

  SummaryStats stats;
  stats.runs = static_cast<int>(records.size());
  const double inf = std::numeric_limits<double>::infinity();
  stats.pre_min.setConstant(inf);
  stats.post_min.setConstant(inf);

  for (const RunRecord& record : records) {
    for (const TickRow& row : record.rows) {
      const Eigen::Vector2d diff = (row.t_f - row.t_p).cwiseAbs();
      const bool post = trigger_step && row.step >= *trigger_step;
      if (post) {
        stats.has_post = true;
        ++stats.post_ticks;
        stats.post_min = stats.post_min.cwiseMin(diff);
        stats.post_max = stats.post_max.cwiseMax(diff);
      } else {
        ++stats.pre_ticks;
        stats.pre_min = stats.pre_min.cwiseMin(diff);
        stats.pre_max = stats.pre_max.cwiseMax(diff);
      }
    }

    bool detected = false;
    for (const ImpactEvent& event : record.events) {
      if (trigger_step && event.step >= *trigger_step) {
        if (!detected) {
          stats.latencies.push_back(event.step - *trigger_step);
          detected = true;
        }
      } else {
        ++stats.false_positives;
      }
    }
    if (detected) ++stats.detected_runs;
  }

  if (stats.pre_ticks == 0) stats.pre_min.setZero();
  if (!stats.has_post) stats.post_min.setZero();
  return stats;
}

}  // namespace legimpact
