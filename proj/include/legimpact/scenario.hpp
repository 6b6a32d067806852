#pragma once

#include <optional>
#include <string>
#include <vector>

#include "legimpact/impact.hpp"
#include "legimpact/plant.hpp"
#include "legimpact/trajectory.hpp"
#include "legimpact/ukf.hpp"

namespace legimpact {

enum class ThresholdMode {
  kAuto,   // per-joint max pre-collision |T_f − T_p| from calibration runs, ×margin
  kFixed,  // use impact.t_threshold as configured
};

// Everything needed for one reproducible run of the plant → predictor → UKF
// → impact pipeline.
struct ScenarioConfig {
  LegGeometry geometry;
  TrajectorySpec trajectory;
  std::optional<ContactSchedule> contact;
  NoiseSpec noise;
  UkfConfig ukf;
  ImpactConfig impact;
  ThresholdMode threshold_mode = ThresholdMode::kAuto;
  double auto_margin = 1.2;
  int calibration_runs = 50;
  std::string model_path = "model.txt";
  uint64_t seed = 1;
  bool stop_on_collision = false;

  void validate() const;  // throws std::invalid_argument
};

// One tick of the joined record (plant + filter + impact).
struct TickRow {
  int step = 0;
  JointState state;
  TorqueVector t_true{0, 0};
  TorqueVector t_m{0, 0};
  TorqueVector t_p{0, 0};
  TorqueVector t_f{0, 0};
  Eigen::Vector2d innovation{0, 0};
  double cp00 = 0, cp01 = 0, cp11 = 0;
  Eigen::Vector2d t_diff{0, 0};
  Eigen::Vector2d force{0, 0};
  bool contact_active = false;
  bool latched = false;
};

struct RunRecord {
  std::vector<TickRow> rows;
  std::vector<ImpactEvent> events;
  Eigen::Vector2d threshold_used{0, 0};
};

// Wraps a trained network as the pipeline predictor.
class MlpPredictor;  // defined in mlp_predictor.hpp

// Runs one scenario. In kAuto threshold mode the threshold is calibrated
// first (contact stripped, seeds derived from cfg.seed); pass a resolved
// threshold to skip that.
RunRecord run_scenario(const ScenarioConfig& cfg, const Predictor& predictor);
RunRecord run_scenario_with_threshold(const ScenarioConfig& cfg, const Predictor& predictor,
                                      const Eigen::Vector2d& threshold);

// Per-joint max |T_f − T_p| over n_runs seeded no-contact runs, ×auto_margin.
Eigen::Vector2d calibrate_threshold(const ScenarioConfig& cfg, int n_runs,
                                    const Predictor& predictor);

struct SummaryStats {
  int runs = 0;
  long pre_ticks = 0, post_ticks = 0;
  Eigen::Vector2d pre_min{0, 0}, pre_max{0, 0};    // |T_f − T_p| before the trigger
  Eigen::Vector2d post_min{0, 0}, post_max{0, 0};  // from the trigger tick on
  bool has_post = false;
  std::vector<int> latencies;  // event step − trigger step, per detected run
  int detected_runs = 0;
  int false_positives = 0;  // events before the trigger (or any event without contact)

  std::optional<int> max_latency() const;
};

// Aggregates runs of one scenario; trigger_step splits pre/post (absent for
// no-contact sets).
SummaryStats summarize(const std::vector<RunRecord>& records, std::optional<int> trigger_step);

}  // namespace legimpact
