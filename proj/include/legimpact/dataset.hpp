#pragma once

#include <string>
#include <vector>

#include "legimpact/leg_model.hpp"
#include "legimpact/rng.hpp"

namespace legimpact {

// Regression samples: inputs (theta_h, theta_k, omega_h, omega_k) in rad and
// rad/s, targets (tau_h, tau_k) in N·cm.
struct Dataset {
  Eigen::MatrixXd inputs;   // N×4
  Eigen::MatrixXd targets;  // N×2

  int size() const { return static_cast<int>(inputs.rows()); }
};

// Workspace sweep for data collection. Joint positions come from a near-square
// (theta_h × theta_k) grid generated row-major and truncated to position_count;
// every position is crossed with every velocity level.
struct SampleGridSpec {
  double theta_h_lo = -2.8, theta_h_hi = -1.4;  // rad
  double theta_k_lo = 0.8, theta_k_hi = 2.2;    // rad
  int position_count = 809;
  std::vector<Eigen::Vector2d> velocity_levels;  // (omega_h, omega_k) pairs, rad/s

  // defaults: 809 positions × 12 velocity pairs = 9708 samples
  static SampleGridSpec defaults();

  void validate() const;  // throws std::invalid_argument
};

// Labels are the no-contact inverse_dynamics torques at zero acceleration
// (steady sweep). Row order is shuffled with the seed; contents are otherwise
// deterministic.
Dataset sample_workspace(const LegGeometry& geom, const SampleGridSpec& grid, uint64_t seed);

// CSV with header theta_h,theta_k,omega_h,omega_k,tau_h,tau_k, LF endings,
// full double precision (round-trip exact).
void save_dataset_csv(const Dataset& data, const std::string& path);
Dataset load_dataset_csv(const std::string& path);

// Seeded 70/15/15-style split by shuffled indices.
struct SplitIndices {
  std::vector<int> train, validation, test;
};
SplitIndices split_dataset(int n, const std::array<double, 3>& fractions, uint64_t seed);

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<int>& idx);

}  // namespace legimpact
