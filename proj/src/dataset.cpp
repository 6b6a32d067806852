#include "legimpact/dataset.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace legimpact {
namespace {

// evenly spaced, endpoints inclusive; a single point sits at the midpoint
double grid_value(double lo, double hi, int i, int n) {
  if (n == 1) return 0.5 * (lo + hi);
  return lo + (hi - lo) * static_cast<double>(i) / (n - 1);
}

}  // namespace

SampleGridSpec SampleGridSpec::defaults() {
  SampleGridSpec spec;
  for (double wh : {-1.5, 0.0, 1.5})
    for (double wk : {-2.0, -0.7, 0.7, 2.0})
      spec.velocity_levels.push_back({wh, wk});
  return spec;
}

void SampleGridSpec::validate() const {
  if (position_count < 1) throw std::invalid_argument("position_count must be >= 1");
  if (velocity_levels.empty()) throw std::invalid_argument("at least one velocity level required");
  if (theta_h_hi < theta_h_lo || theta_k_hi < theta_k_lo)
    throw std::invalid_argument("grid ranges must be ordered lo <= hi");
}

Dataset sample_workspace(const LegGeometry& geom, const SampleGridSpec& grid, uint64_t seed) {
  grid.validate();
  geom.validate();

  const int n_h = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(grid.position_count))));
  const int n_k = (grid.position_count + n_h - 1) / n_h;

  const int n_vel = static_cast<int>(grid.velocity_levels.size());
  const int total = grid.position_count * n_vel;

  Dataset data;
  data.inputs.resize(total, 4);
  data.targets.resize(total, 2);

  int row = 0;
  for (int p = 0; p < grid.position_count; ++p) {
    const int ih = p / n_k;
    const int ik = p % n_k;
    const double th = grid_value(grid.theta_h_lo, grid.theta_h_hi, ih, n_h);
    const double tk = grid_value(grid.theta_k_lo, grid.theta_k_hi, ik, n_k);
    for (int v = 0; v < n_vel; ++v) {
      JointState q{th, tk, grid.velocity_levels[v](0), grid.velocity_levels[v](1)};
      const TorqueVector tau = inverse_dynamics(geom, q, Eigen::Vector2d::Zero());
      data.inputs.row(row) << q.theta_h, q.theta_k, q.omega_h, q.omega_k;
      data.targets.row(row) << tau(0), tau(1);
      ++row;
    }
  }

  // seeded row shuffle (Fisher–Yates)
  Rng rng(seed);
  for (int i = total - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(i) + 1));
    data.inputs.row(i).swap(data.inputs.row(j));
    data.targets.row(i).swap(data.targets.row(j));
  }
  return data;
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  std::fputs("theta_h,theta_k,omega_h,omega_k,tau_h,tau_k\n", f);
  for (int i = 0; i < data.size(); ++i) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", data.inputs(i, 0), data.inputs(i, 1),
                 data.inputs(i, 2), data.inputs(i, 3), data.targets(i, 0), data.targets(i, 1));
  }
  std::fclose(f);
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "theta_h,theta_k,omega_h,omega_k,tau_h,tau_k")
    throw std::runtime_error("bad dataset header in " + path);

  std::vector<std::array<double, 6>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 6> vals{};
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < 6; ++c) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short dataset row in " + path);
      vals[c] = std::stod(cell);
    }
    rows.push_back(vals);
  }

  Dataset data;
  data.inputs.resize(static_cast<int>(rows.size()), 4);
  data.targets.resize(static_cast<int>(rows.size()), 2);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    data.inputs.row(i) << rows[i][0], rows[i][1], rows[i][2], rows[i][3];
    data.targets.row(i) << rows[i][4], rows[i][5];
  }
  return data;
}

SplitIndices split_dataset(int n, const std::array<double, 3>& fractions, uint64_t seed) {
  const double sum = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(i) + 1));
    std::swap(idx[i], idx[j]);
  }

  const int n_train = static_cast<int>(std::round(fractions[0] * n));
  const int n_val = static_cast<int>(std::round(fractions[1] * n));
  SplitIndices split;
  split.train.assign(idx.begin(), idx.begin() + n_train);
  split.validation.assign(idx.begin() + n_train,
                          idx.begin() + std::min(n, n_train + n_val));
  split.test.assign(idx.begin() + std::min(n, n_train + n_val), idx.end());
  return split;
}

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<int>(idx.size()), m.cols());
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) out.row(i) = m.row(idx[i]);
  return out;
}

}  // namespace legimpact
