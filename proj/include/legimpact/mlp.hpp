#pragma once

#include <array>
#include <string>
#include <vector>

#include "legimpact/dataset.hpp"
#include "legimpact/leg_model.hpp"

namespace legimpact {

// Fully connected torque predictor: tanh on every hidden layer AND on the
// output layer, so targets must be normalized inside (-1, 1).
struct NetworkSpec {
  int input_dim = 4;
  int hidden_layers = 6;
  int hidden_width = 26;
  int output_dim = 2;

  void validate() const;  // throws std::invalid_argument
  std::vector<int> layer_dims() const;  // [in, width..., out]
  int parameter_count() const;
};

// Per-channel affine map into [-margin, margin]; margin 0.9 keeps the tanh
// output layer out of saturation.
struct Normalizer {
  Eigen::VectorXd scale;   // y = scale·x + offset
  Eigen::VectorXd offset;

  static Normalizer identity(int dim);
  static Normalizer fit(const Eigen::MatrixXd& data, double margin = 0.9);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x) const;   // rows = samples
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& y) const;
  Eigen::VectorXd forward_vec(const Eigen::VectorXd& x) const;
  Eigen::VectorXd inverse_vec(const Eigen::VectorXd& y) const;
};

struct Network {
  NetworkSpec spec;
  std::vector<Eigen::MatrixXd> weights;  // layer l: (out_dim × in_dim)
  std::vector<Eigen::VectorXd> biases;
  Normalizer in_norm;   // fitted at train time; identity until then
  Normalizer out_norm;

  // physical units in, physical units out
  TorqueVector predict(const JointState& p) const;
  Eigen::MatrixXd predict_batch(const Eigen::MatrixXd& inputs) const;

  // normalized-space forward pass (the raw tanh stack)
  Eigen::MatrixXd forward_normalized(const Eigen::MatrixXd& x_norm) const;

  int parameter_count() const { return spec.parameter_count(); }
};

// Uniform ±sqrt(6/(fan_in+fan_out)) init, bit-reproducible per seed.
Network init_network(const NetworkSpec& spec, uint64_t seed);

struct TrainOptions {
  double goal_mse = 1e-5;    // training-set MSE stop target (normalized units)
  int max_epochs = 3000;
  double learning_rate = 1e-3;
  int batch_size = 64;
  int patience = 50;         // epochs without validation improvement
  std::array<double, 3> split{0.70, 0.15, 0.15};
};

struct EvalMetrics {
  double mse_normalized = 0.0;
  Eigen::Vector2d r{0.0, 0.0};             // regression coefficient per output
  Eigen::Vector2d max_abs_error{0.0, 0.0}; // physical units (N·cm), per output
  double max_abs_error_overall = 0.0;
};

struct TrainReport {
  int epochs_run = 0;
  double first_val_mse = 0.0;
  double best_val_mse = 0.0;   // normalized units
  EvalMetrics train, validation, test;
  bool reached_goal = false;
};

// Mini-batch gradient descent with adaptive moments; fits the normalizers on
// the train split, keeps the best-validation weights, stops at goal_mse /
// patience / max_epochs. Throws DivergedTraining if the loss goes non-finite.
TrainReport train(Network& net, const Dataset& data, const TrainOptions& opts, uint64_t seed);

EvalMetrics evaluate(const Network& net, const Eigen::MatrixXd& inputs,
                     const Eigen::MatrixXd& targets);

// Metric math shared by evaluate: normalized MSE, per-output regression
// coefficient R (0 when either side has zero variance), max |error| in
// physical units.
EvalMetrics compute_metrics(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets,
                            const Normalizer& out_norm);

// Analytic loss gradient w.r.t. every weight/bias, flattened layer by layer
// (weights row-major, then bias, per layer). Inputs/targets are in normalized
// space. Exposed for gradient verification.
Eigen::VectorXd loss_gradient(const Network& net, const Eigen::MatrixXd& x_norm,
                              const Eigen::MatrixXd& t_norm);
double loss_value(const Network& net, const Eigen::MatrixXd& x_norm,
                  const Eigen::MatrixXd& t_norm);
Eigen::VectorXd flatten_parameters(const Network& net);
void unflatten_parameters(Network& net, const Eigen::VectorXd& params);

// Versioned plain-text model file; numeric layout documented in the file
// itself. Round trips are bit-exact.
void save_model(const Network& net, const std::string& path);
Network load_model(const std::string& path);  // throws BadMagic / VersionMismatch / DimMismatch

}  // namespace legimpact
