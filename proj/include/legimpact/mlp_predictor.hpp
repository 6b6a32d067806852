#pragma once

#include <utility>

#include "legimpact/mlp.hpp"
#include "legimpact/ukf.hpp"

namespace legimpact {

// Trained network as the pipeline's torque predictor.
class MlpPredictor : public Predictor {
 public:
  explicit MlpPredictor(Network net) : net_(std::move(net)) {}

  Eigen::VectorXd predict(const JointState& p) const override { return net_.predict(p); }

  const Network& network() const { return net_; }

 private:
  Network net_;
};

}  // namespace legimpact
