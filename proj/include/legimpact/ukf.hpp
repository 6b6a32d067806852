#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>

#include "legimpact/leg_model.hpp"
#include "legimpact/rng.hpp"

namespace legimpact {

// Anything that predicts the no-load motor torques from the instantaneous
// joint state. The trained network is the production implementation; tests
// may inject stubs.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Eigen::VectorXd predict(const JointState& p) const = 0;
};

// Unscented filter over the torque vector. The state dimension is a config
// field (default 2) so the same machinery runs the d=1 sanity cases.
//
// Scaling follows lambda = (alpha² − 1)·d with alpha > 1; the weight matrix
// of the reference formulation has identical rows, so a single length-m
// vector is used for both the mean and covariance sums.
struct UkfConfig {
  int d = 2;
  double alpha = 10.0;
  Eigen::VectorXd sigma_p = Eigen::Vector2d(8.5, 8.5);     // process std-dev (N·cm)
  Eigen::VectorXd sigma_m = Eigen::Vector2d(178.0, 178.0); // measurement std-dev (N·cm)
  double vp_half_range = 3.4;  // additive process noise interval [-v, v] (N·cm)
  double vm_half_range = 3.4;  // additive measurement noise interval (N·cm)
  bool literal_noise = false;  // draw v_p/v_m per step instead of zeroing them

  double lambda() const { return (alpha * alpha - 1.0) * d; }
  int sigma_count() const { return 2 * d + 1; }
  Eigen::MatrixXd process_noise() const;      // N_p = diag(sigma_p ⊙ sigma_p)
  Eigen::MatrixXd measurement_noise() const;  // N_m
  void validate() const;                      // throws std::invalid_argument
};

struct UkfState {
  Eigen::VectorXd t_f;  // filtered torque (N·cm)
  Eigen::MatrixXd c_p;  // covariance (N²·cm²), symmetric PSD
};

struct SigmaSet {
  Eigen::MatrixXd points;   // d×m, column 0 is the generating mean
  Eigen::VectorXd weights;  // length m, sums to 1
};

struct StepTrace {
  Eigen::VectorXd t_p;         // predictor output at this tick
  Eigen::VectorXd f_hat;       // predicted mean
  Eigen::MatrixXd c_p_pred;    // predicted covariance (with N_p)
  Eigen::VectorXd z_hat;       // measurement mean
  Eigen::MatrixXd c_z;         // measurement covariance (with N_m)
  Eigen::MatrixXd c_v;         // cross covariance
  Eigen::MatrixXd gain;        // Kalman gain
  Eigen::VectorXd innovation;  // t_m − z_hat
  double cp_asymmetry = 0.0;   // max |C−Cᵀ| of the updated covariance before symmetrization
};

// w0 = lambda/(lambda+d), side weights 1/(2(d+lambda)); sums to 1 exactly.
Eigen::VectorXd ut_weights(const UkfConfig& cfg);

// chi_0 = t_f, chi_±col = t_f ± columns of chol((d+lambda)·c_p). A zero
// covariance collapses all points onto t_f. On Cholesky failure a jitter
// ladder (1e-9·trace up to 1e-3·trace, ×10 steps) is tried before throwing
// CovarianceNotPSD.
SigmaSet sigma_points(const UkfState& state, const UkfConfig& cfg);

// Weighted mean/covariance of f(points); covariance EXCLUDES any additive
// noise term. Shared by the predict and measure steps and exact for affine f.
struct UtMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd transformed;  // d×m, the propagated columns
};
UtMoments ut_propagate(const SigmaSet& sigma,
                       const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f);

// Transition of one sigma point: chi + (t_p − t_f_prev) + v. The predicted
// torque t_p is evaluated once per step (it depends on p_r only); v is zero
// in deterministic mode and a per-step uniform draw in literal-noise mode.
Eigen::VectorXd transition_g(const Eigen::VectorXd& chi, const Eigen::VectorXd& t_f_prev,
                             const Eigen::VectorXd& t_p, const Eigen::VectorXd& v);

struct PredictResult {
  Eigen::VectorXd f_hat;
  Eigen::MatrixXd c_p_pred;  // includes N_p
  Eigen::MatrixXd f_cols;
};
PredictResult ukf_predict(const SigmaSet& sigma, const UkfState& prev, const Eigen::VectorXd& t_p,
                          const UkfConfig& cfg, const Eigen::VectorXd& v_p);

struct MeasureResult {
  Eigen::VectorXd z_hat;
  Eigen::MatrixXd c_z;  // includes N_m
  Eigen::MatrixXd z_cols;
};
// The measurement map h mirrors g with v_m in place of v_p and is applied to
// the ORIGINAL sigma points.
MeasureResult ukf_measure(const SigmaSet& sigma, const UkfState& prev, const Eigen::VectorXd& t_p,
                          const UkfConfig& cfg, const Eigen::VectorXd& v_m);

// Cross covariance, gain (solved from K·C_z = C_v, no explicit inverse),
// state update and covariance downdate with enforced symmetrization.
// Throws SingularInnovationCovariance when C_z cannot be solved.
struct UpdateResult {
  UkfState state;
  StepTrace trace;
};
UpdateResult ukf_update(const PredictResult& pred, const MeasureResult& meas,
                        const Eigen::VectorXd& weights, const Eigen::VectorXd& t_m);

// One full sigma/predict/measure/update pass. rng is only touched in
// literal-noise mode.
UpdateResult filter_step(const UkfState& prev, const JointState& p_r, const Eigen::VectorXd& t_m,
                         const UkfConfig& cfg, const Predictor& predictor, Rng* rng = nullptr);

// Start-of-trajectory state: t_f = predictor(p0), c_p = N_p.
UkfState ukf_init(const JointState& p0, const UkfConfig& cfg, const Predictor& predictor);

// Sequential per-leg filter instance owning the literal-noise stream.
class UkfFilter {
 public:
  UkfFilter(UkfConfig cfg, uint64_t seed) : cfg_(cfg), rng_(seed) { cfg_.validate(); }

  void initialize(const JointState& p0, const Predictor& predictor) {
    state_ = ukf_init(p0, cfg_, predictor);
  }

  StepTrace step(const JointState& p_r, const Eigen::VectorXd& t_m, const Predictor& predictor) {
    UpdateResult res = filter_step(state_, p_r, t_m, cfg_, predictor, &rng_);
    state_ = std::move(res.state);
    return res.trace;
  }

  const UkfState& state() const { return state_; }
  const UkfConfig& config() const { return cfg_; }

 private:
  UkfConfig cfg_;
  UkfState state_;
  Rng rng_;
};

}  // namespace legimpact
