#include "legimpact/ukf.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "legimpact/errors.hpp"

namespace legimpact {

Eigen::MatrixXd UkfConfig::process_noise() const {
  return sigma_p.cwiseProduct(sigma_p).asDiagonal();
}

Eigen::MatrixXd UkfConfig::measurement_noise() const {
  return sigma_m.cwiseProduct(sigma_m).asDiagonal();
}

void UkfConfig::validate() const {
  if (d < 1) throw std::invalid_argument("ukf state dimension must be >= 1");
  if (!(alpha > 1.0)) throw std::invalid_argument("ukf alpha must be > 1");
  if (sigma_p.size() != d || sigma_m.size() != d)
    throw std::invalid_argument("sigma vectors must have length d");
  if ((sigma_p.array() <= 0).any() || (sigma_m.array() <= 0).any())
    throw std::invalid_argument("noise std-devs must be > 0");
  if (vp_half_range < 0 || vm_half_range < 0)
    throw std::invalid_argument("additive noise ranges must be symmetric about 0");
}

Eigen::VectorXd ut_weights(const UkfConfig& cfg) {
  const double lambda = cfg.lambda();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(cfg.sigma_count(), 1.0 / (2.0 * (cfg.d + lambda)));
  w(0) = lambda / (lambda + cfg.d);
  return w;
}

SigmaSet sigma_points(const UkfState& state, const UkfConfig& cfg) {
  const int d = cfg.d;
  if (state.t_f.size() != d || state.c_p.rows() != d || state.c_p.cols() != d)
    throw std::invalid_argument("ukf state dims do not match config");

  const Eigen::MatrixXd scaled = (d + cfg.lambda()) * state.c_p;

  Eigen::MatrixXd root = Eigen::MatrixXd::Zero(d, d);
  if (scaled.cwiseAbs().maxCoeff() > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(scaled);
    if (llt.info() == Eigen::Success) {
      root = llt.matrixL();
    } else {
      // jitter ladder before giving up
      const double trace = scaled.trace();
      const double base = trace > 0.0 ? trace : 1.0;
      bool ok = false;
      for (double jitter = 1e-9 * base; jitter <= 1e-3 * base; jitter *= 10.0) {
        llt.compute(scaled + jitter * Eigen::MatrixXd::Identity(d, d));
        if (llt.info() == Eigen::Success) {
          root = llt.matrixL();
          ok = true;
          break;
        }
      }
      if (!ok) throw CovarianceNotPSD("covariance is not positive semidefinite");
    }
  }

  SigmaSet set;
  set.weights = ut_weights(cfg);
  set.points.resize(d, cfg.sigma_count());
  set.points.col(0) = state.t_f;
  for (int c = 0; c < d; ++c) {
    set.points.col(1 + c) = state.t_f + root.col(c);
    set.points.col(1 + d + c) = state.t_f - root.col(c);
  }
  return set;
}

UtMoments ut_propagate(const SigmaSet& sigma,
                       const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f) {
  const int m = static_cast<int>(sigma.points.cols());
  UtMoments out;
  for (int c = 0; c < m; ++c) {
    const Eigen::VectorXd y = f(sigma.points.col(c));
    if (c == 0) out.transformed.resize(y.size(), m);
    out.transformed.col(c) = y;
  }
  out.mean = out.transformed * sigma.weights;
  const Eigen::MatrixXd centered = out.transformed.colwise() - out.mean;
  out.covariance = centered * sigma.weights.asDiagonal() * centered.transpose();
  return out;
}

Eigen::VectorXd transition_g(const Eigen::VectorXd& chi, const Eigen::VectorXd& t_f_prev,
                             const Eigen::VectorXd& t_p, const Eigen::VectorXd& v) {
  // diff(T_f, T_p) is the new prediction minus the previous filtered value
  return chi + (t_p - t_f_prev) + v;
}

PredictResult ukf_predict(const SigmaSet& sigma, const UkfState& prev, const Eigen::VectorXd& t_p,
                          const UkfConfig& cfg, const Eigen::VectorXd& v_p) {
  const UtMoments ut = ut_propagate(
      sigma, [&](const Eigen::VectorXd& chi) { return transition_g(chi, prev.t_f, t_p, v_p); });
  PredictResult res;
  res.f_hat = ut.mean;
  res.c_p_pred = ut.covariance + cfg.process_noise();
  res.f_cols = ut.transformed;
  return res;
}

MeasureResult ukf_measure(const SigmaSet& sigma, const UkfState& prev, const Eigen::VectorXd& t_p,
                          const UkfConfig& cfg, const Eigen::VectorXd& v_m) {
  const UtMoments ut = ut_propagate(
      sigma, [&](const Eigen::VectorXd& chi) { return transition_g(chi, prev.t_f, t_p, v_m); });
  MeasureResult res;
  res.z_hat = ut.mean;
  res.c_z = ut.covariance + cfg.measurement_noise();
  res.z_cols = ut.transformed;
  return res;
}

UpdateResult ukf_update(const PredictResult& pred, const MeasureResult& meas,
                        const Eigen::VectorXd& weights, const Eigen::VectorXd& t_m) {
  const Eigen::MatrixXd f_centered = pred.f_cols.colwise() - pred.f_hat;
  const Eigen::MatrixXd z_centered = meas.z_cols.colwise() - meas.z_hat;
  const Eigen::MatrixXd c_v = f_centered * weights.asDiagonal() * z_centered.transpose();

  // K·C_z = C_v  =>  C_zᵀ·Kᵀ = C_vᵀ
  Eigen::FullPivLU<Eigen::MatrixXd> lu(meas.c_z.transpose());
  if (!lu.isInvertible())
    throw SingularInnovationCovariance("innovation covariance is numerically singular");
  const Eigen::MatrixXd gain = lu.solve(c_v.transpose()).transpose();

  UpdateResult res;
  res.trace.f_hat = pred.f_hat;
  res.trace.c_p_pred = pred.c_p_pred;
  res.trace.z_hat = meas.z_hat;
  res.trace.c_z = meas.c_z;
  res.trace.c_v = c_v;
  res.trace.gain = gain;
  res.trace.innovation = t_m - meas.z_hat;

  res.state.t_f = pred.f_hat + gain * res.trace.innovation;
  Eigen::MatrixXd c_p = pred.c_p_pred - gain * meas.c_z * gain.transpose();
  res.trace.cp_asymmetry = (c_p - c_p.transpose()).cwiseAbs().maxCoeff();
  res.state.c_p = 0.5 * (c_p + c_p.transpose());
  return res;
}

UpdateResult filter_step(const UkfState& prev, const JointState& p_r, const Eigen::VectorXd& t_m,
                         const UkfConfig& cfg, const Predictor& predictor, Rng* rng) {
  const Eigen::VectorXd t_p = predictor.predict(p_r);

  Eigen::VectorXd v_p = Eigen::VectorXd::Zero(cfg.d);
  Eigen::VectorXd v_m = Eigen::VectorXd::Zero(cfg.d);
  if (cfg.literal_noise) {
    if (!rng) throw std::invalid_argument("literal-noise mode needs an rng");
    for (int i = 0; i < cfg.d; ++i) v_p(i) = rng->uniform(-cfg.vp_half_range, cfg.vp_half_range);
    for (int i = 0; i < cfg.d; ++i) v_m(i) = rng->uniform(-cfg.vm_half_range, cfg.vm_half_range);
  }

  const SigmaSet sigma = sigma_points(prev, cfg);
  const PredictResult pred = ukf_predict(sigma, prev, t_p, cfg, v_p);
  const MeasureResult meas = ukf_measure(sigma, prev, t_p, cfg, v_m);
  UpdateResult res = ukf_update(pred, meas, sigma.weights, t_m);
  res.trace.t_p = t_p;
  return res;
}

UkfState ukf_init(const JointState& p0, const UkfConfig& cfg, const Predictor& predictor) {
  UkfState state;
  state.t_f = predictor.predict(p0);
  state.c_p = cfg.process_noise();
  return state;
}

}  // namespace legimpact
