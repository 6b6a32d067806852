#include "legimpact/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "legimpact/errors.hpp"
#include "legimpact/rng.hpp"

namespace legimpact {

void NetworkSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) throw std::invalid_argument("network dims must be >= 1");
  if (hidden_layers < 1) throw std::invalid_argument("at least one hidden layer required");
  if (hidden_width < 1) throw std::invalid_argument("hidden width must be >= 1");
}

std::vector<int> NetworkSpec::layer_dims() const {
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int i = 0; i < hidden_layers; ++i) dims.push_back(hidden_width);
  dims.push_back(output_dim);
  return dims;
}

int NetworkSpec::parameter_count() const {
  const auto dims = layer_dims();
  int count = 0;
  for (size_t l = 0; l + 1 < dims.size(); ++l) count += dims[l] * dims[l + 1] + dims[l + 1];
  return count;
}

// ---------- Normalizer ----------

Normalizer Normalizer::identity(int dim) {
  Normalizer n;
  n.scale = Eigen::VectorXd::Ones(dim);
  n.offset = Eigen::VectorXd::Zero(dim);
  return n;
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& data, double margin) {
  const int dim = static_cast<int>(data.cols());
  Normalizer n;
  n.scale.resize(dim);
  n.offset.resize(dim);
  for (int c = 0; c < dim; ++c) {
    const double lo = data.col(c).minCoeff();
    const double hi = data.col(c).maxCoeff();
    if (hi > lo) {
      n.scale(c) = 2.0 * margin / (hi - lo);
      n.offset(c) = margin - n.scale(c) * hi;
    } else {
      // constant channel: map to 0, keep the map invertible
      n.scale(c) = 1.0;
      n.offset(c) = -lo;
    }
  }
  return n;
}

Eigen::MatrixXd Normalizer::forward(const Eigen::MatrixXd& x) const {
  return (x * scale.asDiagonal()).rowwise() + offset.transpose();
}

Eigen::MatrixXd Normalizer::inverse(const Eigen::MatrixXd& y) const {
  return (y.rowwise() - offset.transpose()) * scale.cwiseInverse().asDiagonal();
}

Eigen::VectorXd Normalizer::forward_vec(const Eigen::VectorXd& x) const {
  return scale.cwiseProduct(x) + offset;
}

Eigen::VectorXd Normalizer::inverse_vec(const Eigen::VectorXd& y) const {
  return (y - offset).cwiseQuotient(scale);
}

// ---------- Network ----------

Eigen::MatrixXd Network::forward_normalized(const Eigen::MatrixXd& x_norm) const {
  Eigen::MatrixXd a = x_norm;
  for (size_t l = 0; l < weights.size(); ++l) {
    a = ((a * weights[l].transpose()).rowwise() + biases[l].transpose()).array().tanh();
  }
  return a;
}

Eigen::MatrixXd Network::predict_batch(const Eigen::MatrixXd& inputs) const {
  return out_norm.inverse(forward_normalized(in_norm.forward(inputs)));
}

TorqueVector Network::predict(const JointState& p) const {
  Eigen::MatrixXd x(1, 4);
  x << p.theta_h, p.theta_k, p.omega_h, p.omega_k;
  const Eigen::MatrixXd y = predict_batch(x);
  return {y(0, 0), y(0, 1)};
}

Network init_network(const NetworkSpec& spec, uint64_t seed) {
  spec.validate();
  Network net;
  net.spec = spec;
  net.in_norm = Normalizer::identity(spec.input_dim);
  net.out_norm = Normalizer::identity(spec.output_dim);

  Rng rng(seed);
  const auto dims = spec.layer_dims();
  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w(r, c) = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return net;
}

// ---------- loss and gradient ----------

namespace {

// forward pass keeping activations; a[0] = input, a[L] = output
std::vector<Eigen::MatrixXd> forward_trace(const Network& net, const Eigen::MatrixXd& x_norm) {
  std::vector<Eigen::MatrixXd> a;
  a.reserve(net.weights.size() + 1);
  a.push_back(x_norm);
  for (size_t l = 0; l < net.weights.size(); ++l) {
    a.push_back(
        ((a.back() * net.weights[l].transpose()).rowwise() + net.biases[l].transpose())
            .array()
            .tanh());
  }
  return a;
}

// MSE is the mean over all N·D elements
double mse_of(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
  return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

struct LayerGrads {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
};

LayerGrads backprop(const Network& net, const std::vector<Eigen::MatrixXd>& a,
                    const Eigen::MatrixXd& t_norm) {
  const size_t layers = net.weights.size();
  LayerGrads g;
  g.dw.resize(layers);
  g.db.resize(layers);

  // dL/d(pre-activation), starting from dL/dy = 2(y - t)/(N·D) through tanh'
  Eigen::MatrixXd delta =
      (2.0 / static_cast<double>(t_norm.size())) * (a.back() - t_norm).array() *
      (1.0 - a.back().array().square());
  for (size_t l = layers; l-- > 0;) {
    g.dw[l] = delta.transpose() * a[l];
    g.db[l] = delta.colwise().sum();
    if (l > 0) {
      delta = (delta * net.weights[l]).array() * (1.0 - a[l].array().square());
    }
  }
  return g;
}

}  // namespace

double loss_value(const Network& net, const Eigen::MatrixXd& x_norm,
                  const Eigen::MatrixXd& t_norm) {
  return mse_of(net.forward_normalized(x_norm), t_norm);
}

Eigen::VectorXd flatten_parameters(const Network& net) {
  Eigen::VectorXd out(net.parameter_count());
  int pos = 0;
  for (size_t l = 0; l < net.weights.size(); ++l) {
    for (int r = 0; r < net.weights[l].rows(); ++r)
      for (int c = 0; c < net.weights[l].cols(); ++c) out(pos++) = net.weights[l](r, c);
    for (int r = 0; r < net.biases[l].size(); ++r) out(pos++) = net.biases[l](r);
  }
  return out;
}

void unflatten_parameters(Network& net, const Eigen::VectorXd& params) {
  int pos = 0;
  for (size_t l = 0; l < net.weights.size(); ++l) {
    for (int r = 0; r < net.weights[l].rows(); ++r)
      for (int c = 0; c < net.weights[l].cols(); ++c) net.weights[l](r, c) = params(pos++);
    for (int r = 0; r < net.biases[l].size(); ++r) net.biases[l](r) = params(pos++);
  }
  if (pos != params.size()) throw std::invalid_argument("parameter vector size mismatch");
}

Eigen::VectorXd loss_gradient(const Network& net, const Eigen::MatrixXd& x_norm,
                              const Eigen::MatrixXd& t_norm) {
  const auto a = forward_trace(net, x_norm);
  const LayerGrads g = backprop(net, a, t_norm);
  Eigen::VectorXd out(net.parameter_count());
  int pos = 0;
  for (size_t l = 0; l < g.dw.size(); ++l) {
    for (int r = 0; r < g.dw[l].rows(); ++r)
      for (int c = 0; c < g.dw[l].cols(); ++c) out(pos++) = g.dw[l](r, c);
    for (int r = 0; r < g.db[l].size(); ++r) out(pos++) = g.db[l](r);
  }
  return out;
}

// ---------- training ----------

TrainReport train(Network& net, const Dataset& data, const TrainOptions& opts, uint64_t seed) {
  if (data.size() < 1) throw std::invalid_argument("empty dataset");
  if (data.inputs.cols() != net.spec.input_dim || data.targets.cols() != net.spec.output_dim)
    throw std::invalid_argument("dataset dims do not match the network spec");
  if (opts.goal_mse <= 0) throw std::invalid_argument("goal_mse must be positive");

  const SplitIndices split = split_dataset(data.size(), opts.split, derive_seed(seed, 1));
  if (split.train.empty()) throw std::invalid_argument("train split is empty");

  const Eigen::MatrixXd train_in = gather_rows(data.inputs, split.train);
  const Eigen::MatrixXd train_tg = gather_rows(data.targets, split.train);

  net.in_norm = Normalizer::fit(train_in);
  net.out_norm = Normalizer::fit(train_tg);

  const Eigen::MatrixXd xn = net.in_norm.forward(train_in);
  const Eigen::MatrixXd tn = net.out_norm.forward(train_tg);
  // small datasets may produce an empty validation split; fall back to train
  const bool has_val = !split.validation.empty();
  const Eigen::MatrixXd val_xn =
      has_val ? net.in_norm.forward(gather_rows(data.inputs, split.validation)) : xn;
  const Eigen::MatrixXd val_tn =
      has_val ? net.out_norm.forward(gather_rows(data.targets, split.validation)) : tn;

  const int n_train = static_cast<int>(xn.rows());
  const int batch = std::max(1, std::min(opts.batch_size, n_train));

  // Adam state
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  for (size_t l = 0; l < net.weights.size(); ++l) {
    mw.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    vw.push_back(Eigen::MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    mb.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    vb.push_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }

  Rng shuffle_rng(derive_seed(seed, 2));
  std::vector<int> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  TrainReport report;
  report.best_val_mse = std::numeric_limits<double>::infinity();
  std::vector<Eigen::MatrixXd> best_w = net.weights;
  std::vector<Eigen::VectorXd> best_b = net.biases;
  int stale_epochs = 0;
  long step = 0;

  // cosine-annealed rate (to lr/1000 at the epoch budget); Adam at constant
  // lr stalls at a noise floor on noise-free targets
  const double lr_end = opts.learning_rate * 1e-3;

  for (int epoch = 1; epoch <= opts.max_epochs; ++epoch) {
    const double lr =
        lr_end + 0.5 * (opts.learning_rate - lr_end) *
                     (1.0 + std::cos(M_PI * (epoch - 1) / std::max(1, opts.max_epochs - 1)));
    for (int i = n_train - 1; i > 0; --i) {
      const int j = static_cast<int>(shuffle_rng.uniform_int(static_cast<uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }

    for (int start = 0; start < n_train; start += batch) {
      const int count = std::min(batch, n_train - start);
      Eigen::MatrixXd bx(count, xn.cols()), bt(count, tn.cols());
      for (int i = 0; i < count; ++i) {
        bx.row(i) = xn.row(order[start + i]);
        bt.row(i) = tn.row(order[start + i]);
      }

      const auto a = forward_trace(net, bx);
      const LayerGrads g = backprop(net, a, bt);

      ++step;
      const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      for (size_t l = 0; l < net.weights.size(); ++l) {
        mw[l] = beta1 * mw[l] + (1.0 - beta1) * g.dw[l];
        vw[l] = beta2 * vw[l].array() + (1.0 - beta2) * g.dw[l].array().square();
        net.weights[l].array() -=
            lr * (mw[l].array() / corr1) / ((vw[l].array() / corr2).sqrt() + eps);
        mb[l] = beta1 * mb[l] + (1.0 - beta1) * g.db[l];
        vb[l] = beta2 * vb[l].array() + (1.0 - beta2) * g.db[l].array().square();
        net.biases[l].array() -=
            lr * (mb[l].array() / corr1) / ((vb[l].array() / corr2).sqrt() + eps);
      }
    }

    const double train_mse = loss_value(net, xn, tn);
    const double val_mse = loss_value(net, val_xn, val_tn);
    if (!std::isfinite(train_mse) || !std::isfinite(val_mse))
      throw DivergedTraining("loss became non-finite at epoch " + std::to_string(epoch));

    if (epoch == 1) report.first_val_mse = val_mse;
    report.epochs_run = epoch;

    if (val_mse < report.best_val_mse) {
      report.best_val_mse = val_mse;
      best_w = net.weights;
      best_b = net.biases;
      stale_epochs = 0;
    } else {
      ++stale_epochs;
    }

    if (train_mse <= opts.goal_mse) {
      report.reached_goal = true;
      break;
    }
    if (stale_epochs >= opts.patience) break;
  }

  net.weights = best_w;
  net.biases = best_b;

  report.train = evaluate(net, train_in, train_tg);
  if (has_val) {
    report.validation = evaluate(net, gather_rows(data.inputs, split.validation),
                                 gather_rows(data.targets, split.validation));
  } else {
    report.validation = report.train;
  }
  if (!split.test.empty()) {
    report.test = evaluate(net, gather_rows(data.inputs, split.test),
                           gather_rows(data.targets, split.test));
  }
  return report;
}

EvalMetrics compute_metrics(const Eigen::MatrixXd& predictions, const Eigen::MatrixXd& targets,
                            const Normalizer& out_norm) {
  if (predictions.rows() < 1) throw std::invalid_argument("evaluate needs a nonempty split");
  EvalMetrics m;
  m.mse_normalized = mse_of(out_norm.forward(predictions), out_norm.forward(targets));

  const Eigen::MatrixXd err = (predictions - targets).cwiseAbs();
  for (int c = 0; c < targets.cols(); ++c) {
    m.max_abs_error(c) = err.col(c).maxCoeff();

    const Eigen::VectorXd p = predictions.col(c), t = targets.col(c);
    const Eigen::VectorXd pc = p.array() - p.mean(), tc = t.array() - t.mean();
    // a channel whose variance is at rounding-noise level counts as constant
    const double p_floor = 1e-24 * std::max(1.0, p.squaredNorm());
    const double t_floor = 1e-24 * std::max(1.0, t.squaredNorm());
    if (pc.squaredNorm() <= p_floor || tc.squaredNorm() <= t_floor) {
      m.r(c) = 0.0;
    } else {
      m.r(c) = pc.dot(tc) / std::sqrt(pc.squaredNorm() * tc.squaredNorm());
    }
  }
  m.max_abs_error_overall = m.max_abs_error.maxCoeff();
  return m;
}

EvalMetrics evaluate(const Network& net, const Eigen::MatrixXd& inputs,
                     const Eigen::MatrixXd& targets) {
  return compute_metrics(net.predict_batch(inputs), targets, net.out_norm);
}

// ---------- model file ----------

namespace {
constexpr const char* kMagic = "legimpact-mlp";
constexpr int kVersion = 1;

void write_vector(std::FILE* f, const char* tag, const Eigen::VectorXd& v) {
  std::fprintf(f, "%s", tag);
  for (int i = 0; i < v.size(); ++i) std::fprintf(f, " %.17g", v(i));
  std::fputc('\n', f);
}

double read_double(std::istream& in, const std::string& path) {
  double v;
  if (!(in >> v)) throw DimMismatch("truncated model file " + path);
  return v;
}
}  // namespace

void save_model(const Network& net, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  const auto dims = net.spec.layer_dims();
  std::fprintf(f, "%s %d\n", kMagic, kVersion);
  std::fprintf(f, "dims %d", static_cast<int>(dims.size()));
  for (int d : dims) std::fprintf(f, " %d", d);
  std::fputc('\n', f);
  write_vector(f, "in_scale", net.in_norm.scale);
  write_vector(f, "in_offset", net.in_norm.offset);
  write_vector(f, "out_scale", net.out_norm.scale);
  write_vector(f, "out_offset", net.out_norm.offset);
  for (size_t l = 0; l < net.weights.size(); ++l) {
    std::fprintf(f, "layer %zu\n", l);
    for (int r = 0; r < net.weights[l].rows(); ++r) {
      for (int c = 0; c < net.weights[l].cols(); ++c)
        std::fprintf(f, c == 0 ? "%.17g" : " %.17g", net.weights[l](r, c));
      std::fputc('\n', f);
    }
    write_vector(f, "bias", net.biases[l]);
  }
  std::fputs("end\n", f);
  std::fclose(f);
}

Network load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string magic;
  int version = -1;
  if (!(in >> magic) || magic != kMagic) throw BadMagic("not a model file: " + path);
  if (!(in >> version) || version != kVersion)
    throw VersionMismatch("model format version " + std::to_string(version) +
                          " unsupported (expected " + std::to_string(kVersion) + ")");

  std::string tag;
  int dim_count = 0;
  if (!(in >> tag >> dim_count) || tag != "dims" || dim_count < 3)
    throw DimMismatch("bad dims header in " + path);
  std::vector<int> dims(dim_count);
  for (int& d : dims) {
    if (!(in >> d) || d < 1) throw DimMismatch("bad layer dim in " + path);
  }
  for (size_t i = 2; i + 1 < dims.size(); ++i) {
    if (dims[i] != dims[1]) throw DimMismatch("non-uniform hidden widths in " + path);
  }

  Network net;
  net.spec.input_dim = dims.front();
  net.spec.output_dim = dims.back();
  net.spec.hidden_layers = dim_count - 2;
  net.spec.hidden_width = dims[1];
  net.spec.validate();

  auto read_tagged_vector = [&](const std::string& expect, int size) {
    if (!(in >> tag) || tag != expect) throw DimMismatch("expected " + expect + " in " + path);
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i) v(i) = read_double(in, path);
    return v;
  };
  net.in_norm.scale = read_tagged_vector("in_scale", dims.front());
  net.in_norm.offset = read_tagged_vector("in_offset", dims.front());
  net.out_norm.scale = read_tagged_vector("out_scale", dims.back());
  net.out_norm.offset = read_tagged_vector("out_offset", dims.back());

  for (size_t l = 0; l + 1 < dims.size(); ++l) {
    size_t index;
    if (!(in >> tag >> index) || tag != "layer" || index != l)
      throw DimMismatch("expected layer " + std::to_string(l) + " in " + path);
    Eigen::MatrixXd w(dims[l + 1], dims[l]);
    for (int r = 0; r < w.rows(); ++r)
      for (int c = 0; c < w.cols(); ++c) w(r, c) = read_double(in, path);
    net.weights.push_back(std::move(w));
    net.biases.push_back(read_tagged_vector("bias", dims[l + 1]));
  }
  if (!(in >> tag) || tag != "end") throw DimMismatch("missing end marker in " + path);
  return net;
}

}  // namespace legimpact
