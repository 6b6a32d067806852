#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "legimpact/errors.hpp"
#include "legimpact/mlp.hpp"
#include "legimpact/rng.hpp"
#include "oracles.hpp"

using namespace legimpact;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

Network random_fitted_net(const NetworkSpec& spec, uint64_t seed) {
  Network net = init_network(spec, seed);
  // non-identity normalizers so save/load covers them
  Rng rng(seed + 1);
  for (int i = 0; i < spec.input_dim; ++i) {
    net.in_norm.scale(i) = rng.uniform(0.2, 2.0);
    net.in_norm.offset(i) = rng.uniform(-0.3, 0.3);
  }
  for (int i = 0; i < spec.output_dim; ++i) {
    net.out_norm.scale(i) = rng.uniform(0.001, 0.1);
    net.out_norm.offset(i) = rng.uniform(-0.3, 0.3);
  }
  return net;
}

}  // namespace

TEST_CASE("default spec parameter count") {
  NetworkSpec spec;
  CHECK(spec.parameter_count() == 3694);  // 4·26+26 + 5·(26·26+26) + 26·2+2
}

TEST_CASE("spec validation rejects zero hidden layers") {
  NetworkSpec spec;
  spec.hidden_layers = 0;
  CHECK_THROWS_AS(init_network(spec, 1), std::invalid_argument);
}

TEST_CASE("same seed, identical weights") {
  const Network a = init_network(NetworkSpec{}, 123);
  const Network b = init_network(NetworkSpec{}, 123);
  const Network c = init_network(NetworkSpec{}, 124);
  for (size_t l = 0; l < a.weights.size(); ++l) {
    CHECK(a.weights[l] == b.weights[l]);
    CHECK(a.biases[l] == b.biases[l]);
  }
  CHECK(a.weights[0] != c.weights[0]);
}

TEST_CASE("untrained output stays inside the denormalized activation range") {
  Network net = random_fitted_net(NetworkSpec{}, 5);
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const JointState p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-5, 5),
                       rng.uniform(-5, 5)};
    const TorqueVector y = net.predict(p);
    for (int c = 0; c < 2; ++c) {
      const double lo = net.out_norm.inverse_vec(Eigen::Vector2d(-1, -1))(c);
      const double hi = net.out_norm.inverse_vec(Eigen::Vector2d(1, 1))(c);
      CHECK(y(c) > std::min(lo, hi));
      CHECK(y(c) < std::max(lo, hi));
    }
  }
}

TEST_CASE("forward pass matches the per-neuron reference evaluator") {
  const Network net = random_fitted_net(NetworkSpec{}, 8);
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(4);
    for (int c = 0; c < 4; ++c) x(c) = rng.uniform(-2, 2);
    const TorqueVector fast = net.predict({x(0), x(1), x(2), x(3)});
    const Eigen::VectorXd slow = oracles::naive_mlp_eval(net, x);
    CHECK(std::abs(fast(0) - slow(0)) < 1e-10);
    CHECK(std::abs(fast(1) - slow(1)) < 1e-10);
  }
}

TEST_CASE("forward determinism") {
  const Network net = random_fitted_net(NetworkSpec{}, 21);
  const JointState p{-1.9, 1.2, 0.4, -0.6};
  const TorqueVector a = net.predict(p);
  const TorqueVector b = net.predict(p);
  CHECK(a(0) == b(0));
  CHECK(a(1) == b(1));
}

TEST_CASE("normalizer round trip is exact to 1e-12") {
  Rng rng(10);
  Eigen::MatrixXd data(200, 3);
  for (int r = 0; r < data.rows(); ++r)
    for (int c = 0; c < 3; ++c) data(r, c) = rng.uniform(-300, 300);
  const Normalizer n = Normalizer::fit(data);
  const Eigen::MatrixXd fwd = n.forward(data);
  CHECK(fwd.minCoeff() >= -0.9 - 1e-12);
  CHECK(fwd.maxCoeff() <= 0.9 + 1e-12);
  CHECK((n.inverse(fwd) - data).cwiseAbs().maxCoeff() < 1e-12);

  // constant channel stays invertible
  Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(10, 1, 4.2);
  const Normalizer nf = Normalizer::fit(flat);
  CHECK((nf.inverse(nf.forward(flat)) - flat).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("backprop matches central finite differences on a 2x3x2 net") {
  NetworkSpec spec;
  spec.input_dim = 2;
  spec.hidden_layers = 1;
  spec.hidden_width = 3;
  spec.output_dim = 2;

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Network net = init_network(spec, 1000 + trial);
    Eigen::MatrixXd x(5, 2), t(5, 2);
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 2; ++c) {
        x(r, c) = rng.uniform(-0.9, 0.9);
        t(r, c) = rng.uniform(-0.9, 0.9);
      }
    const Eigen::VectorXd analytic = loss_gradient(net, x, t);
    const Eigen::VectorXd fd = oracles::fd_loss_gradient(net, x, t);
    const double scale = std::max(1e-8, fd.cwiseAbs().maxCoeff());
    CHECK((analytic - fd).cwiseAbs().maxCoeff() / scale < 1e-5);
  }
}

TEST_CASE("trainer reaches the goal on a small linear task") {
  NetworkSpec spec;
  spec.input_dim = 2;
  spec.hidden_layers = 1;
  spec.hidden_width = 16;
  spec.output_dim = 2;

  Dataset data;
  data.inputs.resize(10, 2);
  data.targets.resize(10, 2);
  Rng rng(14);
  for (int r = 0; r < 10; ++r) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    data.inputs.row(r) << a, b;
    data.targets.row(r) << 0.5 * a - 0.2 * b, 0.3 * b;
  }

  TrainOptions opts;
  opts.goal_mse = 5e-4;
  opts.max_epochs = 500;
  opts.learning_rate = 0.2;
  opts.batch_size = 10;  // full batch: deterministic steps
  opts.split = {1.0, 0.0, 0.0};  // tiny set: train on everything
  opts.patience = 500;

  Network net = init_network(spec, 15);
  const TrainReport report = train(net, data, opts, 16);
  CHECK(report.reached_goal);
  CHECK(report.epochs_run <= 500);
  CHECK(report.best_val_mse <= report.first_val_mse);

  // per-point error on the train split is bounded by the reported max error
  const Eigen::MatrixXd pred = net.predict_batch(data.inputs);
  for (int r = 0; r < data.size(); ++r)
    for (int c = 0; c < 2; ++c)
      CHECK(std::abs(pred(r, c) - data.targets(r, c)) <= report.train.max_abs_error(c));
}

TEST_CASE("evaluation metrics: perfect and constant predictors") {
  Eigen::MatrixXd targets(50, 2);
  Rng rng(17);
  for (int r = 0; r < 50; ++r)
    for (int c = 0; c < 2; ++c) targets(r, c) = rng.uniform(-100, 100);
  const Normalizer norm = Normalizer::fit(targets);

  // perfect predictor (targets fed back): MSE 0, R = 1
  const EvalMetrics perfect = compute_metrics(targets, targets, norm);
  CHECK(perfect.mse_normalized == 0.0);
  CHECK(perfect.r(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(perfect.r(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(perfect.max_abs_error_overall == 0.0);

  // constant predictor at the target mean: R = 0 by definition
  Eigen::MatrixXd constant(50, 2);
  constant.col(0).setConstant(targets.col(0).mean());
  constant.col(1).setConstant(targets.col(1).mean());
  const EvalMetrics flat = compute_metrics(constant, targets, norm);
  CHECK(flat.r(0) == 0.0);
  CHECK(flat.r(1) == 0.0);
  CHECK(flat.mse_normalized > 0.0);
}

TEST_CASE("model save/load round trip is bit-exact") {
  const Network net = random_fitted_net(NetworkSpec{}, 33);
  const std::string path = temp_path("li_model.txt");
  save_model(net, path);
  const Network loaded = load_model(path);

  Rng rng(34);
  for (int i = 0; i < 100; ++i) {
    const JointState p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-4, 4),
                       rng.uniform(-4, 4)};
    const TorqueVector a = net.predict(p);
    const TorqueVector b = loaded.predict(p);
    CHECK(a(0) == b(0));  // bit-identical
    CHECK(a(1) == b(1));
  }
  std::remove(path.c_str());
}

TEST_CASE("model file error taxonomy") {
  const Network net = random_fitted_net(NetworkSpec{}, 35);
  const std::string path = temp_path("li_model_err.txt");
  save_model(net, path);

  SUBCASE("wrong magic") {
    std::ofstream f(path);
    f << "something-else 1\n";
    f.close();
    CHECK_THROWS_AS(load_model(path), BadMagic);
  }
  SUBCASE("bumped version") {
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    content.replace(content.find(" 1\n"), 3, " 2\n");
    std::ofstream out(path);
    out << content;
    out.close();
    CHECK_THROWS_AS(load_model(path), VersionMismatch);
  }
  SUBCASE("truncated file") {
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::ofstream out(path);
    out << content.substr(0, content.size() / 2);
    out.close();
    CHECK_THROWS_AS(load_model(path), DimMismatch);
  }
  std::remove(path.c_str());
}

TEST_CASE("non-finite loss surfaces as DivergedTraining, not a silent result") {
  // saturating activations make true lr blow-ups unreachable; a non-finite
  // sample is the realistic way the loss goes bad
  NetworkSpec spec;
  spec.input_dim = 1;
  spec.hidden_layers = 1;
  spec.hidden_width = 2;
  spec.output_dim = 1;

  Dataset data;
  data.inputs = Eigen::MatrixXd::Constant(4, 1, 1.0);
  data.targets = Eigen::MatrixXd::Constant(4, 1, 1.0);
  data.targets(2, 0) = std::numeric_limits<double>::infinity();

  TrainOptions opts;
  opts.max_epochs = 5;
  opts.split = {1.0, 0.0, 0.0};

  Network net = init_network(spec, 36);
  CHECK_THROWS_AS(train(net, data, opts, 37), DivergedTraining);
}
