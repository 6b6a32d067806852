#include "legimpact/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace legimpact {
namespace {

void check_keys(const YAML::Node& node, const std::string& section,
                const std::set<std::string>& allowed) {
  if (!node) return;
  if (!node.IsMap()) throw std::runtime_error("config section '" + section + "' must be a map");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw std::runtime_error("unknown config key '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (node && node[key]) out = node[key].as<T>();
}

void read_vec2(const YAML::Node& node, const char* key, Eigen::Vector2d& out) {
  if (!node || !node[key]) return;
  const auto v = node[key].as<std::vector<double>>();
  if (v.size() != 2) throw std::runtime_error(std::string("config key '") + key + "' needs 2 values");
  out = Eigen::Vector2d(v[0], v[1]);
}

void read_range(const YAML::Node& node, const char* key, double& lo, double& hi) {
  if (!node || !node[key]) return;
  const auto v = node[key].as<std::vector<double>>();
  if (v.size() != 2) throw std::runtime_error(std::string("config key '") + key + "' needs 2 values");
  lo = v[0];
  hi = v[1];
}

}  // namespace

AppConfig default_config() { return AppConfig{}; }

AppConfig load_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw std::runtime_error("cannot parse config " + path + ": " + e.what());
  }

  check_keys(root, "<root>",
             {"geometry", "trajectory", "contact", "noise", "ukf", "impact", "sampling",
              "network", "training", "model", "seed", "stop_on_collision"});

  AppConfig cfg = default_config();
  ScenarioConfig& sc = cfg.scenario;

  const YAML::Node geom = root["geometry"];
  check_keys(geom, "geometry",
             {"l1", "l2", "m1", "m2", "com1", "com2", "i1", "i2", "b_h", "b_k", "gravity"});
  read(geom, "l1", sc.geometry.l1);
  read(geom, "l2", sc.geometry.l2);
  read(geom, "m1", sc.geometry.m1);
  read(geom, "m2", sc.geometry.m2);
  read(geom, "com1", sc.geometry.com1);
  read(geom, "com2", sc.geometry.com2);
  read(geom, "i1", sc.geometry.i1);
  read(geom, "i2", sc.geometry.i2);
  read(geom, "b_h", sc.geometry.b_h);
  read(geom, "b_k", sc.geometry.b_k);
  read(geom, "gravity", sc.geometry.gravity);

  const YAML::Node traj = root["trajectory"];
  check_keys(traj, "trajectory", {"start", "end", "apex_height", "steps", "tick_dt"});
  read_vec2(traj, "start", sc.trajectory.start);
  read_vec2(traj, "end", sc.trajectory.end);
  read(traj, "apex_height", sc.trajectory.apex_height);
  read(traj, "steps", sc.trajectory.steps);
  read(traj, "tick_dt", sc.trajectory.tick_dt);

  if (root["contact"] && !root["contact"].IsNull()) {
    const YAML::Node contact = root["contact"];
    check_keys(contact, "contact", {"trigger_step", "mode", "force", "ramp_steps"});
    ContactSchedule schedule;
    read(contact, "trigger_step", schedule.trigger_step);
    if (contact["mode"]) {
      const auto mode = contact["mode"].as<std::string>();
      if (mode == "jacobian-force") {
        schedule.mode = ContactMode::kJacobianForce;
      } else if (mode == "torque-offset") {
        schedule.mode = ContactMode::kTorqueOffset;
      } else {
        throw std::runtime_error("contact.mode must be jacobian-force or torque-offset");
      }
    }
    read_vec2(contact, "force", schedule.force);
    read(contact, "ramp_steps", schedule.ramp_steps);
    sc.contact = schedule;
  }

  const YAML::Node noise = root["noise"];
  check_keys(noise, "noise", {"pct", "symmetric"});
  read(noise, "pct", sc.noise.pct);
  read(noise, "symmetric", sc.noise.symmetric);

  const YAML::Node ukf = root["ukf"];
  check_keys(ukf, "ukf",
             {"alpha", "sigma_p", "sigma_m", "vp_half_range", "vm_half_range", "literal_noise"});
  read(ukf, "alpha", sc.ukf.alpha);
  Eigen::Vector2d sp(sc.ukf.sigma_p(0), sc.ukf.sigma_p(1));
  Eigen::Vector2d sm(sc.ukf.sigma_m(0), sc.ukf.sigma_m(1));
  read_vec2(ukf, "sigma_p", sp);
  read_vec2(ukf, "sigma_m", sm);
  sc.ukf.sigma_p = sp;
  sc.ukf.sigma_m = sm;
  read(ukf, "vp_half_range", sc.ukf.vp_half_range);
  read(ukf, "vm_half_range", sc.ukf.vm_half_range);
  read(ukf, "literal_noise", sc.ukf.literal_noise);

  const YAML::Node impact = root["impact"];
  check_keys(impact, "impact",
             {"threshold_mode", "threshold", "debounce_steps", "auto_margin", "calibration_runs"});
  if (impact && impact["threshold_mode"]) {
    const auto mode = impact["threshold_mode"].as<std::string>();
    if (mode == "auto") {
      sc.threshold_mode = ThresholdMode::kAuto;
    } else if (mode == "fixed") {
      sc.threshold_mode = ThresholdMode::kFixed;
    } else {
      throw std::runtime_error("impact.threshold_mode must be auto or fixed");
    }
  }
  read_vec2(impact, "threshold", sc.impact.t_threshold);
  read(impact, "debounce_steps", sc.impact.debounce_steps);
  read(impact, "auto_margin", sc.auto_margin);
  read(impact, "calibration_runs", sc.calibration_runs);

  const YAML::Node sampling = root["sampling"];
  check_keys(sampling, "sampling", {"theta_h", "theta_k", "position_count", "velocity_levels"});
  read_range(sampling, "theta_h", cfg.sampling.theta_h_lo, cfg.sampling.theta_h_hi);
  read_range(sampling, "theta_k", cfg.sampling.theta_k_lo, cfg.sampling.theta_k_hi);
  read(sampling, "position_count", cfg.sampling.position_count);
  if (sampling && sampling["velocity_levels"]) {
    cfg.sampling.velocity_levels.clear();
    for (const auto& pair : sampling["velocity_levels"]) {
      const auto v = pair.as<std::vector<double>>();
      if (v.size() != 2) throw std::runtime_error("sampling.velocity_levels entries need 2 values");
      cfg.sampling.velocity_levels.push_back({v[0], v[1]});
    }
  }

  const YAML::Node network = root["network"];
  check_keys(network, "network", {"hidden_layers", "hidden_width"});
  read(network, "hidden_layers", cfg.network.hidden_layers);
  read(network, "hidden_width", cfg.network.hidden_width);

  const YAML::Node training = root["training"];
  check_keys(training, "training",
             {"goal_mse", "max_epochs", "learning_rate", "batch_size", "patience", "split"});
  read(training, "goal_mse", cfg.training.goal_mse);
  read(training, "max_epochs", cfg.training.max_epochs);
  read(training, "learning_rate", cfg.training.learning_rate);
  read(training, "batch_size", cfg.training.batch_size);
  read(training, "patience", cfg.training.patience);
  if (training && training["split"]) {
    const auto v = training["split"].as<std::vector<double>>();
    if (v.size() != 3) throw std::runtime_error("training.split needs 3 fractions");
    cfg.training.split = {v[0], v[1], v[2]};
  }

  read(root, "model", sc.model_path);
  read(root, "seed", sc.seed);
  read(root, "stop_on_collision", sc.stop_on_collision);
  return cfg;
}

void save_config(const AppConfig& cfg, const std::string& path) {
  const ScenarioConfig& sc = cfg.scenario;
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "geometry" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "l1" << YAML::Value << sc.geometry.l1;
  out << YAML::Key << "l2" << YAML::Value << sc.geometry.l2;
  out << YAML::Key << "m1" << YAML::Value << sc.geometry.m1;
  out << YAML::Key << "m2" << YAML::Value << sc.geometry.m2;
  out << YAML::Key << "com1" << YAML::Value << sc.geometry.com1;
  out << YAML::Key << "com2" << YAML::Value << sc.geometry.com2;
  out << YAML::Key << "i1" << YAML::Value << sc.geometry.i1;
  out << YAML::Key << "i2" << YAML::Value << sc.geometry.i2;
  out << YAML::Key << "b_h" << YAML::Value << sc.geometry.b_h;
  out << YAML::Key << "b_k" << YAML::Value << sc.geometry.b_k;
  out << YAML::Key << "gravity" << YAML::Value << sc.geometry.gravity;
  out << YAML::EndMap;

  out << YAML::Key << "trajectory" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << YAML::Flow
      << std::vector<double>{sc.trajectory.start(0), sc.trajectory.start(1)};
  out << YAML::Key << "end" << YAML::Value << YAML::Flow
      << std::vector<double>{sc.trajectory.end(0), sc.trajectory.end(1)};
  out << YAML::Key << "apex_height" << YAML::Value << sc.trajectory.apex_height;
  out << YAML::Key << "steps" << YAML::Value << sc.trajectory.steps;
  out << YAML::Key << "tick_dt" << YAML::Value << sc.trajectory.tick_dt;
  out << YAML::EndMap;

  if (sc.contact) {
    out << YAML::Key << "contact" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "trigger_step" << YAML::Value << sc.contact->trigger_step;
    out << YAML::Key << "mode" << YAML::Value
        << (sc.contact->mode == ContactMode::kJacobianForce ? "jacobian-force" : "torque-offset");
    out << YAML::Key << "force" << YAML::Value << YAML::Flow
        << std::vector<double>{sc.contact->force(0), sc.contact->force(1)};
    out << YAML::Key << "ramp_steps" << YAML::Value << sc.contact->ramp_steps;
    out << YAML::EndMap;
  }

  out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "pct" << YAML::Value << sc.noise.pct;
  out << YAML::Key << "symmetric" << YAML::Value << sc.noise.symmetric;
  out << YAML::EndMap;

  out << YAML::Key << "ukf" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "alpha" << YAML::Value << sc.ukf.alpha;
  out << YAML::Key << "sigma_p" << YAML::Value << YAML::Flow
      << std::vector<double>{sc.ukf.sigma_p(0), sc.ukf.sigma_p(1)};
  out << YAML::Key << "sigma_m" << YAML::Value << YAML::Flow
      << std::vector<double>{sc.ukf.sigma_m(0), sc.ukf.sigma_m(1)};
  out << YAML::Key << "vp_half_range" << YAML::Value << sc.ukf.vp_half_range;
  out << YAML::Key << "vm_half_range" << YAML::Value << sc.ukf.vm_half_range;
  out << YAML::Key << "literal_noise" << YAML::Value << sc.ukf.literal_noise;
  out << YAML::EndMap;

  out << YAML::Key << "impact" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "threshold_mode" << YAML::Value
      << (sc.threshold_mode == ThresholdMode::kAuto ? "auto" : "fixed");
  out << YAML::Key << "threshold" << YAML::Value << YAML::Flow
      << std::vector<double>{sc.impact.t_threshold(0), sc.impact.t_threshold(1)};
  out << YAML::Key << "debounce_steps" << YAML::Value << sc.impact.debounce_steps;
  out << YAML::Key << "auto_margin" << YAML::Value << sc.auto_margin;
  out << YAML::Key << "calibration_runs" << YAML::Value << sc.calibration_runs;
  out << YAML::EndMap;

  out << YAML::Key << "sampling" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "theta_h" << YAML::Value << YAML::Flow
      << std::vector<double>{cfg.sampling.theta_h_lo, cfg.sampling.theta_h_hi};
  out << YAML::Key << "theta_k" << YAML::Value << YAML::Flow
      << std::vector<double>{cfg.sampling.theta_k_lo, cfg.sampling.theta_k_hi};
  out << YAML::Key << "position_count" << YAML::Value << cfg.sampling.position_count;
  out << YAML::Key << "velocity_levels" << YAML::Value << YAML::BeginSeq;
  for (const auto& v : cfg.sampling.velocity_levels)
    out << YAML::Flow << std::vector<double>{v(0), v(1)};
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "hidden_layers" << YAML::Value << cfg.network.hidden_layers;
  out << YAML::Key << "hidden_width" << YAML::Value << cfg.network.hidden_width;
  out << YAML::EndMap;

  out << YAML::Key << "training" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "goal_mse" << YAML::Value << cfg.training.goal_mse;
  out << YAML::Key << "max_epochs" << YAML::Value << cfg.training.max_epochs;
  out << YAML::Key << "learning_rate" << YAML::Value << cfg.training.learning_rate;
  out << YAML::Key << "batch_size" << YAML::Value << cfg.training.batch_size;
  out << YAML::Key << "patience" << YAML::Value << cfg.training.patience;
  out << YAML::Key << "split" << YAML::Value << YAML::Flow
      << std::vector<double>{cfg.training.split[0], cfg.training.split[1], cfg.training.split[2]};
  out << YAML::EndMap;

  out << YAML::Key << "model" << YAML::Value << sc.model_path;
  out << YAML::Key << "seed" << YAML::Value << sc.seed;
  out << YAML::Key << "stop_on_collision" << YAML::Value << sc.stop_on_collision;
  out << YAML::EndMap;

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << out.c_str() << "\n";
}

}  // namespace legimpact
