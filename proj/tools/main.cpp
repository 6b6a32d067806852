#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "legimpact/config.hpp"
#include "legimpact/mlp_predictor.hpp"
#include "legimpact/run_io.hpp"

namespace li = legimpact;

namespace {

li::AppConfig load_or_default(const std::string& config_path) {
  if (config_path.empty()) return li::default_config();
  return li::load_config(config_path);
}

int cmd_gen_data(const std::string& config_path, std::optional<uint64_t> seed,
                 const std::string& out) {
  li::AppConfig cfg = load_or_default(config_path);
  const uint64_t s = seed.value_or(cfg.scenario.seed);
  const li::Dataset data = li::sample_workspace(cfg.scenario.geometry, cfg.sampling, s);
  li::save_dataset_csv(data, out);
  std::printf("wrote %d samples to %s\n", data.size(), out.c_str());
  return 0;
}

int cmd_train(const std::string& config_path, std::optional<uint64_t> seed,
              const std::string& data_path, const std::string& out) {
  li::AppConfig cfg = load_or_default(config_path);
  const uint64_t s = seed.value_or(cfg.scenario.seed);
  const li::Dataset data = li::load_dataset_csv(data_path);

  li::Network net = li::init_network(cfg.network, li::derive_seed(s, 1000));
  const li::TrainReport report = li::train(net, data, cfg.training, s);
  li::save_model(net, out);

  std::printf("epochs: %d%s\n", report.epochs_run, report.reached_goal ? " (goal reached)" : "");
  std::printf("validation mse (normalized): %.6g\n", report.best_val_mse);
  std::printf("regression R: hip %.5f knee %.5f\n", report.validation.r(0),
              report.validation.r(1));
  std::printf("max |error|: hip %.4g knee %.4g N.cm\n", report.train.max_abs_error(0),
              report.train.max_abs_error(1));
  // the max-error statistic doubles as a process-noise scale for the filter
  std::printf("suggested ukf sigma_p: [%.4g, %.4g] N.cm\n", report.train.max_abs_error(0),
              report.train.max_abs_error(1));
  std::printf("model written to %s\n", out.c_str());
  return 0;
}

int cmd_simulate(const std::string& config_path, std::optional<uint64_t> seed,
                 const std::string& out_dir) {
  li::AppConfig cfg = load_or_default(config_path);
  if (seed) cfg.scenario.seed = *seed;

  const li::MlpPredictor predictor(li::load_model(cfg.scenario.model_path));
  const li::RunRecord record = li::run_scenario(cfg.scenario, predictor);

  const std::string run_id = "seed" + std::to_string(cfg.scenario.seed);
  li::emit_run_record(record, run_id, out_dir);

  std::optional<int> trigger;
  if (cfg.scenario.contact) trigger = cfg.scenario.contact->trigger_step;
  const li::SummaryStats stats = li::summarize({record}, trigger);
  li::emit_summary_text(stats, out_dir + "/summary.txt");

  std::printf("threshold used: [%.6g, %.6g] N.cm\n", record.threshold_used(0),
              record.threshold_used(1));
  std::printf("%d ticks, %zu event(s); files in %s\n", static_cast<int>(record.rows.size()),
              record.events.size(), out_dir.c_str());
  return 0;
}

int cmd_calibrate(const std::string& config_path, std::optional<uint64_t> seed, int runs,
                  const std::string& out) {
  li::AppConfig cfg = load_or_default(config_path);
  if (seed) cfg.scenario.seed = *seed;
  if (runs > 0) cfg.scenario.calibration_runs = runs;

  const li::MlpPredictor predictor(li::load_model(cfg.scenario.model_path));
  const Eigen::Vector2d threshold =
      li::calibrate_threshold(cfg.scenario, cfg.scenario.calibration_runs, predictor);

  std::string text;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "threshold: [%.17g, %.17g]\n", threshold(0), threshold(1));
  text += buf;
  std::snprintf(buf, sizeof(buf), "calibration_runs: %d\n", cfg.scenario.calibration_runs);
  text += buf;

  std::fputs(text.c_str(), stdout);
  if (!out.empty()) {
    std::FILE* f = std::fopen(out.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open " + out + " for writing");
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  return 0;
}

int cmd_report(const std::string& config_path, const std::vector<std::string>& run_dirs,
               const std::string& out) {
  li::AppConfig cfg = load_or_default(config_path);

  std::vector<li::RunRecord> records;
  for (const std::string& dir : run_dirs) records.push_back(li::parse_run_record(dir));

  std::optional<int> trigger;
  if (cfg.scenario.contact) trigger = cfg.scenario.contact->trigger_step;
  // infer the trigger from the data when the config does not pin one
  if (!trigger) {
    for (const li::RunRecord& record : records) {
      for (const li::TickRow& row : record.rows) {
        if (row.contact_active) {
          trigger = trigger ? std::min(*trigger, row.step) : row.step;
          break;
        }
      }
    }
  }

  const li::SummaryStats stats = li::summarize(records, trigger);
  const std::string text = li::format_summary(stats);
  std::fputs(text.c_str(), stdout);
  if (!out.empty()) li::emit_summary_text(stats, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-DOF leg collision detection via torque residuals (plant, trainer, filter, CLI)"};
  app.require_subcommand(1);

  std::string config_path, out, data_path;
  std::optional<uint64_t> seed;
  int runs = 0;
  std::vector<std::string> run_dirs;

  auto* gen = app.add_subcommand("gen-data", "sample the workspace into a training dataset CSV");
  gen->add_option("--config", config_path, "YAML config file");
  gen->add_option("--seed", seed, "override the config seed");
  gen->add_option("--out", out, "output CSV path")->required();

  auto* train = app.add_subcommand("train", "train the torque predictor on a dataset CSV");
  train->add_option("--config", config_path, "YAML config file");
  train->add_option("--seed", seed, "override the config seed");
  train->add_option("--data", data_path, "dataset CSV")->required();
  train->add_option("--out", out, "output model path")->required();

  auto* sim = app.add_subcommand("simulate", "run one scenario and emit run/trace/event CSVs");
  sim->add_option("--config", config_path, "YAML config file");
  sim->add_option("--seed", seed, "override the config seed");
  sim->add_option("--out", out, "output directory")->required();

  auto* cal = app.add_subcommand("calibrate", "estimate the detection threshold from clean runs");
  cal->add_option("--config", config_path, "YAML config file");
  cal->add_option("--seed", seed, "override the config seed");
  cal->add_option("--runs", runs, "number of calibration runs");
  cal->add_option("--out", out, "also write the result to this file");

  auto* rep = app.add_subcommand("report", "summarize emitted run directories");
  rep->add_option("--config", config_path, "YAML config file (for the trigger step)");
  rep->add_option("--seed", seed, "ignored; reports are deterministic");
  rep->add_option("--out", out, "also write the report to this file");
  rep->add_option("dirs", run_dirs, "run directories from simulate")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(config_path, seed, out);
    if (train->parsed()) return cmd_train(config_path, seed, data_path, out);
    if (sim->parsed()) return cmd_simulate(config_path, seed, out);
    if (cal->parsed()) return cmd_calibrate(config_path, seed, runs, out);
    if (rep->parsed()) return cmd_report(config_path, run_dirs, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
