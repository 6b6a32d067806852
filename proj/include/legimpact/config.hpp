#pragma once

#include <string>

#include "legimpact/dataset.hpp"
#include "legimpact/mlp.hpp"
#include "legimpact/scenario.hpp"

namespace legimpact {

// Full tool configuration: the scenario plus the data-collection and
// training sections used by gen-data/train. Every key has a default; a
// missing key (or missing file section) keeps it.
struct AppConfig {
  ScenarioConfig scenario;
  SampleGridSpec sampling = SampleGridSpec::defaults();
  NetworkSpec network;
  TrainOptions training;
};

AppConfig default_config();

// YAML schema documented in configs/default.yaml. Unknown keys are rejected.
AppConfig load_config(const std::string& path);
void save_config(const AppConfig& cfg, const std::string& path);

}  // namespace legimpact
