#pragma once

// Built-in scenarios, stored as config text so they go through the same
// parser and validation as user files.

#include <string>
#include <vector>

#include "cbody/scenario.hpp"

namespace cbody {

struct Preset {
  std::string name;
  std::string description;
  std::string text;  // config source
};

const std::vector<Preset>& preset_catalogue();

/// Parsed and validated configs, in catalogue order.
std::vector<ScenarioConfig> presets();

/// Throws Error(ConfigError) for an unknown name.
ScenarioConfig preset_config(const std::string& name);
bool is_preset(const std::string& name);

}  // namespace cbody
