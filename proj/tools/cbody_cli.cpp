// Batch runner for continuum-body scenarios.

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "cbody/error.hpp"
#include "cbody/presets.hpp"
#include "cbody/scenario.hpp"

namespace {

cbody::ScenarioConfig resolve(const std::string& target) {
  if (std::filesystem::exists(target)) return cbody::load_config(target);
  if (cbody::is_preset(target)) return cbody::preset_config(target);
  throw cbody::Error(cbody::ErrorCode::ConfigError, "no config file or preset named '" + target + "'");
}

void apply_check_override(cbody::ScenarioConfig& cfg, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw cbody::Error(cbody::ErrorCode::ConfigError, "--check expects name=on|off, got '" + spec + "'");
  }
  const std::string name = spec.substr(0, eq), value = spec.substr(eq + 1);
  const auto& names = cbody::check_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw cbody::Error(cbody::ErrorCode::ConfigError, "unknown check '" + name + "'");
  }
  if (value != "on" && value != "off") {
    throw cbody::Error(cbody::ErrorCode::ConfigError, "--check " + name + " expects on or off");
  }
  cfg.checks.enabled[name] = value == "on";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cbody: minimize and verify continuum bodies with a manifold-valued descriptor"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a config file or a built-in preset");
  std::string target;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::vector<std::string> checks;
  run->add_option("config", target, "Config file path or preset name")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Random seed");
  run->add_option("--resolution", resolution, "Cells per axis");
  run->add_option("--check", checks, "Toggle a check: name=on|off (repeatable)");

  auto* list = app.add_subcommand("presets", "List built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cbody::kExitOk : cbody::kExitConfigError;
  }

  if (list->parsed()) {
    for (const auto& p : cbody::preset_catalogue()) {
      std::cout << std::left << std::setw(24) << p.name << p.description << '\n';
    }
    return cbody::kExitOk;
  }

  cbody::ScenarioConfig cfg;
  try {
    cfg = resolve(target);
    if (out_dir) cfg.output.dir = *out_dir;
    if (seed) cfg.seed = *seed;
    if (resolution) cfg.grid.resolution = *resolution;
    for (const auto& c : checks) apply_check_override(cfg, c);
    cfg.validate();
  } catch (const cbody::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cbody::kExitConfigError;
  }

  try {
    const cbody::ScenarioResult result = cbody::run_scenario(cfg);
    cbody::write_artifacts(cfg, result);
    for (const auto& [k, v] : result.summary) std::cout << k << ": " << v << '\n';
    for (const auto& c : result.checks) {
      if (c.status != "pass" && !c.detail.empty()) std::cout << "  " << c.name << ": " << c.detail << '\n';
    }
    std::cout << "artifacts: " << cfg.output.dir << '\n';
    return result.all_passed ? cbody::kExitOk : cbody::kExitChecksFailed;
  } catch (const cbody::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == cbody::ErrorCode::ConfigError ? cbody::kExitConfigError : cbody::kExitRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cbody::kExitRuntimeError;
  }
}
