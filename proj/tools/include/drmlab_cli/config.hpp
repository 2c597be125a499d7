#pragma once

// Effective configuration shared by all subcommands.
//
// A config file is a flat JSON object whose keys mirror the long flags
// (`x_max` for `--x-max`). Flags given on the command line win over the
// file. A run manifest is accepted as a config file too: its "config"
// member is used.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace drm::cli {

/// Invalid configuration; the message names the file line or flag at fault.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string model = "drm";
  std::string init;  // per-command default when empty
  double w = 1.0;
  std::size_t n = 200000;
  std::optional<std::size_t> steps;  // per-command default when unset
  std::uint64_t seed = 42;
  double x_max = 40.0;
  std::size_t cells = 16384;
  double alpha = 1.5;
  double s_min = 1e-4;
  double s_max = 1e4;
  std::size_t s_points = 400;
  double tolerance = 1e-3;
  std::size_t snapshot_every = 1;
  bool snapshot_histograms = false;
  bool parallel = false;
  std::size_t repeat = 1;
  std::string out = ".";
  bool calibrate = false;
  double x_lo = 0.01;
  double x_hi = 8.0;
  std::size_t points = 800;
  std::size_t measures = 50;
  std::size_t pairs = 20;
  std::size_t trace_steps = 30;

  /// Where each non-default value came from ("path:line" or "--flag").
  std::map<std::string, std::string> origin;

  std::size_t steps_or(std::size_t fallback) const { return steps.value_or(fallback); }
};

/// Reads a config file; throws ConfigError on unreadable files, syntax
/// errors, unknown keys and wrong value types.
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Applies one value given by key. `where` is recorded as its origin.
void set_value(ExperimentConfig& cfg, std::string_view key, const nlohmann::json& value, const std::string& where);

/// Checks the fields `command` uses; throws ConfigError.
void validate(const ExperimentConfig& cfg, std::string_view command);

/// Every field, keyed like the config file.
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace drm::cli
