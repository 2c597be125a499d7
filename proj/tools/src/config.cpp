#include "drmlab_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace drm::cli {
namespace {

std::size_t line_of_key(const std::string& text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string::npos) return 0;
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n')) + 1;
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n')) + 1;
}

[[noreturn]] void fail(const ExperimentConfig& cfg, const std::string& key, const std::string& message) {
  const auto it = cfg.origin.find(key);
  const std::string where = it == cfg.origin.end() ? "default " + key : it->second;
  throw ConfigError(where + ": " + message);
}

template <class T>
T get_as(const nlohmann::json& v, std::string_view key, const std::string& where) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw std::invalid_argument("");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw std::invalid_argument("");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw std::invalid_argument("");
      return v.get<std::string>();
    } else {
      if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
        throw std::invalid_argument("");
      return v.get<T>();
    }
  } catch (const std::exception&) {
    std::string type = std::is_same_v<T, double>        ? "a number"
                       : std::is_same_v<T, bool>        ? "true or false"
                       : std::is_same_v<T, std::string> ? "a string"
                                                        : "a nonnegative integer";
    throw ConfigError(where + ": " + std::string(key) + " must be " + type);
  }
}

}  // namespace

void set_value(ExperimentConfig& cfg, std::string_view key, const nlohmann::json& value, const std::string& where) {
  const std::string k(key);
  if (k == "model") cfg.model = get_as<std::string>(value, key, where);
  else if (k == "init") cfg.init = get_as<std::string>(value, key, where);
  else if (k == "w") cfg.w = get_as<double>(value, key, where);
  else if (k == "n") cfg.n = get_as<std::size_t>(value, key, where);
  else if (k == "steps") cfg.steps = get_as<std::size_t>(value, key, where);
  else if (k == "seed") cfg.seed = get_as<std::uint64_t>(value, key, where);
  else if (k == "x_max") cfg.x_max = get_as<double>(value, key, where);
  else if (k == "cells") cfg.cells = get_as<std::size_t>(value, key, where);
  else if (k == "alpha") cfg.alpha = get_as<double>(value, key, where);
  else if (k == "s_min") cfg.s_min = get_as<double>(value, key, where);
  else if (k == "s_max") cfg.s_max = get_as<double>(value, key, where);
  else if (k == "s_points") cfg.s_points = get_as<std::size_t>(value, key, where);
  else if (k == "tolerance") cfg.tolerance = get_as<double>(value, key, where);
  else if (k == "snapshot_every") cfg.snapshot_every = get_as<std::size_t>(value, key, where);
  else if (k == "snapshot_histograms") cfg.snapshot_histograms = get_as<bool>(value, key, where);
  else if (k == "parallel") cfg.parallel = get_as<bool>(value, key, where);
  else if (k == "repeat") cfg.repeat = get_as<std::size_t>(value, key, where);
  else if (k == "out") cfg.out = get_as<std::string>(value, key, where);
  else if (k == "calibrate") cfg.calibrate = get_as<bool>(value, key, where);
  else if (k == "x_lo") cfg.x_lo = get_as<double>(value, key, where);
  else if (k == "x_hi") cfg.x_hi = get_as<double>(value, key, where);
  else if (k == "points") cfg.points = get_as<std::size_t>(value, key, where);
  else if (k == "measures") cfg.measures = get_as<std::size_t>(value, key, where);
  else if (k == "pairs") cfg.pairs = get_as<std::size_t>(value, key, where);
  else if (k == "trace_steps") cfg.trace_steps = get_as<std::size_t>(value, key, where);
  else throw ConfigError(where + ": unknown key '" + k + "'");
  cfg.origin[k] = where;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ":" + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) doc = doc["config"];
  if (!doc.is_object()) throw ConfigError(path.string() + ":1: config must be a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "steps" && value.is_null()) continue;
    set_value(cfg, key, value, path.string() + ":" + std::to_string(line_of_key(text, key)));
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg, std::string_view command) {
  auto positive = [&](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) fail(cfg, key, std::string(key) + " must be positive");
  };
  positive("w", cfg.w);
  positive("x_max", cfg.x_max);
  if (cfg.cells < 2) fail(cfg, "cells", "cells must be at least 2");
  if (cfg.model != "drm" && cfg.model != "dy") fail(cfg, "model", "model must be drm or dy");
  if (cfg.repeat < 1) fail(cfg, "repeat", "repeat must be at least 1");
  if (!(cfg.s_min > 0.0) || !(cfg.s_max > cfg.s_min)) fail(cfg, "s_min", "need 0 < s_min < s_max");
  if (cfg.s_points < 2) fail(cfg, "s_points", "s_points must be at least 2");
  if (!(cfg.tolerance >= 0.0)) fail(cfg, "tolerance", "tolerance must be nonnegative");
  if (cfg.out.empty()) fail(cfg, "out", "out must name a directory");

  if (command == "simulate" || command == "verify") {
    if (cfg.n == 0 || cfg.n % 2 != 0) fail(cfg, "n", "N must be even");
  }
  if (command == "simulate" && !cfg.init.empty() && cfg.init != "equal" && cfg.init != "uniform" &&
      cfg.init != "exponential")
    fail(cfg, "init", "init must be equal, uniform or exponential");
  if (command == "iterate" && !cfg.init.empty() && cfg.init != "uniform" && cfg.init != "equilibrium" &&
      cfg.init != "point" && cfg.init != "exponential")
    fail(cfg, "init", "init must be uniform, equilibrium, point or exponential");
  if (command == "iterate" && !(cfg.alpha >= 1.0 && cfg.alpha <= 2.0))
    fail(cfg, "alpha", "alpha must lie in [1, 2]");
  if (command == "verify") {
    if (!(cfg.alpha > 1.0 && cfg.alpha < 2.0))
      fail(cfg, "alpha", "alpha must lie in (1, 2) for verify; contraction is not asserted outside it");
    if (cfg.pairs == 0) fail(cfg, "pairs", "pairs must be positive");
    if (cfg.measures == 0) fail(cfg, "measures", "measures must be positive");
  }
  if (command == "equilibrium") {
    if (!(cfg.x_lo > 0.0) || !(cfg.x_hi > cfg.x_lo)) fail(cfg, "x_lo", "need 0 < x_lo < x_hi");
    if (cfg.points < 2) fail(cfg, "points", "points must be at least 2");
  }
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j = {
      {"model", cfg.model},
      {"init", cfg.init},
      {"w", cfg.w},
      {"n", cfg.n},
      {"seed", cfg.seed},
      {"x_max", cfg.x_max},
      {"cells", cfg.cells},
      {"alpha", cfg.alpha},
      {"s_min", cfg.s_min},
      {"s_max", cfg.s_max},
      {"s_points", cfg.s_points},
      {"tolerance", cfg.tolerance},
      {"snapshot_every", cfg.snapshot_every},
      {"snapshot_histograms", cfg.snapshot_histograms},
      {"parallel", cfg.parallel},
      {"repeat", cfg.repeat},
      {"out", cfg.out},
      {"calibrate", cfg.calibrate},
      {"x_lo", cfg.x_lo},
      {"x_hi", cfg.x_hi},
      {"points", cfg.points},
      {"measures", cfg.measures},
      {"pairs", cfg.pairs},
      {"trace_steps", cfg.trace_steps},
  };
  if (cfg.steps) j["steps"] = *cfg.steps;
  return j;
}

}  // namespace drm::cli
