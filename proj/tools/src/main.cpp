#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drmlab_cli/commands.hpp"
#include "drmlab_cli/config.hpp"

namespace {

struct FlagValues {
  std::string config;
  std::string model;
  std::string init;
  double w = 0.0;
  std::size_t n = 0;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  double x_max = 0.0;
  std::size_t cells = 0;
  double alpha = 0.0;
  std::string out;
  bool calibrate = false;
  std::size_t snapshot_every = 0;
  std::size_t repeat = 0;
  bool parallel = false;
  bool snapshot_histograms = false;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::size_t points = 0;
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t s_points = 0;
  double tolerance = 0.0;
  std::size_t measures = 0;
  std::size_t pairs = 0;
  std::size_t trace_steps = 0;
};

struct Bound {
  CLI::Option* option;
  const char* flag;
  const char* key;
  std::function<nlohmann::json()> value;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed random market wealth-exchange lab"};
  app.require_subcommand(1);
  FlagValues f;
  std::vector<Bound> bound;

  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON config file (flat keys mirroring the flags)");
    auto opt = [&](const char* flag, const char* key, auto& target, const char* help) {
      auto* o = sub->add_option(flag, target, help);
      bound.push_back({o, flag, key, [&target] { return nlohmann::json(target); }});
    };
    auto flag = [&](const char* name, const char* key, bool& target, const char* help) {
      auto* o = sub->add_flag(name, target, help);
      bound.push_back({o, name, key, [&target] { return nlohmann::json(target); }});
    };
    opt("--model", "model", f.model, "drm or dy");
    opt("--init", "init", f.init, "initial condition");
    opt("--w", "w", f.w, "mean wealth");
    opt("--n", "n", f.n, "number of agents (even)");
    opt("--steps", "steps", f.steps, "time steps");
    opt("--seed", "seed", f.seed, "64-bit seed");
    opt("--x-max", "x_max", f.x_max, "grid upper edge");
    opt("--cells", "cells", f.cells, "grid cells");
    opt("--alpha", "alpha", f.alpha, "d_alpha exponent");
    opt("--out", "out", f.out, "output directory");
    opt("--snapshot-every", "snapshot_every", f.snapshot_every, "snapshot interval (0: first and last only)");
    opt("--repeat", "repeat", f.repeat, "runs over consecutive seeds");
    opt("--x-lo", "x_lo", f.x_lo, "equilibrium curve start");
    opt("--x-hi", "x_hi", f.x_hi, "equilibrium curve end");
    opt("--points", "points", f.points, "equilibrium curve points");
    opt("--s-min", "s_min", f.s_min, "smallest s of the d_alpha grid");
    opt("--s-max", "s_max", f.s_max, "largest s of the d_alpha grid");
    opt("--s-points", "s_points", f.s_points, "d_alpha grid size");
    opt("--tolerance", "tolerance", f.tolerance, "relative slack on contraction and decay bounds");
    opt("--measures", "measures", f.measures, "random measures for the conservation checks");
    opt("--pairs", "pairs", f.pairs, "random pairs for the contraction check");
    opt("--trace-steps", "trace_steps", f.trace_steps, "steps of the geometric decay trace");
    flag("--calibrate", "calibrate", f.calibrate, "record discretization residuals instead of failing on them");
    flag("--parallel", "parallel", f.parallel, "parallel Monte Carlo step (bit-identical)");
    flag("--snapshot-histograms", "snapshot_histograms", f.snapshot_histograms, "write one histogram per snapshot");
  };

  auto* simulate = app.add_subcommand("simulate", "agent-based Monte Carlo run");
  auto* iterate = app.add_subcommand("iterate", "density iteration p_{t+1} = T[p_t]");
  auto* equilibrium = app.add_subcommand("equilibrium", "closed-form equilibrium density curves");
  auto* verify = app.add_subcommand("verify", "invariant and convergence battery");
  for (auto* sub : {simulate, iterate, equilibrium, verify}) {
    // Each subcommand owns its own options; only the chosen one is parsed.
    add_flags(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return drm::cli::kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  drm::cli::ExperimentConfig cfg;
  try {
    if (!f.config.empty()) cfg = drm::cli::load_config_file(f.config);
    for (const auto& b : bound)
      if (b.option->count() > 0) drm::cli::set_value(cfg, b.key, b.value(), b.flag);
  } catch (const drm::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return drm::cli::kExitConfig;
  }
  return drm::cli::run_command(chosen->get_name(), cfg, std::cout, std::cerr);
}
