#pragma once

// Subcommands of the drmlab runner. Each returns the process exit code:
// 0 success, 1 verification failure, 2 config error, 3 runtime invariant
// violation.

#include <iosfwd>
#include <string_view>

#include "drmlab_cli/config.hpp"

namespace drm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Monte Carlo run: snapshots.csv, final_histogram.csv, manifest.json
/// (one run_<k>/ directory per repeat when repeat > 1).
int cmd_simulate(ExperimentConfig cfg, std::ostream& log);

/// Density iteration: trace.csv, final_histogram.csv, manifest.json.
int cmd_iterate(ExperimentConfig cfg, std::ostream& log);

/// Closed-form equilibrium densities: equilibrium.csv (`x,p_drm,p_dy`), manifest.json.
int cmd_equilibrium(ExperimentConfig cfg, std::ostream& log);

/// Invariant battery: verify_report.json, convergence.csv.
int cmd_verify(ExperimentConfig cfg, std::ostream& log);

/// Validates, dispatches and maps exceptions to exit codes; messages go to `err`.
int run_command(std::string_view command, const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace drm::cli
