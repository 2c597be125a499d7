#pragma once

// Numerical checks of the contraction of T in d_alpha.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "drm/histogram.hpp"
#include "drm/metrics.hpp"
#include "drm/operator.hpp"

namespace drm {

struct ContractionReport {
  double alpha = 0.0;
  double factor = 0.0;
  /// One entry per non-degenerate pair, in input order.
  std::vector<double> ratios;
  /// Index into `ratios` of every ratio above factor * (1 + tolerance).
  std::vector<std::size_t> violations;
  /// Argmax of d_alpha(T p, T q) per non-degenerate pair.
  std::vector<double> s_argmax;
  /// Input indices of pairs whose d_alpha(p, q) is below 1e-12.
  std::vector<std::size_t> degenerate;
  /// Input indices of pairs where either d_alpha peaked on the s-grid boundary.
  std::vector<std::size_t> endpoint_max;

  bool passed() const noexcept { return violations.empty(); }
};

/// ratio = d_alpha(T p, T q) / d_alpha(p, q) for each pair. Throws
/// std::invalid_argument when a pair has unequal means and std::domain_error
/// for alpha <= 1.
ContractionReport verify_contraction(const std::vector<std::pair<HistogramMeasure, HistogramMeasure>>& pairs,
                                     const MetricConfig& cfg);

/// {alpha, factor, ratios, violations, s_argmax} plus degenerate and endpoint_max.
nlohmann::json to_json(const ContractionReport& report);

struct ConvergenceRow {
  std::size_t t = 0;
  double d_alpha = 0.0;
  double bound = 0.0;
  bool floor = false;  // measured value is below the discretization floor
};

struct ConvergenceTrace {
  std::vector<ConvergenceRow> rows;
  /// 10 * d_alpha(T p*, p*) for the projected equilibrium p* on the same grid.
  double floor = 0.0;
  /// Steps where measured > bound * (1 + tolerance) before the floor was reached.
  std::vector<std::size_t> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// Measured d_alpha(p_t, p*) next to d_alpha(p_0, p*) * factor^t, w = mean(p0).
/// Once a step lands below the floor the bound is no longer checked.
ConvergenceTrace convergence_trace(const HistogramMeasure& p0, std::size_t steps, const MetricConfig& cfg);

/// Header `t,d_alpha,bound,floor_flag`.
void write_convergence_csv(std::ostream& out, const ConvergenceTrace& trace);
void write_convergence_csv(const std::filesystem::path& path, const ConvergenceTrace& trace);

}  // namespace drm
