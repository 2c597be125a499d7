#pragma once

// Laplace-transform distance between equal-mean wealth laws:
//
//   d_alpha(p, q) = sup_{s > 0} |L[p](s) - L[q](s)| / s^alpha
//
// For equal means and finite second moments the ratio vanishes at both ends
// of the s axis, so the supremum is approximated by the max over a
// log-spaced grid followed by a golden-section refinement around the grid
// argmax. A max sitting on a grid endpoint is reported, since the true
// supremum may then lie outside the window.

#include <cstddef>
#include <vector>

#include "drm/histogram.hpp"

namespace drm {

struct MetricConfig {
  double alpha = 1.5;
  std::vector<double> s_grid;
  double tolerance = 1e-3;

  /// Log-spaced grid of `points` values on [s_min, s_max].
  /// alpha must lie in [1, 2]; the contraction results need alpha > 1.
  static MetricConfig make(double alpha = 1.5, double s_min = 1e-4, double s_max = 1e4, std::size_t points = 400,
                           double tolerance = 1e-3);

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

struct DAlpha {
  double value = 0.0;
  double s_argmax = 0.0;
  bool endpoint_max = false;
};

/// Requires equal means (within 1e-8 relative); throws std::invalid_argument otherwise.
DAlpha d_alpha(const HistogramMeasure& p, const HistogramMeasure& q, const MetricConfig& cfg);

/// 1/2 + 1/(alpha + 1); throws std::domain_error for alpha <= 1.
double contraction_factor(double alpha);

/// (2^(alpha-1) (alpha + 2) + 1) / (2 (alpha + 1)); throws std::domain_error for alpha < 1.
double moment_bound_coefficient(double alpha);

}  // namespace drm
