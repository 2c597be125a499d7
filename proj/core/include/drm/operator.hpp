#pragma once

// One step of the mean-field wealth evolution,
//
//   T[p](x) = 1/2 int_0^x p(x - u) Q(u) du + 1/2 Q(x),   Q(u) = int_u^inf p(v)/v dv,
//
// evaluated as the equal mixture of two pushforwards of the exchange rule
// m_i' = (1 - eps) m_i, m_j' = m_j + eps m_i:
//
//   giver:    law of (1 - eps) X       (density Q)
//   receiver: law of X + eps Y         (density p * Q)
//
// with X, Y ~ p independent and eps ~ U[0, 1]. Both pieces are integrated in
// closed form against the piecewise-uniform model of p, so the cell masses
// are exact cell integrals of T[p]. The default projection then shifts mass
// between neighbouring cells so that the cell-center mean is conserved to
// rounding.
//
// Determinism: the receiver convolution accumulates each output cell over
// input cells in increasing index order, independent of thread count.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "drm/histogram.hpp"
#include "drm/metrics.hpp"

namespace drm {

/// The giver kernel Q of a histogram measure, integrated per cell.
struct QTable {
  GridSpec grid;
  /// Q at cell edges 0..n; entry 0 is +inf when cell 0 carries mass.
  std::vector<double> q_at_edges;
  /// Integral of Q over each cell.
  std::vector<double> cell_integral;
  /// Integral of (u - left edge) Q(u) over each cell.
  std::vector<double> cell_offset_moment;
  /// Cell densities of the source measure (mass / h).
  std::vector<double> source_density;
  /// Part of Q beyond x_max (from the source tail bucket) and its mean.
  double beyond_mass = 0.0;
  double beyond_mean = 0.0;
  /// Q is constant at tail_level on [x_max, tail_mean).
  double tail_level = 0.0;
  double tail_mean = 0.0;

  /// Pointwise Q; throws std::domain_error for u <= 0.
  double value_at(double u) const;
  /// Integral of Q over [0, inf); equals the source mass.
  double total() const;
};

QTable build_q(const HistogramMeasure& p);

/// Law of (1 - eps) X.
HistogramMeasure giver_pushforward(const HistogramMeasure& p, Projection projection = Projection::kMeanPreserving);

/// Law of X + eps Y. Exact in cell masses and in the cell-center mean.
HistogramMeasure receiver_pushforward(const HistogramMeasure& p);

/// T[p] = 1/2 giver + 1/2 receiver.
HistogramMeasure apply_T(const HistogramMeasure& p, Projection projection = Projection::kMeanPreserving);

struct TraceRecord {
  std::size_t t = 0;
  double mean = 0.0;
  double m_alpha = 0.0;
  double cv = 0.0;
  double ks = 0.0;      // vs the DRM equilibrium cdf with the current mean
  double d_alpha = 0.0; // vs the projected DRM equilibrium; NaN when undefined
};

struct IterationResult {
  std::vector<TraceRecord> trace;
  HistogramMeasure final_measure;
};

/// Applies T `steps` times, recording diagnostics before the first step and
/// after every step. Throws std::runtime_error when a step produces a cell
/// mass below -1e-12.
IterationResult iterate(const HistogramMeasure& p0, std::size_t steps, const MetricConfig& diagnostics,
                        Projection projection = Projection::kMeanPreserving);

/// DRM equilibrium with mean w, projected onto `grid` with the mean kept exact.
HistogramMeasure projected_drm_equilibrium(double w, const GridSpec& grid);

/// Header `t,mean,m_alpha,cv,ks,d_alpha`, 17 significant digits.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRecord>& trace);

}  // namespace drm
