#pragma once

// Mass-exact representation of wealth distributions on [0, inf).
//
// A HistogramMeasure is a piecewise-uniform density on a uniform grid
// (cell i covers [i h, (i + 1) h)) plus a tail bucket: a point mass of
// `tail_mass` located at `tail_mean >= x_max`. Every derived quantity
// (cdf, moments, Laplace transform) is computed exactly under that model.
//
// The mean of the model is sum_i mass_i * center_i + tail_mass * tail_mean.
// Projections that must conserve the first moment therefore move mass
// between neighbouring cells until the cell-center mean matches the true
// one (see project_mean_preserving).

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace drm {

class GridSpec {
 public:
  GridSpec(double x_max, std::size_t n_cells);

  double x_max() const noexcept { return x_max_; }
  std::size_t n_cells() const noexcept { return n_cells_; }
  double h() const noexcept { return h_; }
  double left(std::size_t i) const noexcept { return static_cast<double>(i) * h_; }
  double right(std::size_t i) const noexcept { return static_cast<double>(i + 1) * h_; }
  double center(std::size_t i) const noexcept { return (static_cast<double>(i) + 0.5) * h_; }

  /// Index of the cell containing x, clamped to [0, n_cells - 1]; x must be >= 0.
  std::size_t cell_of(double x) const noexcept;

  bool operator==(const GridSpec&) const = default;

 private:
  double x_max_;
  std::size_t n_cells_;
  double h_;
};

/// How a continuous law is reduced to cell masses.
enum class Projection {
  /// cell_mass[i] is the exact integral of the law over cell i.
  kCellExact,
  /// Cell masses are adjusted locally so that the cell-center mean equals
  /// the exact first moment; total mass is unchanged.
  kMeanPreserving,
};

class HistogramMeasure {
 public:
  /// Throws std::invalid_argument on size mismatch, negative or non-finite
  /// masses, or a tail mean below x_max while the tail carries mass.
  HistogramMeasure(GridSpec grid, std::vector<double> cell_mass, double tail_mass = 0.0, double tail_mean = 0.0);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> cell_mass() const noexcept { return cell_mass_; }
  double tail_mass() const noexcept { return tail_mass_; }
  double tail_mean() const noexcept { return tail_mean_; }

  double total_mass() const noexcept { return cumulative_.back() + tail_mass_; }
  double mean() const noexcept { return mean_; }

  /// Mass of cells [0, i); i may equal n_cells.
  double mass_below_edge(std::size_t i) const noexcept { return cumulative_[i]; }

  /// Cumulative distribution; throws std::domain_error for x < 0.
  double cdf_at(double x) const;

 private:
  GridSpec grid_;
  std::vector<double> cell_mass_;
  double tail_mass_;
  double tail_mean_;
  std::vector<double> cumulative_;
  double mean_;
};

/// One constant-density piece of a piecewise-uniform law.
struct UniformPiece {
  double lo;
  double hi;
  double weight;
};

/// Builds a measure from exact per-cell masses and in-cell offset moments
/// (offset[k] = integral over cell k of (x - left_k) dm). Every cell then
/// passes the same fraction of its mass to its right (or left) neighbour,
/// the fraction chosen so that the cell-center mean equals the exact first
/// moment. Cumulative masses move by at most that fraction times the largest
/// cell mass. Masses in [-1e-12, 0) are clamped to 0; larger negatives throw
/// std::invalid_argument.
HistogramMeasure project_mean_preserving(const GridSpec& grid, std::span<const double> cell_mass,
                                         std::span<const double> cell_offset_moment, double tail_mass,
                                         double tail_first_moment);

/// Cell integrals of a density by composite Gauss-Legendre. Cell 0 is
/// integrated after the substitution x = t^2 so 1/sqrt(x) singularities
/// stay accurate; the pdf is never evaluated at 0. Mass beyond x_max
/// becomes the tail bucket with a mean estimated on [x_max, 8 x_max].
HistogramMeasure from_pdf(const std::function<double(double)>& pdf, const GridSpec& grid,
                          std::size_t quad_points = 16, Projection projection = Projection::kCellExact);

/// Empirical measure: each sample adds 1/N to its cell or to the tail.
HistogramMeasure from_samples(std::span<const double> samples, const GridSpec& grid);

/// Point mass at x, split between the two nearest cell centers so the mean is exact.
/// Points at or below the first center land entirely in cell 0.
HistogramMeasure point_mass(double x, const GridSpec& grid);

/// Normalized mixture of uniform densities, mean-preserving.
HistogramMeasure from_uniform_pieces(std::span<const UniformPiece> pieces, const GridSpec& grid);

double moment(const HistogramMeasure& p, double alpha);
double mean(const HistogramMeasure& p) noexcept;
double laplace(const HistogramMeasure& p, double s);
/// laplace(p, s) - laplace(q, s), evaluated without cancellation when the grids match.
double laplace_difference(const HistogramMeasure& p, const HistogramMeasure& q, double s);
/// max over cell edges of |cdf_at - target_cdf|.
double ks_distance(const HistogramMeasure& p, const std::function<double(double)>& target_cdf);
double cv(const HistogramMeasure& p);
double gini(const HistogramMeasure& p);

}  // namespace drm
