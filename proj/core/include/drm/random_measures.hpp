#pragma once

// Seeded test measures for property checks and the verify battery.

#include <cstdint>
#include <utility>

#include "drm/histogram.hpp"
#include "drm/rng.hpp"

namespace drm {

/// Mixture of 1 to 5 uniform bumps drawn on [0, 10], rescaled to mean w.
/// Redraws until the support ends below x_max / 4.
HistogramMeasure random_bump_mixture(rng::Stream& stream, double w, const GridSpec& grid);

/// Gamma law with the given shape and mean w, projected with the mean kept.
HistogramMeasure projected_gamma(double shape, double w, const GridSpec& grid);

/// Bump mixture with probability 3/4, otherwise a gamma with shape in {0.5, 1, 2, 3}.
HistogramMeasure random_measure(rng::Stream& stream, double w, const GridSpec& grid);

/// Measure `index` of the family seeded by `seed`; independent across indices.
HistogramMeasure random_measure(std::uint64_t seed, std::uint64_t index, double w, const GridSpec& grid);

/// Two independent draws with the same mean.
std::pair<HistogramMeasure, HistogramMeasure> random_pair(std::uint64_t seed, std::uint64_t index, double w,
                                                          const GridSpec& grid);

}  // namespace drm
