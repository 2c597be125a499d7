#include "drm/random_measures.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "drm/distributions.hpp"

namespace drm {

HistogramMeasure random_bump_mixture(rng::Stream& stream, double w, const GridSpec& grid) {
  if (!(w > 0.0)) throw std::invalid_argument("random_bump_mixture: w must be positive");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const std::size_t bumps = 1 + stream.below(5);
    std::vector<UniformPiece> pieces;
    double weight = 0.0;
    double first = 0.0;
    double top = 0.0;
    for (std::size_t b = 0; b < bumps; ++b) {
      const double lo = 9.5 * stream.uniform01();
      const double hi = std::min(10.0, lo + 0.2 + 3.8 * stream.uniform01());
      const double wt = 0.1 + 0.9 * stream.uniform01();
      pieces.push_back({lo, hi, wt});
      weight += wt;
      first += wt * 0.5 * (lo + hi);
      top = std::max(top, hi);
    }
    const double scale = w / (first / weight);
    if (top * scale > grid.x_max() / 4.0) continue;
    for (auto& piece : pieces) {
      piece.lo *= scale;
      piece.hi *= scale;
    }
    return from_uniform_pieces(pieces, grid);
  }
  throw std::runtime_error("random_bump_mixture: grid too short for the requested mean");
}

HistogramMeasure projected_gamma(double shape, double w, const GridSpec& grid) {
  if (!(shape > 0.0) || !(w > 0.0)) throw std::invalid_argument("projected_gamma: shape and w must be positive");
  const double scale = w / shape;
  return from_pdf([=](double x) { return gamma_pdf(shape, scale, x); }, grid, 16, Projection::kMeanPreserving);
}

HistogramMeasure random_measure(rng::Stream& stream, double w, const GridSpec& grid) {
  static constexpr double kShapes[] = {0.5, 1.0, 2.0, 3.0};
  if (stream.below(4) != 0) return random_bump_mixture(stream, w, grid);
  return projected_gamma(kShapes[stream.below(4)], w, grid);
}

HistogramMeasure random_measure(std::uint64_t seed, std::uint64_t index, double w, const GridSpec& grid) {
  rng::Stream stream(seed, rng::Purpose::kSampling, 0, index);
  return random_measure(stream, w, grid);
}

std::pair<HistogramMeasure, HistogramMeasure> random_pair(std::uint64_t seed, std::uint64_t index, double w,
                                                          const GridSpec& grid) {
  rng::Stream stream(seed, rng::Purpose::kSampling, 1, index);
  auto p = random_measure(stream, w, grid);
  auto q = random_measure(stream, w, grid);
  return {std::move(p), std::move(q)};
}

}  // namespace drm
