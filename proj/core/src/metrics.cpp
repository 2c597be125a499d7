#include "drm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drm {
namespace {

double ratio_at(const HistogramMeasure& p, const HistogramMeasure& q, double s, double alpha) {
  return std::abs(laplace_difference(p, q, s)) / std::pow(s, alpha);
}

}  // namespace

MetricConfig MetricConfig::make(double alpha, double s_min, double s_max, std::size_t points, double tolerance) {
  if (!(s_min > 0.0) || !(s_max > s_min) || points < 2)
    throw std::invalid_argument("MetricConfig: need 0 < s_min < s_max and at least 2 points");
  MetricConfig cfg;
  cfg.alpha = alpha;
  cfg.tolerance = tolerance;
  cfg.s_grid.resize(points);
  const double lo = std::log(s_min);
  const double hi = std::log(s_max);
  for (std::size_t i = 0; i < points; ++i)
    cfg.s_grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  cfg.s_grid.front() = s_min;
  cfg.s_grid.back() = s_max;
  cfg.validate();
  return cfg;
}

void MetricConfig::validate() const {
  if (!(alpha >= 1.0 && alpha <= 2.0)) throw std::invalid_argument("MetricConfig: alpha must lie in [1, 2]");
  if (s_grid.size() < 2) throw std::invalid_argument("MetricConfig: s grid needs at least 2 points");
  if (!(s_grid.front() > 0.0)) throw std::invalid_argument("MetricConfig: s grid must be positive");
  for (std::size_t i = 1; i < s_grid.size(); ++i)
    if (!(s_grid[i] > s_grid[i - 1])) throw std::invalid_argument("MetricConfig: s grid must be strictly increasing");
  if (!(tolerance >= 0.0)) throw std::invalid_argument("MetricConfig: tolerance must be nonnegative");
}

DAlpha d_alpha(const HistogramMeasure& p, const HistogramMeasure& q, const MetricConfig& cfg) {
  const double mp = p.mean();
  const double mq = q.mean();
  if (std::abs(mp - mq) > 1e-8 * std::max(1.0, std::max(std::abs(mp), std::abs(mq))))
    throw std::invalid_argument("d_alpha: measures must have equal means");

  const auto& grid = cfg.s_grid;
  std::vector<double> ratio(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(grid.size()); ++j)
    ratio[static_cast<std::size_t>(j)] = ratio_at(p, q, grid[static_cast<std::size_t>(j)], cfg.alpha);

  const auto best = static_cast<std::size_t>(std::max_element(ratio.begin(), ratio.end()) - ratio.begin());
  DAlpha out{ratio[best], grid[best], false};
  if (out.value == 0.0) return out;
  out.endpoint_max = best == 0 || best + 1 == grid.size();

  // Golden-section search on log s between the neighbours of the grid argmax.
  double lo = std::log(grid[best == 0 ? 0 : best - 1]);
  double hi = std::log(grid[std::min(best + 1, grid.size() - 1)]);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double log_s) { return ratio_at(p, q, std::exp(log_s), cfg.alpha); };
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  for (int iter = 0; iter < 40 && hi - lo > 1e-10; ++iter) {
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = f(b);
    }
  }
  if (fa > out.value) out = {fa, std::exp(a), out.endpoint_max};
  if (fb > out.value) out = {fb, std::exp(b), out.endpoint_max};
  return out;
}

double contraction_factor(double alpha) {
  if (!(alpha > 1.0)) throw std::domain_error("contraction_factor: alpha must exceed 1");
  return 0.5 + 1.0 / (alpha + 1.0);
}

double moment_bound_coefficient(double alpha) {
  if (!(alpha >= 1.0)) throw std::domain_error("moment_bound_coefficient: alpha must be at least 1");
  return (std::pow(2.0, alpha - 1.0) * (alpha + 2.0) + 1.0) / (2.0 * (alpha + 1.0));
}

}  // namespace drm
