#pragma once

// Closed-form equilibrium laws of the two exchange processes.
//
//   DRM (directed transfer):   Gamma(shape 1/2, scale 2w)
//       pdf(x) = exp(-x / 2w) / sqrt(2 w pi x)
//       cdf(x) = erf(sqrt(x / 2w))
//       L[p](s) = 1 / sqrt(1 + 2 w s)
//   DY (pool and re-split):    Exponential(mean w)

#include "drm/rng.hpp"

namespace drm {

/// Error function. Thin wrapper over the C library erf (accurate to a few ulp).
double erf(double x) noexcept;

class DrmEquilibrium {
 public:
  explicit DrmEquilibrium(double mean_wealth);

  double w() const noexcept { return w_; }
  double scale() const noexcept { return 2.0 * w_; }
  double mean() const noexcept { return w_; }
  double variance() const noexcept { return 2.0 * w_ * w_; }

 private:
  double w_;
};

class DyEquilibrium {
 public:
  explicit DyEquilibrium(double mean_wealth);

  double w() const noexcept { return w_; }
  double mean() const noexcept { return w_; }
  double variance() const noexcept { return w_ * w_; }

 private:
  double w_;
};

/// Density; throws std::domain_error for x <= 0 where it diverges.
double drm_pdf(const DrmEquilibrium& eq, double x);
double drm_cdf(const DrmEquilibrium& eq, double x);
double drm_laplace(const DrmEquilibrium& eq, double s);
/// w Z^2 with Z standard normal.
double drm_sample(const DrmEquilibrium& eq, rng::Stream& stream) noexcept;

double dy_pdf(const DyEquilibrium& eq, double x);
double dy_cdf(const DyEquilibrium& eq, double x);
double dy_laplace(const DyEquilibrium& eq, double s);
/// Inverse-CDF draw.
double dy_sample(const DyEquilibrium& eq, rng::Stream& stream) noexcept;

/// Gamma(shape, scale) density, used for test measures and initial data.
double gamma_pdf(double shape, double scale, double x);

}  // namespace drm
