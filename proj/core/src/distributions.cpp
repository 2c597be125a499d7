#include "drm/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace drm {
namespace {

double checked_mean(double w, const char* who) {
  if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument(std::string(who) + ": mean wealth must be positive and finite");
  return w;
}

}  // namespace

double erf(double x) noexcept { return std::erf(x); }

DrmEquilibrium::DrmEquilibrium(double mean_wealth) : w_(checked_mean(mean_wealth, "DrmEquilibrium")) {}
DyEquilibrium::DyEquilibrium(double mean_wealth) : w_(checked_mean(mean_wealth, "DyEquilibrium")) {}

double drm_pdf(const DrmEquilibrium& eq, double x) {
  if (!(x > 0.0)) throw std::domain_error("drm_pdf: density is singular at x <= 0");
  const double c = eq.scale();
  return std::exp(-x / c) / std::sqrt(c * std::numbers::pi * x);
}

double drm_cdf(const DrmEquilibrium& eq, double x) {
  if (!(x >= 0.0)) throw std::domain_error("drm_cdf: x must be nonnegative");
  if (std::isinf(x)) return 1.0;
  return erf(std::sqrt(x / eq.scale()));
}

double drm_laplace(const DrmEquilibrium& eq, double s) {
  if (!(s >= 0.0)) throw std::domain_error("drm_laplace: s must be nonnegative");
  return 1.0 / std::sqrt(1.0 + eq.scale() * s);
}

double drm_sample(const DrmEquilibrium& eq, rng::Stream& stream) noexcept {
  const double z = stream.normal();
  return eq.w() * z * z;
}

double dy_pdf(const DyEquilibrium& eq, double x) {
  if (!(x >= 0.0)) throw std::domain_error("dy_pdf: x must be nonnegative");
  return std::exp(-x / eq.w()) / eq.w();
}

double dy_cdf(const DyEquilibrium& eq, double x) {
  if (!(x >= 0.0)) throw std::domain_error("dy_cdf: x must be nonnegative");
  return -std::expm1(-x / eq.w());
}

double dy_laplace(const DyEquilibrium& eq, double s) {
  if (!(s >= 0.0)) throw std::domain_error("dy_laplace: s must be nonnegative");
  return 1.0 / (1.0 + eq.w() * s);
}

double dy_sample(const DyEquilibrium& eq, rng::Stream& stream) noexcept {
  return -eq.w() * std::log1p(-stream.uniform01());
}

double gamma_pdf(double shape, double scale, double x) {
  if (!(shape > 0.0) || !(scale > 0.0)) throw std::invalid_argument("gamma_pdf: shape and scale must be positive");
  if (x < 0.0) throw std::domain_error("gamma_pdf: x must be nonnegative");
  if (x == 0.0) {
    if (shape < 1.0) throw std::domain_error("gamma_pdf: density is singular at 0");
    return shape == 1.0 ? 1.0 / scale : 0.0;
  }
  const double log_pdf = (shape - 1.0) * std::log(x / scale) - x / scale - std::lgamma(shape) - std::log(scale);
  return std::exp(log_pdf);
}

}  // namespace drm
