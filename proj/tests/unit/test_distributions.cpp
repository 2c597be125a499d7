#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "drm/distributions.hpp"

using namespace drm;

TEST(Erf, ReferenceValues) {
  EXPECT_NEAR(drm::erf(1.0), 0.8427007929497149, 1e-15);
  EXPECT_NEAR(drm::erf(2.0), 0.9953222650189527, 1e-15);
  EXPECT_NEAR(drm::erf(std::sqrt(0.5)), 0.6826894921370859, 1e-15);
  EXPECT_EQ(drm::erf(0.0), 0.0);
  EXPECT_NEAR(drm::erf(-1.0), -0.8427007929497149, 1e-15);
}

TEST(DrmEquilibrium, Density) {
  const DrmEquilibrium eq(1.0);
  EXPECT_NEAR(drm_pdf(eq, 2.0), 0.10377687435514867, 1e-15);
  EXPECT_THROW(drm_pdf(eq, 0.0), std::domain_error);
  EXPECT_THROW(drm_pdf(eq, -1.0), std::domain_error);
  EXPECT_DOUBLE_EQ(drm_pdf(DrmEquilibrium(2.0), 4.0), 0.5 * drm_pdf(eq, 2.0));
}

TEST(DrmEquilibrium, CdfIsErf) {
  const DrmEquilibrium eq(1.0);
  EXPECT_NEAR(drm_cdf(eq, 2.0), 0.8427007929497149, 1e-15);
  EXPECT_NEAR(drm_cdf(eq, 1.0), 0.6826894921370859, 1e-15);
  EXPECT_EQ(drm_cdf(eq, 0.0), 0.0);
}

TEST(DrmEquilibrium, CdfMatchesIntegratedDensity) {
  const DrmEquilibrium eq(0.7);
  // Midpoint rule on x = t^2, which removes the 1/sqrt(x) singularity.
  const double x = 1.3;
  const int n = 20000;
  const double top = std::sqrt(x);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = (i + 0.5) * top / n;
    sum += 2.0 * t * drm_pdf(eq, t * t);
  }
  EXPECT_NEAR(sum * top / n, drm_cdf(eq, x), 1e-8);
}

TEST(DrmEquilibrium, Laplace) {
  EXPECT_NEAR(drm_laplace(DrmEquilibrium(1.0), 2.0), 0.4472135954999579, 1e-15);
  EXPECT_DOUBLE_EQ(drm_laplace(DrmEquilibrium(1.0), 0.0), 1.0);
}

TEST(DrmEquilibrium, Moments) {
  const DrmEquilibrium eq(1.5);
  EXPECT_DOUBLE_EQ(eq.mean(), 1.5);
  EXPECT_DOUBLE_EQ(std::sqrt(eq.variance()) / eq.mean(), std::sqrt(2.0));
  EXPECT_THROW(DrmEquilibrium(0.0), std::invalid_argument);
  EXPECT_THROW(DrmEquilibrium(-1.0), std::invalid_argument);
}

TEST(DyEquilibrium, Values) {
  const DyEquilibrium eq(1.0);
  EXPECT_NEAR(dy_pdf(eq, 2.0), std::exp(-2.0), 1e-16);
  EXPECT_NEAR(dy_cdf(eq, 1.0), 0.6321205588285577, 1e-15);
  EXPECT_NEAR(dy_laplace(eq, 1.0), 0.5, 1e-16);
  EXPECT_THROW(DyEquilibrium(0.0), std::invalid_argument);
}

TEST(Gamma, HalfShapeIsDrm) {
  const DrmEquilibrium eq(1.0);
  for (double x : {0.01, 0.5, 2.0, 7.0}) EXPECT_NEAR(gamma_pdf(0.5, 2.0, x), drm_pdf(eq, x), 1e-15);
  EXPECT_NEAR(gamma_pdf(1.0, 1.0, 2.0), std::exp(-2.0), 1e-16);
}

TEST(Sampling, DrmMomentsMatch) {
  const DrmEquilibrium eq(1.0);
  rng::Stream s(11);
  const int n = 400000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = drm_sample(eq, s);
    ASSERT_GE(x, 0.0);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(std::sqrt(sum2 / n - mean * mean) / mean, std::sqrt(2.0), 0.02);
}

TEST(Sampling, DyMeanMatches) {
  const DyEquilibrium eq(2.0);
  rng::Stream s(12);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += dy_sample(eq, s);
  EXPECT_NEAR(sum / n, 2.0, 5.0 * 2.0 / std::sqrt(n));
}
