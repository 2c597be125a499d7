#include <gtest/gtest.h>

#include <cmath>

#include "drm/random_measures.hpp"

using namespace drm;

TEST(RandomMeasures, MeanAndSupport) {
  const GridSpec g(40.0, 2048);
  for (std::uint64_t i = 0; i < 30; ++i) {
    const auto p = random_measure(61, i, 1.0, g);
    EXPECT_NEAR(p.total_mass(), 1.0, 1e-12);
    EXPECT_NEAR(p.mean(), 1.0, 1e-10);
  }
  rng::Stream s(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_bump_mixture(s, 2.0, g);
    EXPECT_NEAR(p.mean(), 2.0, 1e-10);
    EXPECT_NEAR(p.cdf_at(10.0 + g.h()), 1.0, 1e-12);
  }
}

TEST(RandomMeasures, Reproducible) {
  const GridSpec g(40.0, 256);
  const auto a = random_measure(7, 3, 1.0, g);
  const auto b = random_measure(7, 3, 1.0, g);
  for (std::size_t k = 0; k < g.n_cells(); ++k) EXPECT_EQ(a.cell_mass()[k], b.cell_mass()[k]);
}

TEST(RandomMeasures, GammaShapes) {
  const GridSpec g(40.0, 4096);
  for (double shape : {0.5, 1.0, 2.0, 3.0}) {
    const auto p = projected_gamma(shape, 1.0, g);
    EXPECT_NEAR(p.mean(), 1.0, 1e-10) << shape;
    EXPECT_NEAR(cv(p), 1.0 / std::sqrt(shape), 5e-3) << shape;
  }
}
