#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "drm/distributions.hpp"
#include "drm/histogram.hpp"
#include "drm/random_measures.hpp"

using namespace drm;

namespace {

const GridSpec kGrid(40.0, 16384);

HistogramMeasure projected_drm(double w, const GridSpec& grid, Projection projection = Projection::kCellExact) {
  const DrmEquilibrium eq(w);
  return from_pdf([&eq](double x) { return drm_pdf(eq, x); }, grid, 16, projection);
}

HistogramMeasure projected_dy(double w, const GridSpec& grid, Projection projection = Projection::kCellExact) {
  const DyEquilibrium eq(w);
  return from_pdf([&eq](double x) { return dy_pdf(eq, x); }, grid, 16, projection);
}

}  // namespace

TEST(GridSpec, Geometry) {
  const GridSpec g(10.0, 4);
  EXPECT_DOUBLE_EQ(g.h(), 2.5);
  EXPECT_DOUBLE_EQ(g.left(1), 2.5);
  EXPECT_DOUBLE_EQ(g.right(1), 5.0);
  EXPECT_DOUBLE_EQ(g.center(1), 3.75);
  EXPECT_EQ(g.cell_of(0.0), 0u);
  EXPECT_EQ(g.cell_of(2.5), 1u);
  EXPECT_EQ(g.cell_of(9.99), 3u);
  EXPECT_EQ(g.cell_of(50.0), 3u);
  EXPECT_THROW(GridSpec(0.0, 4), std::invalid_argument);
  EXPECT_THROW(GridSpec(10.0, 1), std::invalid_argument);
}

TEST(HistogramMeasure, RejectsBadInput) {
  const GridSpec g(4.0, 4);
  EXPECT_THROW(HistogramMeasure(g, {0.5, 0.5}), std::invalid_argument);
  EXPECT_THROW(HistogramMeasure(g, {0.5, -0.1, 0.3, 0.3}), std::invalid_argument);
  EXPECT_THROW(HistogramMeasure(g, {0.5, NAN, 0.3, 0.2}), std::invalid_argument);
  EXPECT_THROW(HistogramMeasure(g, {0.5, 0.2, 0.2, 0.0}, 0.1, 3.0), std::invalid_argument);
}

TEST(HistogramMeasure, MeanAndCdf) {
  const GridSpec g(4.0, 4);
  const HistogramMeasure p(g, {0.25, 0.25, 0.25, 0.0}, 0.25, 6.0);
  EXPECT_DOUBLE_EQ(p.total_mass(), 1.0);
  EXPECT_DOUBLE_EQ(p.mean(), 0.25 * (0.5 + 1.5 + 2.5) + 0.25 * 6.0);
  EXPECT_DOUBLE_EQ(p.cdf_at(0.0), 0.0);
  EXPECT_DOUBLE_EQ(p.cdf_at(0.5), 0.125);
  EXPECT_DOUBLE_EQ(p.cdf_at(2.0), 0.5);
  EXPECT_DOUBLE_EQ(p.cdf_at(5.0), 0.75);
  EXPECT_DOUBLE_EQ(p.cdf_at(6.0), 1.0);
  EXPECT_THROW((void)p.cdf_at(-1.0), std::domain_error);
}

TEST(FromPdf, DrmProjectionIsAccurate) {
  const DrmEquilibrium eq(1.0);
  const auto exact = projected_drm(1.0, kGrid);
  EXPECT_NEAR(exact.total_mass(), 1.0, 1e-12);
  EXPECT_LT(exact.tail_mass(), 1e-9);
  EXPECT_LT(ks_distance(exact, [&eq](double x) { return drm_cdf(eq, x); }), 1e-12);

  const auto kept = projected_drm(1.0, kGrid, Projection::kMeanPreserving);
  EXPECT_NEAR(kept.total_mass(), 1.0, 1e-12);
  EXPECT_NEAR(kept.mean(), 1.0, 1e-10);
  EXPECT_LT(ks_distance(kept, [&eq](double x) { return drm_cdf(eq, x); }), 5e-4);
}

TEST(FromPdf, RejectsBadDensities) {
  const GridSpec g(4.0, 16);
  EXPECT_THROW(from_pdf([](double) { return -1.0; }, g), std::invalid_argument);
  EXPECT_THROW(from_pdf([](double) { return 1.0; }, g), std::invalid_argument);
  EXPECT_THROW(from_pdf([](double) { return 0.1; }, g, 4), std::invalid_argument);
}

TEST(Statistics, EquilibriumCvAndGini) {
  EXPECT_NEAR(cv(projected_dy(1.0, kGrid)), 1.0, 0.005);
  EXPECT_NEAR(cv(projected_drm(1.0, kGrid)), std::sqrt(2.0), 0.005);
  EXPECT_NEAR(gini(projected_dy(1.0, kGrid)), 0.5, 0.005);
  EXPECT_NEAR(gini(projected_drm(1.0, kGrid)), 2.0 / std::numbers::pi, 0.005);
}

TEST(Statistics, MomentOfUniform) {
  const UniformPiece u{0.0, 2.0, 1.0};
  const auto p = from_uniform_pieces({&u, 1}, kGrid);
  EXPECT_NEAR(moment(p, 1.0), 1.0, 1e-14);
  // x = 2 falls inside a cell, which the grid model spreads uniformly.
  EXPECT_NEAR(moment(p, 2.0), 4.0 / 3.0, kGrid.h() * kGrid.h());
  EXPECT_NEAR(moment(p, 1.5), std::pow(2.0, 1.5) / 2.5, kGrid.h() * kGrid.h());
  EXPECT_DOUBLE_EQ(moment(p, 0.0), p.total_mass());
  EXPECT_NEAR(mean(p), 1.0, 1e-14);
}

TEST(Statistics, LaplaceOfProjectedLaws) {
  const auto drm = projected_drm(1.0, kGrid);
  const auto dy = projected_dy(1.0, kGrid);
  const double h = kGrid.h();
  for (double s : {1e-4, 0.01, 0.5, 1.0, 3.0, 50.0}) {
    // Inside one cell e^{-sx} moves by at most s h; cell 0 holds the 1/sqrt(x) spike.
    const double bound = s * h * (drm.cell_mass()[0] + s * h) + 1e-12;
    EXPECT_NEAR(laplace(drm, s), drm_laplace(DrmEquilibrium(1.0), s), bound) << s;
    EXPECT_NEAR(laplace(dy, s), dy_laplace(DyEquilibrium(1.0), s), s * h * (dy.cell_mass()[0] + s * h) + 1e-12) << s;
    EXPECT_NEAR(laplace_difference(drm, dy, s), laplace(drm, s) - laplace(dy, s), 1e-13) << s;
  }
  EXPECT_DOUBLE_EQ(laplace(drm, 0.0), drm.total_mass());
}

TEST(Statistics, LaplaceIsCompletelyMonotoneOnGrid) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto p = random_measure(3, i, 1.0, kGrid);
    double prev = 1.0 + 1e-12;
    for (double s = 1e-3; s < 1e3; s *= 1.7) {
      const double v = laplace(p, s);
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(Statistics, CdfIsMonotone) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto p = random_measure(5, i, 1.0, GridSpec(40.0, 256));
    double prev = 0.0;
    for (double x = 0.0; x < 50.0; x += 0.01) {
      const double v = p.cdf_at(x);
      ASSERT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(FromSamples, QuantizationBound) {
  rng::Stream s(17);
  std::vector<double> xs(10000);
  double sum = 0.0;
  for (auto& x : xs) {
    x = 10.0 * s.uniform01();
    sum += x;
  }
  const auto p = from_samples(xs, kGrid);
  EXPECT_NEAR(p.total_mass(), 1.0, 1e-12);
  EXPECT_LE(std::abs(moment(p, 1.0) - sum / 10000.0), 0.5 * kGrid.h());
}

TEST(FromSamples, CentersAreExact) {
  const GridSpec g(8.0, 8);
  const std::vector<double> xs = {0.5, 1.5, 1.5, 6.5};
  const auto p = from_samples(xs, g);
  EXPECT_DOUBLE_EQ(p.mean(), (0.5 + 1.5 + 1.5 + 6.5) / 4.0);
  const std::vector<double> tail = {1.0, 9.0, 11.0};
  const auto q = from_samples(tail, g);
  EXPECT_DOUBLE_EQ(q.tail_mass(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(q.tail_mean(), 10.0);
  EXPECT_THROW(from_samples(std::vector<double>{-1.0}, g), std::invalid_argument);
}

TEST(PointMass, MeanIsExact) {
  for (double x : {0.0, 0.3, 1.0, 2.71, 39.99, 45.0}) {
    const auto p = point_mass(x, kGrid);
    EXPECT_NEAR(p.total_mass(), 1.0, 1e-15);
    if (x >= kGrid.center(0)) EXPECT_NEAR(p.mean(), x, 1e-12) << x;
  }
}

TEST(ProjectMeanPreserving, FixesTheMeanWithSmallShifts) {
  const GridSpec g(4.0, 4);
  // Cell masses of the density 2(1 - x/4)/4 ... any exact pair will do.
  const std::vector<double> mass = {0.4, 0.3, 0.2, 0.1};
  const std::vector<double> offset = {0.4 * 0.3, 0.3 * 0.5, 0.2 * 0.6, 0.1 * 0.5};
  double exact = 0.0;
  for (std::size_t k = 0; k < 4; ++k) exact += g.left(k) * mass[k] + offset[k];
  const auto p = project_mean_preserving(g, mass, offset, 0.0, 0.0);
  EXPECT_NEAR(p.mean(), exact, 1e-15);
  EXPECT_NEAR(p.total_mass(), 1.0, 1e-15);
  EXPECT_THROW(project_mean_preserving(g, std::vector<double>{0.5, -0.1, 0.3, 0.3}, offset, 0.0, 0.0),
               std::invalid_argument);
}

TEST(FromUniformPieces, MassAndMean) {
  const std::vector<UniformPiece> pieces = {{0.0, 1.0, 1.0}, {2.0, 3.3, 3.0}};
  const auto p = from_uniform_pieces(pieces, GridSpec(40.0, 1000));
  EXPECT_NEAR(p.total_mass(), 1.0, 1e-14);
  EXPECT_NEAR(p.mean(), 0.25 * 0.5 + 0.75 * 2.65, 1e-13);
  EXPECT_THROW(from_uniform_pieces(std::vector<UniformPiece>{{1.0, 1.0, 1.0}}, kGrid), std::invalid_argument);
}
