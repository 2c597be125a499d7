#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <sstream>

#include "brute_force.hpp"
#include "drm/distributions.hpp"
#include "drm/operator.hpp"
#include "drm/random_measures.hpp"

using namespace drm;

namespace {

const GridSpec kGrid(40.0, 16384);
const GridSpec kSmall(40.0, 64);

HistogramMeasure uniform02(const GridSpec& grid) {
  const UniformPiece u{0.0, 2.0, 1.0};
  return from_uniform_pieces({&u, 1}, grid);
}

}  // namespace

TEST(BuildQ, IntegratesToOne) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    const auto p = random_measure(31, i, 1.0, kGrid);
    const auto q = build_q(p);
    EXPECT_NEAR(q.total(), 1.0, 1e-10) << i;
  }
}

TEST(BuildQ, NonincreasingAtEdges) {
  const auto q = build_q(random_measure(32, 0, 1.0, kGrid));
  for (std::size_t i = 1; i < q.q_at_edges.size(); ++i) ASSERT_LE(q.q_at_edges[i], q.q_at_edges[i - 1]);
  EXPECT_GE(q.q_at_edges.back(), 0.0);
}

TEST(BuildQ, PointMassAtOne) {
  const auto q = build_q(point_mass(1.0, kGrid));
  EXPECT_NEAR(q.value_at(0.5), 1.0, 1e-3);
  EXPECT_EQ(q.value_at(1.5), 0.0);
  EXPECT_THROW((void)q.value_at(0.0), std::domain_error);
}

TEST(BuildQ, ExponentialIntegralAtOne) {
  const DyEquilibrium eq(1.0);
  const auto p = from_pdf([&eq](double x) { return dy_pdf(eq, x); }, kGrid);
  EXPECT_NEAR(build_q(p).value_at(1.0), 0.21938393439552027, 1e-6);
}

TEST(BuildQ, TailIsAFlatStep) {
  const HistogramMeasure p(kSmall, std::vector<double>(64, 0.0), 1.0, 50.0);
  const auto q = build_q(p);
  EXPECT_DOUBLE_EQ(q.value_at(10.0), 1.0 / 50.0);
  EXPECT_DOUBLE_EQ(q.value_at(45.0), 1.0 / 50.0);
  EXPECT_EQ(q.value_at(55.0), 0.0);
  EXPECT_NEAR(q.total(), 1.0, 1e-14);
}

TEST(Giver, PointMassGivesUniform) {
  const GridSpec g(4.0, 400);
  const auto p = point_mass(g.center(99), g);  // all mass in cell 99, [0.99, 1.0)
  const auto out = giver_pushforward(p, Projection::kCellExact);
  for (std::size_t k = 0; k < 99; ++k) EXPECT_NEAR(out.cell_mass()[k], g.h() / g.center(99), 1e-4) << k;
  EXPECT_NEAR(out.total_mass(), 1.0, 1e-12);
}

TEST(Giver, HalvesTheMean) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto p = random_measure(33, i, 1.0, kGrid);
    const auto out = giver_pushforward(p);
    EXPECT_NEAR(out.total_mass(), p.total_mass(), 1e-12);
    EXPECT_NEAR(out.mean(), 0.5 * p.mean(), 1e-12);
  }
}

TEST(Receiver, AddsHalfTheMean) {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const auto p = random_measure(34, i, 1.0, kGrid);
    const auto out = receiver_pushforward(p);
    EXPECT_NEAR(out.total_mass(), 1.0, 1e-12);
    EXPECT_NEAR(out.mean(), 1.5 * p.mean(), 1e-10);
  }
}

TEST(Receiver, SupportOfUniform) {
  const auto out = receiver_pushforward(uniform02(kGrid));
  const double top = 2.0 * kGrid.right(kGrid.cell_of(2.0));
  EXPECT_NEAR(out.cdf_at(top + kGrid.h()), 1.0, 1e-12);
  EXPECT_LT(out.cdf_at(3.0), 1.0 - 1e-3);
  EXPECT_EQ(out.tail_mass(), 0.0);
}

TEST(Receiver, MassAtZeroStaysThere) {
  std::vector<double> cells(kSmall.n_cells(), 0.0);
  cells[0] = 1.0;
  const auto out = receiver_pushforward(HistogramMeasure(kSmall, cells));
  EXPECT_NEAR(out.cell_mass()[0] + out.cell_mass()[1], 1.0, 1e-14);
}

TEST(ApplyT, ConservesMassAndMean) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto p = random_measure(35, i, 1.0, kGrid);
    const auto tp = apply_T(p);
    EXPECT_NEAR(tp.total_mass(), p.total_mass(), 1e-12);
    EXPECT_NEAR(tp.mean(), p.mean(), 1e-10 * p.mean());
    for (double m : tp.cell_mass()) ASSERT_GE(m, 0.0);
  }
}

TEST(ApplyT, SecondMomentRecursion) {
  // E[X'^2] = 5/6 E[X^2] + w^2 / 2 for the exchange rule.
  const auto p = uniform02(kGrid);
  const auto tp = apply_T(p, Projection::kCellExact);
  EXPECT_NEAR(moment(tp, 2.0), 5.0 / 6.0 * moment(p, 2.0) + 0.5, 1e-4);
}

TEST(ApplyT, MatchesBruteForceQuadrature) {
  for (std::uint64_t i = 0; i < 3; ++i) {
    const auto p = random_measure(36, i, 1.0, kSmall);
    const auto ref = oracle::BruteForceT(p).cell_masses();
    const auto tp = apply_T(p, Projection::kCellExact);
    for (std::size_t k = 0; k < kSmall.n_cells(); ++k) EXPECT_NEAR(tp.cell_mass()[k], ref[k], 1e-8) << i << ' ' << k;
  }
}

TEST(ApplyT, MatchesBruteForceWithTail) {
  std::vector<double> cells(kSmall.n_cells(), 0.0);
  cells[1] = 0.3;
  cells[5] = 0.5;
  cells[20] = 0.15;
  const HistogramMeasure p(kSmall, cells, 0.05, 47.0);
  const auto ref = oracle::BruteForceT(p).cell_masses();
  const auto tp = apply_T(p, Projection::kCellExact);
  for (std::size_t k = 0; k < kSmall.n_cells(); ++k) EXPECT_NEAR(tp.cell_mass()[k], ref[k], 1e-8) << k;
  EXPECT_NEAR(tp.total_mass(), 1.0, 1e-12);
  EXPECT_NEAR(apply_T(p).mean(), p.mean(), 1e-10 * p.mean());
}

TEST(ApplyT, FixedPoint) {
  const DrmEquilibrium eq(1.0);
  const auto tp = apply_T(projected_drm_equilibrium(1.0, kGrid));
  EXPECT_LE(ks_distance(tp, [&eq](double x) { return drm_cdf(eq, x); }), 1e-3);
}

TEST(ApplyT, LaplaceIdentity) {
  const DyEquilibrium eq(1.0);
  const auto p = from_pdf([&eq](double x) { return dy_pdf(eq, x); }, kGrid, 16, Projection::kMeanPreserving);
  const auto tp = apply_T(p);
  EXPECT_NEAR(laplace(tp, 0.01), 0.9901071789538538, 1e-4);
  EXPECT_NEAR(laplace(tp, 1.0), 0.5198603854199590, 1e-4);
  EXPECT_NEAR(laplace(tp, 10.0), 0.13079428760718384, 1e-4);
}

TEST(Iterate, ZeroSteps) {
  const auto p = uniform02(GridSpec(40.0, 4000));
  const auto result = iterate(p, 0, MetricConfig::make());
  ASSERT_EQ(result.trace.size(), 1u);
  EXPECT_EQ(result.trace[0].t, 0u);
  EXPECT_NEAR(result.trace[0].mean, 1.0, 1e-14);
  EXPECT_NEAR(result.trace[0].cv, 1.0 / std::sqrt(3.0), 1e-4);
}

TEST(Iterate, MeanHoldsAndDistanceShrinks) {
  const GridSpec g(40.0, 4096);
  const auto result = iterate(uniform02(g), 40, MetricConfig::make());
  ASSERT_EQ(result.trace.size(), 41u);
  for (const auto& r : result.trace) EXPECT_NEAR(r.mean, 1.0, 1e-8);
  EXPECT_LT(result.trace.back().d_alpha, 0.1 * result.trace.front().d_alpha);
  EXPECT_LT(result.trace.back().ks, result.trace.front().ks);
}

TEST(Iterate, TraceCsv) {
  const auto result = iterate(uniform02(kSmall), 2, MetricConfig::make());
  std::ostringstream out;
  write_trace_csv(out, result.trace);
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("t,mean,m_alpha,cv,ks,d_alpha\n0,", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}
