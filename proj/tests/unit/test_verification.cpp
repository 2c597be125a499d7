#include <gtest/gtest.h>

#include <sstream>

#include "drm/distributions.hpp"
#include "drm/random_measures.hpp"
#include "drm/verification.hpp"

using namespace drm;

namespace {
const GridSpec kGrid(40.0, 4096);
}

TEST(VerifyContraction, DegenerateAndRealPairs) {
  const auto dy = projected_gamma(1.0, 1.0, kGrid);
  const auto drm = projected_drm_equilibrium(1.0, kGrid);
  std::vector<std::pair<HistogramMeasure, HistogramMeasure>> pairs = {{dy, dy}, {dy, drm}};
  const auto report = verify_contraction(pairs, MetricConfig::make(1.5));
  ASSERT_EQ(report.degenerate.size(), 1u);
  EXPECT_EQ(report.degenerate[0], 0u);
  ASSERT_EQ(report.ratios.size(), 1u);
  EXPECT_LE(report.ratios[0], 0.9 * (1 + 1e-3));
  EXPECT_TRUE(report.passed());
  EXPECT_DOUBLE_EQ(report.factor, 0.9);

  const auto j = to_json(report);
  for (const char* key : {"alpha", "factor", "ratios", "violations", "s_argmax"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST(VerifyContraction, RandomPairs) {
  std::vector<std::pair<HistogramMeasure, HistogramMeasure>> pairs;
  for (std::uint64_t i = 0; i < 5; ++i) pairs.push_back(random_pair(51, i, 1.0, kGrid));
  const auto report = verify_contraction(pairs, MetricConfig::make(1.5));
  EXPECT_TRUE(report.passed());
  EXPECT_TRUE(report.endpoint_max.empty());
  EXPECT_EQ(report.ratios.size() + report.degenerate.size(), 5u);
}

TEST(ConvergenceTrace, StartsOnTheBoundAndDecays) {
  const UniformPiece u{0.0, 2.0, 1.0};
  const auto trace = convergence_trace(from_uniform_pieces({&u, 1}, kGrid), 10, MetricConfig::make(1.5));
  ASSERT_EQ(trace.rows.size(), 11u);
  EXPECT_EQ(trace.rows[0].d_alpha, trace.rows[0].bound);
  EXPECT_TRUE(trace.passed());
  EXPECT_GT(trace.floor, 0.0);
  std::ostringstream out;
  write_convergence_csv(out, trace);
  EXPECT_EQ(out.str().rfind("t,d_alpha,bound,floor_flag\n0,", 0), 0u);
}

TEST(ConvergenceTrace, EquilibriumStartSitsOnTheFloor) {
  const auto trace = convergence_trace(projected_drm_equilibrium(1.0, kGrid), 5, MetricConfig::make(1.5));
  for (const auto& row : trace.rows) EXPECT_TRUE(row.floor) << row.t;
  EXPECT_TRUE(trace.passed());
}
