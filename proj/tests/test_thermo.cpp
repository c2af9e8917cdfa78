#include <cmath>
#include <cstdlib>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vertex_expand/errors.hpp"
#include "vertex_expand/parallel.hpp"
#include "vertex_expand/thermo.hpp"

using namespace vertex_expand;
using namespace vertex_expand::thermo;

TEST(FreeEnergy, OrderedAsymptote) {
  const double f = baxter_free_energy(5.0).value;
  EXPECT_GT(f, 5.0);
  EXPECT_LT(f - 5.0, 1e-3);
}

TEST(FreeEnergy, QuadratureAgreesWithSeries) {
  for (double bs : {0.0, 0.1, 0.5, 1.0, 5.0}) {
    EXPECT_NEAR(baxter_free_energy(bs).value, baxter_series_converged(bs).value, 1e-10) << bs;
  }
}

TEST(FreeEnergy, ZeroFieldSumToMachinePrecision) {
  // The plain sum of central binomial terms plus 1/2 ln 2.
  const double sum = oracle::baxter_sum_at_zero();
  EXPECT_NEAR(baxter_series_converged(0.0).value, sum, 1e-14);
  QuadratureSpec tight;
  tight.tolerance = 1e-14;
  EXPECT_NEAR(baxter_free_energy(0.0, tight).value, sum, 1e-13);
}

TEST(FreeEnergy, Even) {
  for (double bs : {0.1, 0.7, 2.0}) {
    EXPECT_NEAR(baxter_free_energy(bs).value, baxter_free_energy(-bs).value, 1e-10);
  }
}

TEST(FreeEnergy, ErrorEstimateWithinTolerance) {
  for (double bs : {0.0, 0.05, 0.3}) {
    const auto r = baxter_free_energy(bs);
    EXPECT_LE(r.error_estimate, 1e-10 * std::max(std::abs(r.value), 1.0));
    EXPECT_GE(r.nodes, 64);
  }
}

TEST(FreeEnergy, SpecValidation) {
  QuadratureSpec bad;
  bad.nodes = 24;
  EXPECT_THROW(baxter_free_energy(0.3, bad), InvalidArgument);
  QuadratureSpec small;
  small.nodes = 16;
  small.max_nodes = 32;
  small.tolerance = 1e-15;
  EXPECT_THROW(baxter_free_energy(0.01, small), ToleranceNotMet);
  EXPECT_THROW(zb_ratio(0.01, small), ToleranceNotMet);
}

TEST(FreeEnergy, ThreadCapDoesNotChangeResults) {
  const double before = baxter_free_energy(0.37).value;
  const double zb_before = zb_ratio(0.37).value;
  ::setenv("VERTEX_EXPAND_THREADS", "1", 1);
  EXPECT_EQ(thread_count(), 1u);
  EXPECT_EQ(baxter_free_energy(0.37).value, before);
  EXPECT_EQ(zb_ratio(0.37).value, zb_before);
  ::unsetenv("VERTEX_EXPAND_THREADS");
}

TEST(Parallel, EveryIndexVisitedOnce) {
  std::vector<int> hits(10007, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) ASSERT_EQ(h, 1);
}

TEST(Series, GeometricTail) {
  const auto s = baxter_series(1.0, 50);
  EXPECT_LT(s.tail_bound, 1e-12);
  EXPECT_EQ(s.terms, 50);
  EXPECT_NEAR(s.value, baxter_free_energy(1.0).value, 1e-12);
  EXPECT_THROW(baxter_series(1.0, -1), InvalidArgument);
}

TEST(Derivative, Values) {
  EXPECT_EQ(dF0_dbetas(0.0).value, 0.0);
  const double d5 = dF0_dbetas(5.0).value;
  EXPECT_LT(1.0 - d5, 1e-3);
  EXPECT_GE(1.0 - d5, 0.0);
  for (double bs : {0.2, 0.5, 1.3}) {
    EXPECT_NEAR(dF0_dbetas(bs).value, oracle::dF0_closed_form(bs), 1e-10);
    EXPECT_EQ(dF0_dbetas(-bs).value, -dF0_dbetas(bs).value);
  }
}

TEST(Derivative, FiniteDifference) {
  QuadratureSpec tight;
  tight.tolerance = 1e-14;
  const double h = 1e-4;
  const double fd = (baxter_free_energy(0.5 + h, tight).value - baxter_free_energy(0.5 - h, tight).value) / (2 * h);
  EXPECT_NEAR(dF0_dbetas(0.5).value, fd, 1e-7);
}

TEST(VertexRatios, Values) {
  EXPECT_NEAR(zb_ratio(0.0).value, 0.25, 1e-10);
  EXPECT_EQ(za_ratio(0.0).value, zb_ratio(0.0).value);
  EXPECT_LT(zb_ratio(6.0).value, 1e-6);
  for (double bs : {0.25, 0.8}) {
    EXPECT_EQ(za_ratio(bs).value, zb_ratio(-bs).value);
    const double a = za_ratio(bs).value, b = zb_ratio(bs).value;
    EXPECT_GE(b, 0.0);
    EXPECT_LE(a + b, 1.0);
    EXPECT_GT(a, b);
  }
}

TEST(FirstOrder, ZeroField) {
  const auto f = first_order_free_energy(0.0, 0.2);
  EXPECT_NEAR(f.coefficient_from_constraints, -0.5, 1e-10);
  EXPECT_NEAR(f.coefficient_from_derivative, -0.5, 1e-15);
  EXPECT_NEAR(f.free_energy, f.f0 - 0.1, 1e-10);
}

TEST(FirstOrder, IdentityHolds) {
  for (double bs : {0.0, 0.25, 0.5, 1.0}) {
    const auto f = first_order_free_energy(bs, 0.0);
    EXPECT_NEAR(f.coefficient_from_constraints, f.coefficient_from_derivative, 1e-8) << bs;
  }
}

TEST(FirstOrder, FrozenAtLargeField) {
  const auto f = first_order_free_energy(5.0, 0.1);
  EXPECT_LT(std::abs(f.coefficient_from_derivative), 1e-3);
  EXPECT_LT(std::abs(f.coefficient_from_constraints), 1e-3);
}
