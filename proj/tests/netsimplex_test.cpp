#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "iio/gen.hpp"
#include "iio/netsimplex.hpp"
#include "iio/solve.hpp"
#include "oracles.hpp"

namespace {

using iio::BasisTree;
using iio::SolveOptions;
using iio::Variant;

TEST(NetworkSimplex, WorkedExample) {
  const auto instance = fixture::small();
  SolveOptions options;
  options.record_trace = true;
  const auto result =
      iio::network_simplex(instance, BasisTree::from_edges(3, 3, fixture::small_start()), options);
  EXPECT_TRUE(result.report.optimal);
  EXPECT_EQ(result.report.objective, 110);
  EXPECT_EQ(result.solution.objective, 110);
  ASSERT_FALSE(result.report.trace.empty());
  // First negative in row-major order is x21 with r = -4.
  EXPECT_EQ(result.report.trace[0].source, 1);
  EXPECT_EQ(result.report.trace[0].destination, 0);
  EXPECT_EQ(result.report.trace[0].objective, 250 - 4 * 10);
  EXPECT_EQ(result.report.pivots_total, static_cast<std::int64_t>(result.report.trace.size()));
  EXPECT_EQ(result.report.pivots_phase1, 0);
  EXPECT_EQ(result.report.macro_iterations, 0);
}

TEST(NetworkSimplex, OptimalStartMakesNoPivot) {
  const auto instance = fixture::small();
  const auto result = iio::network_simplex(instance, BasisTree::from_edges(3, 3, fixture::small_optimum()));
  EXPECT_TRUE(result.report.optimal);
  EXPECT_EQ(result.report.pivots_total, 0);
  EXPECT_EQ(result.report.multiplier_computations, 1);
  EXPECT_EQ(result.basis.edges(), fixture::small_optimum());
}

TEST(NetworkSimplex, RejectsInfeasibleBasis) {
  const auto instance = fixture::small();
  auto edges = fixture::small_start();
  edges[0].flow += 1;
  EXPECT_THROW(iio::network_simplex(instance, BasisTree::from_edges(3, 3, edges)), std::invalid_argument);
}

TEST(NetworkSimplex, MatchesOracles) {
  std::mt19937_64 rng(33);
  for (int round = 0; round < 200; ++round) {
    const int m = std::uniform_int_distribution<int>(1, 20)(rng);
    const int n = std::uniform_int_distribution<int>(1, 20)(rng);
    const auto instance = oracle::random_instance(m, n, rng, 25, 30);
    SolveOptions options;
    options.variant = Variant::ns;
    options.init = static_cast<iio::InitMethod>(round % 3);
    const auto result = iio::solve(instance, options);
    ASSERT_TRUE(result.report.optimal);
    ASSERT_EQ(result.report.objective, oracle::min_cost_flow(instance)) << "round " << round;
    if (m <= 4 && n <= 4) {
      ASSERT_EQ(result.report.objective, oracle::enumerate_optimum(instance));
    }
    ASSERT_TRUE(oracle::dual_feasible(instance, result.basis.edges()));
  }
}

TEST(NetworkSimplex, DegenerateAssignmentTerminates) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    iio::GenSpec spec;
    spec.m = spec.n = 40;
    spec.seed = seed;
    spec.mass_max = 1;
    spec.cost_max = 3;
    const auto instance = iio::generate(spec);
    SolveOptions options;
    options.variant = Variant::ns;
    options.init = iio::InitMethod::nwc;
    const auto result = iio::solve(instance, options);
    ASSERT_TRUE(result.report.optimal);
    ASSERT_EQ(result.report.objective, oracle::min_cost_flow(instance));
  }
}

}  // namespace
