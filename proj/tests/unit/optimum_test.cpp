#include <gtest/gtest.h>

#include "mixroute/fixtures.hpp"
#include "mixroute/optimum.hpp"
#include "test_support.hpp"

namespace mixroute {
namespace {

using testing::grid_min_parallel;
using testing::random_links;
using testing::rng_for;
using testing::uniform;
using testing::uniform_int;

double demand(const Network& net, VehicleClass cls) { return net.od_pairs().front().demand(cls); }

TEST(SocialOptimum, Example1MatchesDenseGrid) {
  for (const double zeta : {1.0, 2.0, 5.0}) {
    const Instance ex = example1(zeta);
    const OptimumResult r = social_optimum(ex.network, ex.cost);
    EXPECT_EQ(r.certificate, Certificate::kExhaustiveFaces);
    EXPECT_NEAR(r.cost, *ex.expected.c_opt, 1e-9) << zeta;
    const double grid = grid_min_parallel(ex.cost, demand(ex.network, VehicleClass::kRegular),
                                          demand(ex.network, VehicleClass::kSmart), 400);
    EXPECT_LE(r.cost, grid + 1e-12);
    EXPECT_NEAR(r.cost, grid, 1e-4);
  }
  EXPECT_NEAR(social_optimum(example1(1.0).network, example1(1.0).cost).cost, 7.0 / 16.0, 1e-12);
}

TEST(SocialOptimum, ExamplesMatchClosedForms) {
  for (const double k : {1.0, 2.0, 4.0}) {
    const Instance e2 = example2(k);
    EXPECT_NEAR(social_optimum(e2.network, e2.cost).cost, 2.0, 1e-9);
    const Instance e3 = example3(k);
    EXPECT_NEAR(social_optimum(e3.network, e3.cost).cost, (5.0 * std::sqrt(k) - 2.0) / (4.0 * k),
                1e-9);
  }
  const Instance f = pigou_footnote();
  EXPECT_NEAR(social_optimum(f.network, f.cost).cost, 8.0, 1e-12);
}

TEST(SocialOptimum, MethodsAgreeOnRandomParallelInstances) {
  auto rng = rng_for(61);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = uniform_int(rng, 2, 3);
    const CostMatrix cost = assemble_matrix(random_links(rng, n));
    const Network net =
        parallel_network(static_cast<std::size_t>(n), uniform(rng, 0.2, 2), uniform(rng, 0.2, 2));
    SolverOptions opts;
    opts.grid_steps = 40;
    const OptimumResult faces = social_optimum(net, cost, opts, OptimumMethod::kFaces);
    const OptimumResult grid = social_optimum(net, cost, opts, OptimumMethod::kGrid);
    const OptimumResult multi = social_optimum(net, cost, opts, OptimumMethod::kMultistart);
    EXPECT_EQ(grid.certificate, Certificate::kExhaustiveGrid);
    EXPECT_GE(grid.cost, faces.cost - 1e-9);
    EXPECT_LE(grid.cost - faces.cost, grid.gap_estimate + 1e-9);
    EXPECT_GE(multi.cost, faces.cost - 1e-9);
    EXPECT_LE(faces.cost, grid_min_parallel(cost, demand(net, VehicleClass::kRegular),
                                            demand(net, VehicleClass::kSmart), 30) +
                              1e-12);
  }
}

TEST(SocialOptimum, GridGapShrinksWithResolution) {
  const Instance ex = example3(2.0);
  SolverOptions coarse, fine;
  coarse.grid_steps = 20;
  fine.grid_steps = 200;
  const OptimumResult a = social_optimum(ex.network, ex.cost, coarse, OptimumMethod::kGrid);
  const OptimumResult b = social_optimum(ex.network, ex.cost, fine, OptimumMethod::kGrid);
  EXPECT_LT(b.gap_estimate, a.gap_estimate);
  EXPECT_LE(b.cost - *ex.expected.c_opt, b.gap_estimate + 1e-12);
}

TEST(SocialOptimum, NeverExceedsWorstEquilibrium) {
  auto rng = rng_for(62);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 1, 3);
    const CostMatrix cost = assemble_matrix(random_links(rng, n));
    const Network net =
        parallel_network(static_cast<std::size_t>(n), uniform(rng, 0.1, 2), uniform(rng, 0.1, 2));
    const PriceOfAnarchy poa = price_of_anarchy(net, cost);
    EXPECT_LE(poa.optimum.cost, poa.worst.social_cost + 1e-9);
    EXPECT_GE(poa.value, 1.0 - 1e-9);
  }
}

TEST(PriceOfAnarchy, Examples) {
  for (const double k : {1.0, 2.0, 3.0}) {
    const Instance e2 = example2(k);
    EXPECT_NEAR(price_of_anarchy(e2.network, e2.cost).value, k, 1e-9);
  }
  const Instance e1 = example1(1.0);
  EXPECT_NEAR(price_of_anarchy(e1.network, e1.cost).value, 8.0 / 7.0, 1e-9);
}

TEST(PriceOfAnarchy, ZeroOptimalCostThrows) {
  const Instance ex = example2(2.0);
  EXPECT_THROW_CODE(price_of_anarchy(ex.network.with_scaled_demand(0.0), ex.cost),
                    ErrorCode::kZeroOptimalCost);
}

TEST(Bicriteria, Example1AboveThresholdIsLinear) {
  for (const double zeta : {2.0, 5.0, 10.0}) {
    const Instance ex = example1(zeta);
    const BicriteriaResult r = empirical_bicriteria(ex.network, ex.cost, *ex.expected.c_eq);
    EXPECT_NEAR(r.scale, (zeta + 1.0) / 2.0, 1e-7) << zeta;
    EXPECT_NEAR(r.scaled_cost, r.target_cost, 1e-8);
  }
}

TEST(Bicriteria, Example2IsSquareRootOfK) {
  for (const double k : {1.0, 2.0, 4.0}) {
    const Instance ex = example2(k);
    EXPECT_NEAR(empirical_bicriteria(ex.network, ex.cost, 2.0 * k).scale, std::sqrt(k), 1e-7);
  }
}

TEST(Bicriteria, Example3MatchesBothRegimes) {
  for (const double k : {2.0, 4.0}) {
    const Instance ex = example3(k);
    const double root = std::sqrt(k);
    const double formula = std::sqrt((2.0 * (k - 3.0) * root + 1.0) / k + 8.0) + 1.0 / root - 2.0;
    EXPECT_NEAR(empirical_bicriteria(ex.network, ex.cost, *ex.expected.c_eq).scale, formula, 1e-7)
        << k;
  }
  const Instance small = example3(1.0);
  EXPECT_NEAR(empirical_bicriteria(small.network, small.cost, *small.expected.c_eq).scale, 1.25,
              1e-7);
}

TEST(Bicriteria, OptimalCostTargetGivesUnitScale) {
  auto rng = rng_for(63);
  for (int trial = 0; trial < 20; ++trial) {
    const CostMatrix cost = assemble_matrix(random_links(rng, 2));
    const Network net = parallel_network(2, uniform(rng, 0.2, 2), uniform(rng, 0.2, 2));
    const double c_opt = social_optimum(net, cost).cost;
    EXPECT_NEAR(empirical_bicriteria(net, cost, c_opt).scale, 1.0, 1e-7);
  }
}

}  // namespace
}  // namespace mixroute
