#include <gtest/gtest.h>

#include "mixroute/equilibrium.hpp"
#include "mixroute/fixtures.hpp"
#include "test_support.hpp"

namespace mixroute {
namespace {

using testing::random_links;
using testing::rng_for;
using testing::uniform;
using testing::uniform_int;

// Residual on a parallel network computed directly from link delays.
double parallel_residual(const CostMatrix& cost, const Network& net, const FlowVector& z) {
  const Vector c = evaluate(cost, z);
  const auto& od = net.od_pairs().front();
  double total = c.dot(z.values());
  for (const VehicleClass cls : kVehicleClasses) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < net.link_count(); ++l)
      best = std::min(best, c(static_cast<Eigen::Index>(2 * l) + static_cast<int>(cls)));
    total -= od.demand(cls) * best;
  }
  return total;
}

FlowVector random_split(std::mt19937_64& rng, std::size_t links, double regular, double smart) {
  FlowVector z(links);
  for (const VehicleClass cls : kVehicleClasses) {
    std::vector<double> w(links);
    double sum = 0.0;
    for (double& x : w) sum += (x = uniform(rng, 0.0, 1.0) * uniform_int(rng, 0, 1));
    if (sum == 0.0) w[0] = sum = 1.0;
    const double d = cls == VehicleClass::kRegular ? regular : smart;
    for (std::size_t l = 0; l < links; ++l) {
      const int id = static_cast<int>(l) + 1;
      (cls == VehicleClass::kRegular ? z.regular(id) : z.smart(id)) = d * w[l] / sum;
    }
  }
  return z;
}

TEST(ViResidual, HandExamples) {
  const Instance ex = example1(1.0);
  FlowVector on_second(2);
  on_second.regular(2) = 0.5;
  on_second.smart(2) = 0.5;
  EXPECT_NEAR(vi_residual(ex.cost, ex.network, on_second), 0.0, 1e-15);

  FlowVector on_first(2);
  on_first.regular(1) = 0.5;
  on_first.smart(1) = 0.5;
  EXPECT_NEAR(vi_residual(ex.cost, ex.network, on_first), 1.0, 1e-15);

  const Instance single = pigou_footnote();
  FlowVector z(1);
  z.regular(1) = 1.0;
  z.smart(1) = 1.0;
  EXPECT_NEAR(vi_residual(single.cost, single.network, z), 0.0, 1e-15);
}

TEST(ViResidual, RejectsInfeasibleFlow) {
  const Instance ex = example2(2.0);
  FlowVector z(2);
  z.regular(1) = 0.3;
  z.smart(2) = 1.0;
  EXPECT_THROW_CODE(vi_residual(ex.cost, ex.network, z), ErrorCode::kInfeasibleFlow);
}

TEST(ViResidual, MatchesDirectComputationOnParallelNetworks) {
  auto rng = rng_for(51);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    const auto links = random_links(rng, n);
    const CostMatrix cost = assemble_matrix(links);
    const double r = uniform(rng, 0.1, 2.0), s = uniform(rng, 0.1, 2.0);
    const Network net = parallel_network(static_cast<std::size_t>(n), r, s);
    const FlowVector z = random_split(rng, static_cast<std::size_t>(n), r, s);
    const double direct = parallel_residual(cost, net, z);
    EXPECT_NEAR(vi_residual(cost, net, z), direct, 1e-10);
    EXPECT_GE(direct, -1e-12);
  }
}

TEST(ViResidual, ZeroExactlyWhenUsedLinksAreCheapest) {
  auto rng = rng_for(52);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 2, 4);
    const CostMatrix cost = assemble_matrix(random_links(rng, n));
    const Network net = parallel_network(static_cast<std::size_t>(n), 1.0, 1.0);
    const FlowVector z = random_split(rng, static_cast<std::size_t>(n), 1.0, 1.0);
    const Vector c = evaluate(cost, z);
    bool all_minimal = true;
    for (int cls = 0; cls < 2; ++cls) {
      double best = std::numeric_limits<double>::infinity();
      for (int l = 0; l < n; ++l) best = std::min(best, c(2 * l + cls));
      for (int l = 0; l < n; ++l)
        if (z.values()(2 * l + cls) > 1e-12 && c(2 * l + cls) > best + 1e-9) all_minimal = false;
    }
    const double res = vi_residual(cost, net, z);
    if (all_minimal) {
      EXPECT_NEAR(res, 0.0, 1e-8);
    } else {
      EXPECT_GT(res, 0.0);
    }
  }
}

TEST(SolveEquilibrium, Example1PutsEveryoneOnTheCongestibleLink) {
  const Instance ex = example1(2.0);
  const EquilibriumResult r = solve_equilibrium(ex.network, ex.cost);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.flow.regular(2), 0.25, 1e-6);
  EXPECT_NEAR(r.flow.smart(2), 0.5, 1e-6);
  EXPECT_NEAR(r.social_cost, 0.375, 1e-6);
}

TEST(SolveEquilibrium, Example3MatchesClosedForm) {
  for (const double k : {1.0, 2.0, 4.0}) {
    const Instance ex = example3(k);
    const EquilibriumResult r = solve_equilibrium(ex.network, ex.cost);
    ASSERT_TRUE(r.converged) << k;
    EXPECT_LE(r.vi_residual, 1e-8);
    // The equilibrium delays tie exactly, so the residual controls the
    // cost only to about the square root of the tolerance.
    EXPECT_NEAR(r.social_cost, *ex.expected.c_eq, 1e-3) << k;
    EXPECT_NEAR(worst_equilibrium(ex.network, ex.cost).social_cost, *ex.expected.c_eq, 1e-9) << k;
  }
}

TEST(WorstEquilibrium, Example2FindsBothEquilibria) {
  for (const double k : {1.0, 1.5, 2.0, 3.0}) {
    const Instance ex = example2(k);
    const EquilibriumResult r = worst_equilibrium(ex.network, ex.cost);
    ASSERT_TRUE(r.converged);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_NEAR(r.social_cost, 2.0 * k, 1e-9) << k;
    bool low = false, high = false;
    for (const auto& cand : r.candidates) {
      low = low || std::abs(cand.social_cost - 2.0) < 1e-9;
      high = high || std::abs(cand.social_cost - 2.0 * k) < 1e-9;
      EXPECT_LE(vi_residual(ex.cost, ex.network, cand.flow), 1e-8);
    }
    EXPECT_TRUE(low && high) << k;
  }
}

TEST(WorstEquilibrium, DominatesAnyComputedEquilibrium) {
  auto rng = rng_for(53);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = uniform_int(rng, 1, 3);
    const CostMatrix cost = assemble_matrix(random_links(rng, n));
    const Network net =
        parallel_network(static_cast<std::size_t>(n), uniform(rng, 0.1, 2), uniform(rng, 0.1, 2));
    const EquilibriumResult some = solve_equilibrium(net, cost);
    const EquilibriumResult worst = worst_equilibrium(net, cost);
    ASSERT_TRUE(some.converged);
    ASSERT_TRUE(worst.converged);
    EXPECT_LE(worst.vi_residual, 1e-8);
    EXPECT_GE(worst.social_cost, some.social_cost - 1e-6);
  }
}

TEST(SolveEquilibrium, ReportedResidualIsReproducible) {
  auto rng = rng_for(54);
  for (int trial = 0; trial < 30; ++trial) {
    const CostMatrix cost = assemble_matrix(random_links(rng, 3));
    const Network net = parallel_network(3, 1.0, 0.5);
    const EquilibriumResult r = solve_equilibrium(net, cost);
    EXPECT_NEAR(vi_residual(cost, net, r.flow), r.vi_residual, 1e-12);
    const EquilibriumResult again = solve_equilibrium(net, cost);
    EXPECT_EQ(r.flow.values(), again.flow.values());
  }
}

TEST(SolveEquilibrium, RejectsBadOptions) {
  const Instance ex = example2(2.0);
  SolverOptions opts;
  opts.vi_tol = 0.0;
  EXPECT_THROW_CODE(solve_equilibrium(ex.network, ex.cost, opts), ErrorCode::kValidationError);
}

}  // namespace
}  // namespace mixroute
