#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "mixroute/network.hpp"
#include "test_support.hpp"

namespace mixroute {
namespace {

using testing::rng_for;
using testing::uniform;
using testing::uniform_int;

Network diamond() {
  // s=0, a=1, b=2, t=3; links: s->a, a->t, s->b, b->t, s->t
  return Network({0, 1, 2, 3}, {{0, 1}, {1, 3}, {0, 2}, {2, 3}, {0, 3}}, {{0, 3, 1.0, 1.0}});
}

// Every ordering of every subset of links that forms a simple o->d path,
// sorted lexicographically by link ids.
std::vector<std::vector<int>> brute_force_paths(const Network& net, NodeId o, NodeId d) {
  const int n = static_cast<int>(net.link_count());
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> ids;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) ids.push_back(i + 1);
    do {
      NodeId at = o;
      std::vector<NodeId> seen = {o};
      bool ok = true;
      for (int id : ids) {
        const Link& l = net.link(id);
        if (l.tail != at || std::find(seen.begin(), seen.end(), l.head) != seen.end()) {
          ok = false;
          break;
        }
        at = l.head;
        seen.push_back(at);
      }
      if (ok && at == d) out.push_back(ids);
    } while (std::next_permutation(ids.begin(), ids.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Network random_graph(std::mt19937_64& rng, int nodes) {
  std::vector<NodeId> ids(static_cast<std::size_t>(nodes));
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<std::pair<NodeId, NodeId>> links;
  for (int i = 0; i + 1 < nodes; ++i) links.emplace_back(i, i + 1);
  const int extra = uniform_int(rng, 1, 4);
  for (int e = 0; e < extra; ++e) {
    const int a = uniform_int(rng, 0, nodes - 1), b = uniform_int(rng, 0, nodes - 1);
    if (a != b) links.emplace_back(a, b);
  }
  return Network(ids, links, {{0, nodes - 1, 1.0, 0.5}});
}

TEST(EnumeratePaths, ParallelLinksGiveOnePathEach) {
  const Network net = parallel_network(2, 1.0, 1.0);
  const PathSet ps = enumerate_paths(net, 0);
  ASSERT_EQ(ps.paths.size(), 2u);
  EXPECT_EQ(ps.paths[0].links, std::vector<int>{1});
  EXPECT_EQ(ps.paths[1].links, std::vector<int>{2});
  EXPECT_FALSE(ps.truncated);
}

TEST(EnumeratePaths, SingleLink) {
  EXPECT_EQ(enumerate_paths(parallel_network(1, 1.0, 0.0), 0).paths.size(), 1u);
}

TEST(EnumeratePaths, DiamondMatchesBruteForce) {
  const Network net = diamond();
  const PathSet ps = enumerate_paths(net, 0);
  ASSERT_EQ(ps.paths.size(), 3u);
  std::vector<std::vector<int>> got;
  for (const Path& p : ps.paths) got.push_back(p.links);
  EXPECT_EQ(got, brute_force_paths(net, 0, 3));
}

TEST(EnumeratePaths, RandomGraphsMatchBruteForce) {
  auto rng = rng_for(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = random_graph(rng, uniform_int(rng, 3, 5));
    std::vector<std::vector<int>> got;
    for (const Path& p : enumerate_paths(net, 0).paths) got.push_back(p.links);
    EXPECT_EQ(got, brute_force_paths(net, 0, net.nodes().back()));
  }
}

TEST(EnumeratePaths, TruncatesAtBudget) {
  const PathSet ps = enumerate_paths(diamond(), 0, 2);
  EXPECT_EQ(ps.paths.size(), 2u);
  EXPECT_TRUE(ps.truncated);
}

TEST(EnumeratePaths, Deterministic) {
  auto rng = rng_for(22);
  const Network net = random_graph(rng, 5);
  const auto a = enumerate_paths(net, 0).paths;
  const auto b = enumerate_paths(net, 0).paths;
  EXPECT_EQ(a, b);
}

TEST(EnumeratePaths, DisconnectedPairThrows) {
  const Network net({0, 1, 2}, {{0, 1}}, {{0, 2, 1.0, 0.0}});
  EXPECT_THROW_CODE(enumerate_paths(net, 0), ErrorCode::kNoPathExists);
}

TEST(NetworkValidation, RejectsStructuralErrors) {
  EXPECT_THROW_CODE(Network({0, 1}, {{0, 0}}, {{0, 1, 1, 1}}), ErrorCode::kInvalidNetwork);
  EXPECT_THROW_CODE(Network({0, 1}, {{0, 5}}, {{0, 1, 1, 1}}), ErrorCode::kInvalidNetwork);
  EXPECT_THROW_CODE(Network({0, 1}, {{0, 1}}, {{0, 0, 1, 1}}), ErrorCode::kInvalidNetwork);
  EXPECT_THROW_CODE(Network({0, 1}, {{0, 1}}, {{0, 1, -1, 1}}), ErrorCode::kInvalidNetwork);
  EXPECT_THROW_CODE(Network({0, 1}, {{0, 1}}, {{0, 1, 0, 0}}), ErrorCode::kInvalidNetwork);
  EXPECT_THROW_CODE(Network({0, 0}, {{0, 1}}, {{0, 1, 1, 1}}), ErrorCode::kInvalidNetwork);
}

TEST(ParallelNetwork, Shapes) {
  const Network fig1 = parallel_network(2, 0.5, 0.5);
  EXPECT_EQ(fig1.link_count(), 2u);
  EXPECT_EQ(fig1.od_pairs()[0].demand_regular, 0.5);
  EXPECT_EQ(fig1.od_pairs()[0].demand_smart, 0.5);
  const Network single = parallel_network(1, 1.0, 0.0);
  EXPECT_EQ(single.link_count(), 1u);
  EXPECT_EQ(single.link(1).tail, 0);
  EXPECT_EQ(single.link(1).head, 1);
}

TEST(ToLinkFlows, SinglePathCarriesAllDemand) {
  const Network net = parallel_network(2, 1.0, 1.0);
  const auto paths = enumerate_paths(net, 0).paths;
  PathFlowAssignment a;
  a.entries.push_back({0, VehicleClass::kRegular, paths[0], 1.0, 0.0});
  a.entries.push_back({0, VehicleClass::kSmart, paths[0], 1.0, 0.0});
  const FlowVector z = to_link_flows(a, net);
  EXPECT_EQ(z.values(), (Vector(4) << 1, 1, 0, 0).finished());
}

TEST(ToLinkFlows, HalfSplit) {
  const Network net = parallel_network(2, 1.0, 1.0);
  const auto paths = enumerate_paths(net, 0).paths;
  PathFlowAssignment a;
  for (const Path& p : paths)
    for (VehicleClass c : kVehicleClasses) a.entries.push_back({0, c, p, 0.5, 0.0});
  EXPECT_EQ(to_link_flows(a, net).values(), Vector::Constant(4, 0.5));
}

TEST(ToLinkFlows, ExampleOneEquilibriumOnBottomLink) {
  const double zeta = 3.0;
  const Network net = parallel_network(2, 1.0 / (2 * zeta), 0.5);
  const auto paths = enumerate_paths(net, 0).paths;
  PathFlowAssignment a;
  a.entries.push_back({0, VehicleClass::kRegular, paths[1], 1.0 / (2 * zeta), 0.0});
  a.entries.push_back({0, VehicleClass::kSmart, paths[1], 0.5, 0.0});
  const FlowVector z = to_link_flows(a, net);
  EXPECT_DOUBLE_EQ(z.regular(2), 1.0 / (2 * zeta));
  EXPECT_DOUBLE_EQ(z.smart(2), 0.5);
  EXPECT_EQ(z.regular(1), 0.0);
}

PathFlowAssignment random_assignment(std::mt19937_64& rng, const Network& net) {
  PathFlowAssignment a;
  for (std::size_t od = 0; od < net.od_pairs().size(); ++od) {
    const auto paths = enumerate_paths(net, od).paths;
    for (VehicleClass c : kVehicleClasses) {
      std::vector<double> w(paths.size());
      double total = 0.0;
      for (double& x : w) total += (x = uniform(rng, 0.0, 1.0));
      for (std::size_t i = 0; i < paths.size(); ++i)
        a.entries.push_back({od, c, paths[i], net.od_pairs()[od].demand(c) * w[i] / total, 0.0});
    }
  }
  return a;
}

TEST(FeasibilityProperty, InducedFlowsAreFeasible) {
  auto rng = rng_for(23);
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = trial % 2 ? random_graph(rng, uniform_int(rng, 3, 6))
                                  : parallel_network(static_cast<std::size_t>(uniform_int(rng, 1, 4)),
                                                     uniform(rng, 0.1, 2), uniform(rng, 0.1, 2));
    const FeasibilityReport r = is_feasible(to_link_flows(random_assignment(rng, net), net), net);
    EXPECT_TRUE(r.feasible) << (r.violations.empty() ? "" : r.violations.front());
  }
}

TEST(FeasibilityProperty, ToLinkFlowsIsLinear) {
  auto rng = rng_for(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Network net = random_graph(rng, 5);
    const auto a = random_assignment(rng, net);
    const auto b = random_assignment(rng, net);
    PathFlowAssignment sum = a;
    sum.entries.insert(sum.entries.end(), b.entries.begin(), b.entries.end());
    const Vector lhs = to_link_flows(sum, net).values();
    const Vector rhs = to_link_flows(a, net).values() + to_link_flows(b, net).values();
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FeasibilityProperty, ParallelMassConservation) {
  auto rng = rng_for(25);
  for (int trial = 0; trial < 50; ++trial) {
    const double dr = uniform(rng, 0.1, 3), ds = uniform(rng, 0.1, 3);
    const Network net = parallel_network(3, dr, ds);
    const FlowVector z = to_link_flows(random_assignment(rng, net), net);
    double xr = 0, xs = 0;
    for (int i = 1; i <= 3; ++i) {
      xr += z.regular(i);
      xs += z.smart(i);
    }
    EXPECT_NEAR(xr, dr, 1e-9);
    EXPECT_NEAR(xs, ds, 1e-9);
  }
}

TEST(IsFeasible, ParallelExamples) {
  const Network net = parallel_network(2, 1.0, 1.0);
  EXPECT_TRUE(is_feasible(FlowVector((Vector(4) << 1, 1, 0, 0).finished()), net).feasible);
  EXPECT_TRUE(is_feasible(FlowVector((Vector(4) << 0.5, 1, 0.5, 0).finished()), net).feasible);
  const FeasibilityReport bad = is_feasible(FlowVector((Vector(4) << 2, 1, 0, 0).finished()), net);
  EXPECT_FALSE(bad.feasible);
  ASSERT_FALSE(bad.violations.empty());
  EXPECT_NE(bad.violations.front().find("regular"), std::string::npos);
}

TEST(IsFeasible, RejectsCirculationsAndNegativeFlow) {
  // s->a, a->s, s->t: a cycle s->a->s on top of a valid flow conserves mass
  // at every node but is not induced by simple paths.
  const Network net({0, 1, 2}, {{0, 1}, {1, 0}, {0, 2}}, {{0, 2, 1.0, 0.0}});
  EXPECT_FALSE(is_feasible(FlowVector((Vector(6) << 1, 0, 1, 0, 1, 0).finished()), net).feasible);
  EXPECT_TRUE(is_feasible(FlowVector((Vector(6) << 0, 0, 0, 0, 1, 0).finished()), net).feasible);
  const Network par = parallel_network(2, 1.0, 1.0);
  EXPECT_FALSE(is_feasible(FlowVector((Vector(4) << 1.5, 1, -0.5, 0).finished()), par).feasible);
}

TEST(IsFeasible, DimensionMismatchThrows) {
  EXPECT_THROW_CODE(is_feasible(FlowVector(3), parallel_network(2, 1, 1)),
                    ErrorCode::kDimensionMismatch);
}

TEST(ShortestPathDelay, DiamondAndUnreachable) {
  const Network net = diamond();
  // s->a->t = 1+1, s->b->t = 0.5+0.25, s->t = 3
  EXPECT_DOUBLE_EQ(*shortest_path_delay(net, {1, 1, 0.5, 0.25, 3}, 0, 3), 0.75);
  const Network cut({0, 1, 2}, {{0, 1}}, {{0, 1, 1.0, 0.0}});
  EXPECT_FALSE(shortest_path_delay(cut, {1.0}, 0, 2).has_value());
}

TEST(ScaledDemand, ScalesBothClasses) {
  const Network net = parallel_network(2, 1.0, 0.5).with_scaled_demand(3.0);
  EXPECT_DOUBLE_EQ(net.od_pairs()[0].demand_regular, 3.0);
  EXPECT_DOUBLE_EQ(net.od_pairs()[0].demand_smart, 1.5);
}

}  // namespace
}  // namespace mixroute
