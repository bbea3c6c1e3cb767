#include <benchmark/benchmark.h>

#include "mixroute/bounds.hpp"
#include "mixroute/fixtures.hpp"
#include "mixroute/optimum.hpp"

namespace {

using namespace mixroute;

Instance parallel_instance(int links) {
  std::vector<LinkCostParams> params;
  for (int i = 0; i < links; ++i)
    params.push_back({0.1 * i, 1.0 + 0.5 * i, 1.0 + 0.4 * i,
                      i % 2 ? Orientation::kSmartHeavy : Orientation::kRegularHeavy});
  Instance in;
  in.network = parallel_network(static_cast<std::size_t>(links), 1.0, 1.0);
  in.cost = assemble_matrix(params);
  return in;
}

void BM_WorstEquilibrium(benchmark::State& state) {
  const Instance in = parallel_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(worst_equilibrium(in.network, in.cost));
}
BENCHMARK(BM_WorstEquilibrium)->Arg(2)->Arg(3)->Arg(4);

void BM_SocialOptimum(benchmark::State& state) {
  const Instance in = parallel_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(social_optimum(in.network, in.cost));
}
BENCHMARK(BM_SocialOptimum)->Arg(2)->Arg(3)->Arg(4);

void BM_EtaSquared(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Matrix p = Matrix::Identity(n, n) * static_cast<double>(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) p(i, i + 1) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(eta_squared(p));
}
BENCHMARK(BM_EtaSquared)->Arg(4)->Arg(16)->Arg(64);

void BM_SweepPoint(benchmark::State& state) {
  const Instance in = example3(2.5);
  for (auto _ : state) {
    const PriceOfAnarchy poa = price_of_anarchy(in.network, in.cost);
    benchmark::DoNotOptimize(empirical_bicriteria(in.network, in.cost, poa.worst.social_cost));
  }
}
BENCHMARK(BM_SweepPoint);

}  // namespace
BENCHMARK_MAIN();
