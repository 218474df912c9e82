#include "clustercast/kernels.hpp"

#include <benchmark/benchmark.h>

namespace {

using clustercast::ClusterGeometry;
using clustercast::ExecutionPolicy;
using clustercast::RadioParams;

void BM_Coverage(benchmark::State& state, ExecutionPolicy policy) {
  const ClusterGeometry geom{800.0, 50.0, 10.0, 20.0};
  const RadioParams radio;
  for (auto _ : state) {
    auto t = clustercast::kernels::coverage_trials(policy, geom, radio, state.range(0), 1);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LinkSuccess(benchmark::State& state, ExecutionPolicy policy) {
  const RadioParams radio;
  for (auto _ : state) {
    auto t = clustercast::kernels::link_success_trials(policy, 50.0, radio, state.range(0), 1);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DistanceSamples(benchmark::State& state, ExecutionPolicy policy) {
  clustercast::DistanceQuery q;
  q.kind = clustercast::DistanceKind::D2;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto v = policy == ExecutionPolicy::Serial ? clustercast::kernels::serial::distance_samples(q, n, 1)
                                               : clustercast::kernels::parallel::distance_samples(q, n, 1);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

} // namespace

BENCHMARK_CAPTURE(BM_Coverage, serial, ExecutionPolicy::Serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_Coverage, parallel, ExecutionPolicy::Parallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_LinkSuccess, serial, ExecutionPolicy::Serial)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_LinkSuccess, parallel, ExecutionPolicy::Parallel)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_DistanceSamples, serial, ExecutionPolicy::Serial)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_DistanceSamples, parallel, ExecutionPolicy::Parallel)->Arg(1 << 20);

BENCHMARK_MAIN();
