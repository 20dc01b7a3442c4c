#include <benchmark/benchmark.h>

#include <random>

#include "congest/geodesics.hpp"
#include "congest/grid.hpp"

namespace {

using namespace congest;

void BM_ShortestCosts(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const int num_sources = static_cast<int>(state.range(1));
  const GridDomain g = build_grid({0, 0, 1, 1}, res);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> xi(g.network().num_edges());
  for (double& x : xi) x = u(rng);
  std::vector<NodeId> sources;
  for (int k = 0; k < num_sources; ++k) sources.push_back(*g.node_of_cell(0, k * res / num_sources));

  for (auto _ : state) {
    CostTable t = shortest_costs(g.network(), xi, sources);
    benchmark::DoNotOptimize(t);
  }
  state.SetItemsProcessed(state.iterations() * num_sources);
}
BENCHMARK(BM_ShortestCosts)
    ->Args({32, 1})
    ->Args({64, 1})
    ->Args({64, 64})
    ->Args({128, 8})
    ->Unit(benchmark::kMillisecond);

void BM_ExtractGeodesic(benchmark::State& state) {
  const int res = static_cast<int>(state.range(0));
  const GridDomain g = build_grid({0, 0, 1, 1}, res);
  const std::vector<double> xi(g.network().num_edges(), 1.0);
  const NodeId s = *g.node_of_cell(0, 0);
  const NodeId t = *g.node_of_cell(res - 1, res / 3);
  const std::vector<NodeId> sources{s};
  const CostTable table = shortest_costs(g.network(), xi, sources);
  for (auto _ : state) {
    GridPath p = extract_geodesic(table, s, t);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_ExtractGeodesic)->Arg(64)->Arg(256);

}  // namespace
