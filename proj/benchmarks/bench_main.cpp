#include <benchmark/benchmark.h>

#include "corxc/corpus.hpp"
#include "corxc/extform.hpp"
#include "corxc/gadgets.hpp"
#include "corxc/graph.hpp"
#include "corxc/polytope.hpp"
#include "corxc/treewidth.hpp"

namespace {

using namespace corxc;

Graph family(std::int64_t which) {
  switch (which) {
    case 0:
      return make_cycle(6);
    case 1:
      return make_grid(3);
    default:
      return make_petersen();
  }
}

void BM_BuildEf(benchmark::State& state) {
  const Graph g = family(state.range(0));
  for (auto _ : state) {
    auto ef = build_ef(g, constraint_decomposition(g));
    benchmark::DoNotOptimize(ef.accounting.lambda_count);
  }
}
BENCHMARK(BM_BuildEf)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_EfPhaseTwo(benchmark::State& state) {
  const Graph g = family(state.range(0));
  const auto ef = build_ef(g, constraint_decomposition(g));
  const SimplexSolver solver(ef.lp);
  PortableRandom rng(1);
  for (auto _ : state) {
    const auto obj = pulled_back_objective(ef, random_weights(g, rng));
    benchmark::DoNotOptimize(solver.maximize(obj).value);
  }
}
BENCHMARK(BM_EfPhaseTwo)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_MapDp(benchmark::State& state) {
  const Graph g = make_grid(static_cast<std::size_t>(state.range(0)));
  const auto td = constraint_decomposition(g);
  PortableRandom rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(map_dp(g, td, random_weights(g, rng)).value);
}
BENCHMARK(BM_MapDp)->DenseRange(3, 6)->Unit(benchmark::kMicrosecond);

void BM_MapBruteForce(benchmark::State& state) {
  const Graph g = make_grid(static_cast<std::size_t>(state.range(0)));
  PortableRandom rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(map_brute_force(g, random_weights(g, rng)).value);
}
BENCHMARK(BM_MapBruteForce)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

void BM_ExactTreewidth(benchmark::State& state) {
  const Graph g = constraint_graph(family(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_treewidth(g).width);
}
BENCHMARK(BM_ExactTreewidth)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_GridFace(benchmark::State& state) {
  const auto gw = build_grid_with_gadgets(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_projection(gw).face_vertices);
}
BENCHMARK(BM_GridFace)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_Crossover(benchmark::State& state) {
  const auto gadget = replace_clauses(crossover_clause_table());
  for (auto _ : state) benchmark::DoNotOptimize(verify_crossover(gadget).completions);
}
BENCHMARK(BM_Crossover)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
