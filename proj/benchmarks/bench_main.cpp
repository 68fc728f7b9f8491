#include <benchmark/benchmark.h>

#include "srgraph/arborescence.hpp"
#include "srgraph/oracle.hpp"
#include "srgraph/steiner.hpp"
#include "srgraph/verify.hpp"

using namespace srgraph;

namespace {

Dataset planted(const char* formula, std::size_t rows) {
  verify::Rng rng(1);
  return *verify::with_target(verify::random_inputs(rows, 2, -2.0, 2.0, rng), parse(formula));
}

void BM_EdgeWeights(benchmark::State& state) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(3, 2));
  verify::Rng rng(3);
  std::vector<Arborescence> trees;
  for (int i = 0; i < 64; ++i) trees.push_back(verify::random_arborescence(g, rng));
  const double row[] = {0.4, 1.3};
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(edge_weights(g, trees[i++ % trees.size()], row).total);
  }
}
BENCHMARK(BM_EdgeWeights);

void BM_Embed(benchmark::State& state) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(2, 2));
  const Expression e = parse("sin(x1^2) + x2 * 2");
  for (auto _ : state) benchmark::DoNotOptimize(embed(g, e).arborescence);
}
BENCHMARK(BM_Embed);

void BM_CountRaw(benchmark::State& state) {
  const SymbolGraphSpec spec = SymbolGraphSpec::with_defaults(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(count_arborescences(spec, false));
}
BENCHMARK(BM_CountRaw)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Walk(benchmark::State& state) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(2, 2));
  WalkOptions opt;
  opt.max_arcs = static_cast<std::size_t>(state.range(0));
  std::uint64_t trees = 0;
  for (auto _ : state) {
    trees = enumerate_arborescences(g, opt, [](const Arborescence&) { return false; }).trees;
  }
  state.counters["trees"] = static_cast<double>(trees);
}
BENCHMARK(BM_Walk)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_SolveSr(benchmark::State& state) {
  const SymbolGraph g = SymbolGraph::build(SymbolGraphSpec::with_defaults(2, 2));
  const Dataset data = planted("sin(x1^2) + x2", 50);
  SrSearchOptions opt;
  opt.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_sr(g, data, opt).loss);
}
BENCHMARK(BM_SolveSr)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SolveMinDcsap(benchmark::State& state) {
  verify::Rng rng(7);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<WeightedDigraph> graphs;
  for (int i = 0; i < 16; ++i) graphs.push_back(verify::random_digraph(n, 3 * n, 9, rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_min_dcsap(graphs[i++ % graphs.size()]).weight);
}
BENCHMARK(BM_SolveMinDcsap)->Arg(6)->Arg(10)->Arg(14)->Unit(benchmark::kMicrosecond);

void BM_BruteForceDcsap(benchmark::State& state) {
  verify::Rng rng(7);
  std::vector<WeightedDigraph> graphs;
  for (int i = 0; i < 16; ++i) graphs.push_back(verify::random_digraph(6, oracle::kMaxBruteForceArcs, 9, rng));
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(oracle::brute_force_dcsap(graphs[i++ % graphs.size()]));
}
BENCHMARK(BM_BruteForceDcsap)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
