#include <benchmark/benchmark.h>

#include <random>

#include "ares/baselines.hpp"
#include "ares/fit.hpp"
#include "ares/ingest.hpp"
#include "ares/metric.hpp"

namespace {

using namespace ares;

void BM_Fit(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  const auto basis = build_basis(n, m, Scaling::Unit);
  const auto v = generate_uniform(1, 1, n).front().values;
  for (auto _ : state) benchmark::DoNotOptimize(fit(basis, 0, v));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Fit)->Args({1000, 5})->Args({1000, 10})->Args({1000, 20})->Args({4000, 10});

void BM_FitNormalEq(benchmark::State& state) {
  const auto basis = build_basis(1000, 10, Scaling::Unit);
  const auto v = generate_uniform(1, 1, 1000).front().values;
  for (auto _ : state) benchmark::DoNotOptimize(fit(basis, 0, v, Solver::NormalEq));
}
BENCHMARK(BM_FitNormalEq);

void BM_BuildBasis(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_basis(static_cast<std::uint32_t>(state.range(0)), 10, Scaling::Unit));
}
BENCHMARK(BM_BuildBasis)->Arg(1000)->Arg(4000);

void BM_Reconstruct(benchmark::State& state) {
  const auto basis = build_basis(1000, 10, Scaling::Unit);
  const auto p = fit(basis, 0, generate_uniform(1, 1, 1000).front().values);
  std::vector<double> out(1000);
  for (auto _ : state) {
    reconstruct_into(p, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Reconstruct);

void BM_CompressBatch(benchmark::State& state) {
  const auto vectors = generate_uniform(2, static_cast<std::size_t>(state.range(0)), 1000);
  for (auto _ : state) benchmark::DoNotOptimize(compress_batch(vectors, 10, Scaling::Unit));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CompressBatch)->Arg(1000)->Unit(benchmark::kMillisecond);

template <Metric M>
void BM_Distance(benchmark::State& state) {
  const auto basis = build_basis(1000, 10, Scaling::Unit);
  const auto vs = generate_uniform(3, 2, 1000);
  const auto p = fit(basis, 0, vs[0].values);
  const auto q = fit(basis, 1, vs[1].values);
  const auto dom = fit_domain(p.domain);
  for (auto _ : state) benchmark::DoNotOptimize(distance(M, p, q, dom));
}
BENCHMARK(BM_Distance<Metric::L2>);
BENCHMARK(BM_Distance<Metric::L1>);
BENCHMARK(BM_Distance<Metric::Linf>);

void BM_PcaFit(benchmark::State& state) {
  const auto data = to_matrix(generate_uniform(4, 1000, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(pca_fit_transform(data, 10));
}
BENCHMARK(BM_PcaFit)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_NmfIteration(benchmark::State& state) {
  const auto data = to_matrix(generate_uniform(5, 1000, 1000));
  for (auto _ : state) benchmark::DoNotOptimize(nmf_fit(data, 10, 1, 7));
}
BENCHMARK(BM_NmfIteration)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
