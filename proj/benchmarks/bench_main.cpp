#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "rds/coefficients.hpp"
#include "rds/scaled_path.hpp"
#include "rds/series.hpp"
#include "rds/zeros.hpp"

using namespace rds;

namespace {

void BM_EvalPartial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto coeffs = CoefficientStream(CoefficientModel::rademacher(), 1, 0).sample_pairs(n - 1);
  const auto spec = SeriesSpec::make(0.5, n);
  const std::complex<double> w(0.6, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(eval_partial(coeffs, spec, w));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EvalPartial)->RangeMultiplier(16)->Range(1 << 10, 1 << 18);

void BM_PathConstruct(benchmark::State& state) {
  HybridOptions o;
  o.head_terms = static_cast<std::size_t>(state.range(0));
  const CoefficientStream stream(CoefficientModel::gauss_complex(), 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(ScaledSeriesPath(stream, 0.0, 1e-3, o));
}
BENCHMARK(BM_PathConstruct)->Arg(1 << 11)->Arg(1 << 14);

void BM_PathEval(benchmark::State& state) {
  HybridOptions o;
  o.head_terms = 2048;
  const ScaledSeriesPath path(CoefficientStream(CoefficientModel::gauss_complex(), 1, 0), 0.0, 1e-3, o);
  const std::complex<double> z(1.0, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(path(z));
}
BENCHMARK(BM_PathEval);

void BM_WindingCount(benchmark::State& state) {
  const auto f = [](std::complex<double> z) { return (z - 0.3) * (z + std::complex<double>(0.2, 0.5)) * (z - 0.7); };
  const Region square = Region::rectangle({-1, -1}, {1, 1});
  for (auto _ : state) benchmark::DoNotOptimize(winding_count(f, square));
}
BENCHMARK(BM_WindingCount);

}  // namespace

BENCHMARK_MAIN();
