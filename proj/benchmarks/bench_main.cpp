#include <benchmark/benchmark.h>

#include "picardlab/bounds.hpp"
#include "picardlab/convolution.hpp"
#include "picardlab/data.hpp"
#include "picardlab/picard.hpp"

using namespace picardlab;

namespace {

SpectralField cube_data(std::int64_t points) {
  const GridSpec g = make_grid(1, 64.0, points);
  return build_data({FamilyKind::CubePair, 8.0, 2.0, -1.2, 1.0}, g);
}

void BM_ConvolveFft(benchmark::State& state) {
  const SpectralField u = cube_data(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_fft(u, u));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvolveFft)->RangeMultiplier(4)->Range(256, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_ConvolveDirect(benchmark::State& state) {
  const SpectralField u = cube_data(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_direct(u, u));
}
BENCHMARK(BM_ConvolveDirect)->RangeMultiplier(2)->Range(256, 2048);

void BM_ClosedForm(benchmark::State& state) {
  const SpectralField u = cube_data(state.range(0));
  const auto w = output_window({FamilyKind::CubePair, 8.0, 2.0, -1.2, 1.0}, u.grid());
  const auto strategy = state.range(1) ? ClosedStrategy::GaussLegendre : ClosedStrategy::Direct;
  for (auto _ : state) benchmark::DoNotOptimize(leading_iterate_closed(nls_uu(), u, 1e-3, *w, strategy));
}
BENCHMARK(BM_ClosedForm)->ArgsProduct({{1024, 4096}, {0, 1}});

void BM_IterateSeries(benchmark::State& state) {
  const SpectralField u = cube_data(4096);
  QuadratureOptions q;
  q.nodes = 33;
  for (auto _ : state) benchmark::DoNotOptimize(iterate_series(nls_uu(), u, 1e-3, static_cast<int>(state.range(0)), q));
}
BENCHMARK(BM_IterateSeries)->DenseRange(2, 6, 2);

void BM_SeqA(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(seq_a(3, SeqVariant::Standard, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SeqA)->Arg(16)->Arg(32)->Arg(64);

}  // namespace
BENCHMARK_MAIN();
