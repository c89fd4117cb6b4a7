#include "volterra/gallery.hpp"
#include "volterra/seqspec.hpp"
#include "volterra/solver.hpp"
#include "volterra/spectral.hpp"

#include <benchmark/benchmark.h>

using namespace volterra;

namespace {

const GalleryEntry& entry() { return gallery().back(); }

void BM_solve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(entry().system, entry().harmonic, entry().x0, n));
}

void BM_solve_fast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_fast(entry().system, entry().harmonic, entry().x0, n));
}

void BM_scan_circle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scan_circle(entry().system, 8192));
}

void BM_scan_circle_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(scan_circle_serial(entry().system, 8192));
}

const Sequence& long_trajectory() {
  static const Sequence x = solve_fast(entry().system, entry().harmonic, entry().x0, 19999);
  return x;
}

void BM_estimate_spectrum(benchmark::State& state) {
  SpectrumOptions o;
  o.grid = 256;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_spectrum(long_trajectory(), o));
}

void BM_estimate_spectrum_serial(benchmark::State& state) {
  SpectrumOptions o;
  o.grid = 256;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_spectrum_serial(long_trajectory(), o));
}

}  // namespace

BENCHMARK(BM_solve)->RangeMultiplier(2)->Range(512, 4096)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_fast)->RangeMultiplier(2)->Range(512, 16384)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_circle)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_circle_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_estimate_spectrum)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_estimate_spectrum_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
