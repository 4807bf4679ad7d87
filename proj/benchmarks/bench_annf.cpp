#include <benchmark/benchmark.h>

#include "ssamc/annf.hpp"
#include "ssamc/image.hpp"
#include "ssamc/rng.hpp"

using namespace ssamc;

namespace {

Frame noisy_frame(int w, int h, uint64_t seed) {
  Rng rng(seed);
  Frame f = Frame::filled(w, h, {0.4, 0.45, 0.5});
  for (auto& v : f.data) v += 0.05 * rng.gaussian();
  return f;
}

void BM_compute_annf(benchmark::State& state) {
  const int w = int(state.range(0));
  const int h = w * 3 / 4;
  const Frame a = noisy_frame(w, h, 1);
  const Frame b = noisy_frame(w, h, 2);
  AnnfParams params;
  for (auto _ : state) {
    params.seed++;
    benchmark::DoNotOptimize(compute_annf(a, b, params));
  }
  state.SetItemsProcessed(state.iterations() * (w - 7) * (h - 7));
}
BENCHMARK(BM_compute_annf)->Arg(160)->Arg(320)->Arg(640)
    ->Unit(benchmark::kMillisecond);

void BM_forward_backward_filter(benchmark::State& state) {
  const Frame a = noisy_frame(320, 240, 1);
  const Frame b = noisy_frame(320, 240, 2);
  AnnfParams params;
  const PatchField fwd = compute_annf(a, b, params);
  params.seed = 2;
  const PatchField bwd = compute_annf(b, a, params);
  const Rect box{140, 100, 40, 30};
  for (auto _ : state)
    benchmark::DoNotOptimize(forward_backward_filter(fwd, bwd, box));
}
BENCHMARK(BM_forward_backward_filter)->Unit(benchmark::kMicrosecond);

void BM_confidence_map(benchmark::State& state) {
  const RegionGrid grid(15, 15, 320, 240);
  ScalarMap h(320, 240, 0.0);
  Rng rng(3);
  for (auto& v : h.v) v = rng.uniform() < 0.01 ? double(rng.uniform_int(8)) : 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(confidence_map(h, grid));
}
BENCHMARK(BM_confidence_map)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
