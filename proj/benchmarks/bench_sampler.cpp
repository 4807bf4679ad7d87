#include <benchmark/benchmark.h>

#include <cmath>

#include "ssamc/appearance.hpp"
#include "ssamc/sampler.hpp"
#include "ssamc/synth.hpp"

using namespace ssamc;

namespace {

void BM_run_chain(benchmark::State& state) {
  const RegionGrid grid(15, 15, 320, 240);
  ConfidenceGrid conf;
  conf.grid = grid;
  conf.lambda.assign(grid.m(), 0.0);
  conf.lambda[7 * 15 + 7] = 0.8;
  SamplerConfig cfg;
  cfg.k_iters = int(state.range(0));
  const PosteriorFn post = [](const TargetState& s) {
    const double dx = s.x - 165.0, dy = s.y - 117.0;
    return 1e-6 + std::exp(-0.01 * (dx * dx + dy * dy));
  };
  const SampleSpace space = restrict_sample_space(true, TargetState{}, grid);
  uint64_t seed = 1;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(
        run_chain(post, conf, space, cfg, TargetState{160, 120, 1}, rng));
  }
  state.SetItemsProcessed(state.iterations() * cfg.k_iters * cfg.n_per_iter);
}
BENCHMARK(BM_run_chain)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_smoothing_kernel(benchmark::State& state) {
  const RegionGrid grid(15, 15, 320, 240);
  const SmoothingKernel kernel(grid, 100.0);
  std::vector<int> r(grid.m(), 0);
  r[40] = 2;
  r[41] = 2;
  r[112] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(kernel.apply(r, 5));
}
BENCHMARK(BM_smoothing_kernel)->Unit(benchmark::kMicrosecond);

void BM_likelihood(benchmark::State& state) {
  SynthSpec spec;
  spec.frames = 2;
  const SynthSequence seq(spec);
  const Frame first = seq.render(0);
  const AppearanceModel model =
      build_appearance(first, seq.ground_truth()[0]);
  const Frame second = seq.render(1);
  const TargetState st{seq.ground_truth()[1].cx(), seq.ground_truth()[1].cy(),
                       1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(likelihood(second, st, model));
}
BENCHMARK(BM_likelihood)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
