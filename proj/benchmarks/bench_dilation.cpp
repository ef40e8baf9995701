#include <benchmark/benchmark.h>

#include "wxda/dilation.hpp"
#include "wxda/rng.hpp"

namespace {

using namespace wxda;

struct Plane {
  std::vector<float> values, mask;
};

Plane sparse_plane(int h, int w, double density, std::uint64_t seed) {
  Rng rng(seed);
  Plane p;
  p.values.assign(static_cast<std::size_t>(h) * w, 0.0f);
  p.mask.assign(p.values.size(), 0.0f);
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    if (rng.uniform01() < density) {
      p.mask[k] = 1.0f;
      p.values[k] = static_cast<float>(100.0 + 200.0 * rng.uniform01());
    }
  }
  return p;
}

void BM_DilateScatter(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  const int w = 2 * h;
  const double density = static_cast<double>(state.range(1)) / 1000.0;
  const Plane p = sparse_plane(h, w, density, 42);
  const CressmanKernel kernel = build_kernel(10);
  for (auto _ : state) {
    DilationResult r = dilate(p.values, p.mask, h, w, kernel);
    benchmark::DoNotOptimize(r.values.data());
  }
  state.SetItemsProcessed(state.iterations() * h * w);
}
BENCHMARK(BM_DilateScatter)
    ->Args({64, 10})
    ->Args({64, 50})
    ->Args({360, 10})
    ->Args({720, 10})
    ->Unit(benchmark::kMillisecond);

void BM_BruteForceFill(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0));
  const int w = 2 * h;
  const Plane p = sparse_plane(h, w, 0.01, 42);
  for (auto _ : state) {
    DilationResult r = brute_force_fill(p.values, p.mask, h, w, 10);
    benchmark::DoNotOptimize(r.values.data());
  }
  state.SetItemsProcessed(state.iterations() * h * w);
}
BENCHMARK(BM_BruteForceFill)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_KernelBuild(benchmark::State& state) {
  for (auto _ : state) {
    CressmanKernel k = build_kernel(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(k.w.data());
  }
}
BENCHMARK(BM_KernelBuild)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
