#include <benchmark/benchmark.h>

#include "wxda/encode.hpp"
#include "wxda/losses.hpp"
#include "wxda/metrics.hpp"
#include "wxda/rng.hpp"

namespace {

using namespace wxda;

const Timestamp kT0 = make_time(2023, 7, 1);

StateField random_field(const GridSpec& g, const ChannelRegistry& reg,
                        std::uint64_t seed) {
  Rng rng(seed);
  StateField f(g, reg, kT0, FieldKind::Analysis);
  for (double& v : f.data()) v = rng.uniform01() * 2.0 - 1.0;
  return f;
}

void BM_StateLoss(benchmark::State& state) {
  const GridSpec g = GridSpec::global(static_cast<int>(state.range(0)));
  const ChannelRegistry reg = ChannelRegistry::make(false);
  const StateField x = random_field(g, reg, 1);
  const StateField y = random_field(g, reg, 2);
  const LatWeights w = latitude_weights(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(state_loss(x, y, w));
  }
  state.SetItemsProcessed(state.iterations() * g.cells() * reg.size());
}
BENCHMARK(BM_StateLoss)->Arg(90)->Arg(360)->Arg(720)
    ->Unit(benchmark::kMillisecond);

void BM_Wrmse(benchmark::State& state) {
  const GridSpec g = GridSpec::global(static_cast<int>(state.range(0)));
  const ChannelRegistry reg = ChannelRegistry::make(false);
  const StateField x = random_field(g, reg, 3);
  const StateField y = random_field(g, reg, 4);
  const LatWeights w = latitude_weights(g);
  for (auto _ : state) {
    std::vector<double> scores = wrmse(x, y, w);
    benchmark::DoNotOptimize(scores.data());
  }
  state.SetItemsProcessed(state.iterations() * g.cells() * reg.size());
}
BENCHMARK(BM_Wrmse)->Arg(90)->Arg(360)->Unit(benchmark::kMillisecond);

void BM_ProjectPoints(benchmark::State& state) {
  const GridSpec g = GridSpec::global(720);
  Rng rng(5);
  std::vector<PointObs> obs;
  for (int i = 0; i < state.range(0); ++i) {
    PointObs p;
    p.lat = rng.uniform01() * 170.0 - 85.0;
    p.lon = rng.uniform01() * 360.0;
    p.time = kT0 + static_cast<Timestamp>(rng.below(3600));
    p.variable = i % 2 ? "T2m" : "MSLP";
    p.value = 280.0;
    obs.push_back(p);
  }
  const std::vector<std::string> channels = {"T2m", "MSLP"};
  for (auto _ : state) {
    SparseFrame f = project_points(obs, channels, g, kT0);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * obs.size());
}
BENCHMARK(BM_ProjectPoints)->Arg(1000)->Arg(20000)
    ->Unit(benchmark::kMillisecond);

void BM_ResolveOverlaps(benchmark::State& state) {
  const GridSpec g = GridSpec::global(180);
  Rng rng(6);
  std::vector<SparseFrame> frames;
  for (int p = 0; p < 3; ++p) {
    SparseFrame f(g, {"bt00", "bt01"}, kT0);
    for (std::size_t k = 0; k < f.mask.size(); ++k) {
      if (rng.uniform01() < 0.02) {
        f.mask[k] = 1.0f;
        f.values[k] = 250.0f;
      }
    }
    frames.push_back(std::move(f));
  }
  for (auto _ : state) {
    SparseFrame merged = resolve_overlaps(frames, 7);
    benchmark::DoNotOptimize(merged.values.data());
  }
  state.SetItemsProcessed(state.iterations() * g.cells());
}
BENCHMARK(BM_ResolveOverlaps)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
