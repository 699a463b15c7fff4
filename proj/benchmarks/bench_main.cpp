// Copyright 2026 The ISSIR Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include "issir/codec.hpp"
#include "issir/fixtures.hpp"
#include "issir/metrics.hpp"
#include "issir/reconstruction.hpp"
#include "issir/stft.hpp"

namespace {

using namespace issir;

const Fixture& fixture(double seconds) {
  static const Fixture f = make_fixture(FixtureKind::kFiveSource, 1, 10.0);
  static const Fixture s = make_fixture(FixtureKind::kFiveSource, 1, 1.0);
  return seconds > 1.0 ? f : s;
}

GridSpec grid_for(const Signal& x, int divisor) {
  return GridSpec::make(2048, divisor, x.sample_rate, x.size());
}

void BM_Stft(benchmark::State& state) {
  const Signal& x = fixture(10.0).mix;
  const StftEngine engine(grid_for(x, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(engine.analyze(x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Stft)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Project(benchmark::State& state) {
  const Signal& x = fixture(10.0).mix;
  const StftEngine engine(grid_for(x, static_cast<int>(state.range(0))));
  const auto X = engine.analyze(x);
  for (auto _ : state) benchmark::DoNotOptimize(engine.project(X));
}
BENCHMARK(BM_Project)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// One reconstruction iteration over five sources of 10 s.
void BM_IssirIteration(benchmark::State& state) {
  const Fixture& fx = fixture(10.0);
  const auto g = DualGridSpec::uniform(grid_for(fx.mix, 2));
  const auto M = stft(fx.mix, g);
  std::vector<RealSpectrogram> p;
  std::vector<RealSpectrogram> mag;
  for (const auto& s : fx.stems) {
    const auto S = stft(s, g);
    p.push_back(power(S));
    mag.push_back(magnitude(S));
  }
  const auto act = activity_masks(wiener_masks(p), 0.01);
  const auto init = issir_initialize(M, mag, act);
  ReconParams params;
  params.mode = static_cast<ReconMode>(state.range(0));
  params.iterations = 1;
  for (auto _ : state) benchmark::DoNotOptimize(issir_iterate(M, init, act, params));
}
BENCHMARK(BM_IssirIteration)
    ->Arg(static_cast<int>(ReconMode::kFixedDivisor))
    ->Arg(static_cast<int>(ReconMode::kActiveCountNoMask))
    ->Unit(benchmark::kMillisecond);

void BM_Encode(benchmark::State& state) {
  const Fixture& fx = fixture(10.0);
  CodecConfig cfg;
  cfg.target_rate = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(encode(fx.mix, fx.stems, cfg));
}
BENCHMARK(BM_Encode)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_BssEval(benchmark::State& state) {
  const Fixture& fx = fixture(1.0);
  const BssEvaluator ev(fx.stems, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ev.evaluate(fx.stems));
}
BENCHMARK(BM_BssEval)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
