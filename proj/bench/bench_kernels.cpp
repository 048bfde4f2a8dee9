#include <benchmark/benchmark.h>

#include "tha/attack.hpp"
#include "tha/countermeasures.hpp"
#include "tha/sweep.hpp"

using namespace tha;

namespace {

const std::vector<double>& mu_grid() {
  static const auto g = log_grid(1e-3, 1e2, 64);
  return g;
}

const WaveformTrace& trace() {
  static const WaveformTrace t = [] {
    TraceRequest req;
    req.noise_sigma_w = 5e-6;
    req.seed = 1;
    return synthesize_trace(SymbolSequence::random(3000, 1), LaserSpec::cw(6.29e-3), AttenuationChain{8.0}, req);
  }();
  return t;
}

void BM_BoundsSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(bounds_table_serial(mu_grid(), default_gm_variants()));
}
void BM_BoundsOmp(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(bounds_table(mu_grid(), default_gm_variants()));
}

void BM_WeakSerial(benchmark::State& s) {
  const auto seq = SymbolSequence::random(200000, 2);
  const auto spec = DetectorSpec::geiger(1.0, extinction_ratio_from_db(21.0));
  for (auto _ : s) benchmark::DoNotOptimize(run_weak_attack_serial(seq, 5.0, spec, 3));
}
void BM_WeakOmp(benchmark::State& s) {
  const auto seq = SymbolSequence::random(200000, 2);
  const auto spec = DetectorSpec::geiger(1.0, extinction_ratio_from_db(21.0));
  for (auto _ : s) benchmark::DoNotOptimize(run_weak_attack(seq, 5.0, spec, 3));
}

void BM_TraceSerial(benchmark::State& s) {
  const auto seq = SymbolSequence::random(3000, 1);
  TraceRequest req;
  req.noise_sigma_w = 5e-6;
  for (auto _ : s) benchmark::DoNotOptimize(synthesize_trace_serial(seq, LaserSpec::cw(6.29e-3), AttenuationChain{}, req));
}
void BM_TraceOmp(benchmark::State& s) {
  const auto seq = SymbolSequence::random(3000, 1);
  TraceRequest req;
  req.noise_sigma_w = 5e-6;
  for (auto _ : s) benchmark::DoNotOptimize(synthesize_trace(seq, LaserSpec::cw(6.29e-3), AttenuationChain{}, req));
}

void BM_FoldSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(fold_modulo_period_serial(trace(), trace().symbol_period_s, 100));
}
void BM_FoldOmp(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(fold_modulo_period(trace(), trace().symbol_period_s, 100));
}

SweepConfig sweep_config() {
  SweepConfig c;
  c.regime = AttackRegime::cw;
  c.laser = LaserSpec::cw(6.29e-3);
  c.voa_db = {0, 2, 4, 6, 8, 10, 12, 14};
  c.n_symbols = 1000;
  return c;
}
void BM_SweepSerial(benchmark::State& s) {
  const auto c = sweep_config();
  for (auto _ : s) benchmark::DoNotOptimize(accuracy_sweep_serial(c));
}
void BM_SweepOmp(benchmark::State& s) {
  const auto c = sweep_config();
  for (auto _ : s) benchmark::DoNotOptimize(accuracy_sweep(c));
}

void BM_GridSerial(benchmark::State& s) {
  GridSpec g;
  g.p_in_w = log_grid(1e-3, 1e6, 400);
  g.dt_s = log_grid(1e-12, 2e-8, 400);
  for (auto _ : s) benchmark::DoNotOptimize(countermeasure_grid_serial(g));
}
void BM_GridOmp(benchmark::State& s) {
  GridSpec g;
  g.p_in_w = log_grid(1e-3, 1e6, 400);
  g.dt_s = log_grid(1e-12, 2e-8, 400);
  for (auto _ : s) benchmark::DoNotOptimize(countermeasure_grid(g));
}

}  // namespace

BENCHMARK(BM_BoundsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoundsOmp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WeakSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeakOmp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TraceSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceOmp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FoldSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FoldOmp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOmp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridOmp)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
