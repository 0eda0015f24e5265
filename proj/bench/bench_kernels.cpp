// Side-by-side timing of the OpenMP kernels and their serial references.
// The pairs must agree bitwise (the test suite checks that); this target
// only answers whether the parallel paths pay for themselves.
#include "adelmarket/market_fit.hpp"
#include "adelmarket/minority_game.hpp"
#include "adelmarket/waves.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

adm::waves::WaveSpec deep_wave() {
    adm::waves::WaveSpec spec;
    spec.p = 3;
    spec.level = 9; // 19683 samples
    spec.fractal_dim = 1.6;
    spec.monomial_degree = 2;
    return spec;
}

void BM_wave_generate_serial(benchmark::State& state) {
    const adm::waves::WaveSpec spec = deep_wave();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adm::waves::serial::generate(spec));
    }
}
BENCHMARK(BM_wave_generate_serial)->Unit(benchmark::kMillisecond);

void BM_wave_generate_parallel(benchmark::State& state) {
    const adm::waves::WaveSpec spec = deep_wave();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adm::waves::generate(spec));
    }
}
BENCHMARK(BM_wave_generate_parallel)->Unit(benchmark::kMillisecond);

adm::PriceSeries noisy_series() {
    adm::waves::WaveSpec spec;
    spec.p = 3;
    spec.level = 4;
    spec.fractal_dim = 1.6;
    spec.y0 = 100.0;
    spec.y_scale = 10.0;
    const adm::waves::WaveCurve curve = adm::waves::generate(spec);
    adm::PriceSeries series;
    series.timestamps = curve.t;
    series.values = curve.y;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (double& v : series.values) v *= 1.0 + noise(rng);
    return series;
}

void BM_fit_serial(benchmark::State& state) {
    const adm::PriceSeries series = noisy_series();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adm::fit::serial::fit(series, adm::fit::FitConfig{}));
    }
}
BENCHMARK(BM_fit_serial)->Unit(benchmark::kMillisecond);

void BM_fit_parallel(benchmark::State& state) {
    const adm::PriceSeries series = noisy_series();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adm::fit::fit(series, adm::fit::FitConfig{}));
    }
}
BENCHMARK(BM_fit_parallel)->Unit(benchmark::kMillisecond);

adm::mg::MGConfig sweep_config() {
    adm::mg::MGConfig cfg;
    cfg.agents = 11;
    cfg.memory = 8;
    cfg.steps = 5000;
    return cfg;
}

std::vector<std::uint64_t> sweep_seeds() {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 16; ++s) seeds.push_back(s);
    return seeds;
}

void BM_mg_sweep_serial(benchmark::State& state) {
    const adm::mg::MGConfig cfg = sweep_config();
    const std::vector<std::uint64_t> seeds = sweep_seeds();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adm::mg::serial::sweep(cfg, seeds, 500));
    }
}
BENCHMARK(BM_mg_sweep_serial)->Unit(benchmark::kMillisecond);

void BM_mg_sweep_parallel(benchmark::State& state) {
    const adm::mg::MGConfig cfg = sweep_config();
    const std::vector<std::uint64_t> seeds = sweep_seeds();
    for (auto _ : state) {
        benchmark::DoNotOptimize(adm::mg::sweep(cfg, seeds, 500));
    }
}
BENCHMARK(BM_mg_sweep_parallel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
