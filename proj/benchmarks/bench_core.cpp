#include "emt/diagnostics.hpp"
#include "emt/isotone.hpp"
#include "emt/random.hpp"
#include "emt/tautstring.hpp"
#include "emt/tvsmooth.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

namespace {

// Seasonal Poisson counts with two epidemic bumps.
std::vector<double> daily_counts(std::size_t n, std::uint64_t seed) {
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    double mean = 300.0 + 60.0 * std::cos(2.0 * std::numbers::pi * t / 365.0);
    mean += 250.0 * std::exp(-0.5 * std::pow((t - 0.4 * static_cast<double>(n)) / 20.0, 2));
    emt::CounterRng rng(seed, i);
    y[i] = static_cast<double>(rng.poisson(mean));
  }
  return y;
}

void BM_TautString(benchmark::State& state) {
  const auto y = daily_counts(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(emt::fit_taut_string(y, {}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TautString)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Pava(benchmark::State& state) {
  auto y = daily_counts(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(emt::isotonic_regression(y, emt::Direction::non_decreasing));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pava)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

void BM_IsotoneRefine(benchmark::State& state) {
  const auto y = daily_counts(static_cast<std::size_t>(state.range(0)), 3);
  const auto fit = emt::fit_taut_string(y, {});
  for (auto _ : state)
    benchmark::DoNotOptimize(emt::isotone_refine(fit, y));
}
BENCHMARK(BM_IsotoneRefine)->Arg(4096);

void BM_TvSmooth(benchmark::State& state) {
  const auto y = daily_counts(static_cast<std::size_t>(state.range(0)), 4);
  const auto fit = emt::fit_taut_string(y, {});
  const int order = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(emt::tv_smooth(y, fit, order));
}
BENCHMARK(BM_TvSmooth)->Args({250, 1})->Args({500, 1})->Args({500, 2})->Unit(benchmark::kMillisecond);

void BM_HarmonicSelection(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = emt::CounterRng(5, i).normal() + 0.3 * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 7.0);
  const auto cands = emt::harmonic_candidates(n);
  for (auto _ : state)
    benchmark::DoNotOptimize(emt::gaussian_stepwise_select(r, cands, 0.01));
}
BENCHMARK(BM_HarmonicSelection)->Arg(1024)->Arg(4017)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
