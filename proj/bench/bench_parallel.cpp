#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qp2/ensemble.hpp"

using namespace qp2;

namespace {

std::vector<EnsembleMember> make_members(std::size_t count) {
  std::vector<EnsembleMember> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = 0.4 + 1.2 * static_cast<double>(i) / static_cast<double>(count);
    out.push_back({QP2Params::make(1.0, ComplexScalar(1.0, 0.05 * s), 1e-4), ComplexScalar(s, 0.1), 1.0 / s});
  }
  return out;
}

std::vector<ComplexScalar> make_grid(std::size_t count) {
  std::vector<ComplexScalar> zs(count);
  for (std::size_t i = 0; i < count; ++i)
    zs[i] = ComplexScalar(-4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(count), 0.3 * std::sin(0.01 * i));
  return zs;
}

constexpr std::size_t kSteps = 5000;

void BM_EnsembleSerial(benchmark::State& state) {
  const auto members = make_members(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble_serial(members, kSteps, {PoleMode::truncate}));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto members = make_members(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(members, kSteps, {PoleMode::truncate}));
}

void BM_SnGridSerial(benchmark::State& state) {
  const auto zs = make_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sn_grid_serial(zs, ComplexScalar(0.3, 0.4)));
}

void BM_SnGridParallel(benchmark::State& state) {
  const auto zs = make_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sn_grid(zs, ComplexScalar(0.3, 0.4)));
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SnGridSerial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SnGridParallel)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
