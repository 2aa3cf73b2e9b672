#include <benchmark/benchmark.h>

#include "skg/kernels.hpp"
#include "skg/lattice.hpp"

namespace {

void BM_eval_kernels_underdamped(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(skg::eval_kernels(1.0, 4.0, t));
  }
}
BENCHMARK(BM_eval_kernels_underdamped);

void BM_eval_kernels_near_critical(benchmark::State& state) {
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-3;
    benchmark::DoNotOptimize(skg::eval_kernels(2.0, 1.0 + 1e-9, t));
  }
}
BENCHMARK(BM_eval_kernels_near_critical);

void BM_build_dispersion(benchmark::State& state) {
  const skg::LatticeSpec spec{1, state.range(0), 1.0};
  skg::ModelParams params;
  params.gamma = 1.0;
  params.mu2 = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(skg::build_dispersion(spec, params));
}
BENCHMARK(BM_build_dispersion)->Arg(256)->Arg(4096);

void BM_kernel_slice(benchmark::State& state) {
  const skg::LatticeSpec spec{1, state.range(0), 1.0};
  skg::ModelParams params;
  params.gamma = 1.0;
  params.mu2 = 1.0;
  const skg::DispersionTable table = skg::build_dispersion(spec, params);
  double t = 0.0;
  for (auto _ : state) {
    t += 1e-2;
    benchmark::DoNotOptimize(skg::kernel_slice(table, t));
  }
}
BENCHMARK(BM_kernel_slice)->Arg(256)->Arg(4096);

void BM_kernel_position(benchmark::State& state) {
  const skg::LatticeSpec spec{1, state.range(0), 1.0};
  skg::ModelParams params;
  params.gamma = 1.0;
  params.mu2 = 1.0;
  const skg::DispersionTable table = skg::build_dispersion(spec, params);
  for (auto _ : state) benchmark::DoNotOptimize(skg::kernel_position(table, 2.0, skg::KernelKind::S));
}
BENCHMARK(BM_kernel_position)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
