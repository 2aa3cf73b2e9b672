#include <benchmark/benchmark.h>

#include "skg/lattice.hpp"
#include "skg/rng.hpp"

namespace {

skg::Field random_field(const skg::LatticeSpec& spec, std::uint64_t key) {
  skg::Field f = skg::Field::zeros(spec);
  skg::NoiseStream stream(key);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = stream.normal(static_cast<std::uint64_t>(i));
  return f;
}

void BM_dft_forward_1d(benchmark::State& state) {
  const skg::LatticeSpec spec{1, state.range(0), 1.0};
  const skg::Field f = random_field(spec, 1);
  for (auto _ : state) benchmark::DoNotOptimize(skg::dft_forward(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_dft_forward_1d)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_dft_forward_non_pow2(benchmark::State& state) {
  const skg::LatticeSpec spec{1, state.range(0), 1.0};
  const skg::Field f = random_field(spec, 2);
  for (auto _ : state) benchmark::DoNotOptimize(skg::dft_forward(f));
}
BENCHMARK(BM_dft_forward_non_pow2)->Arg(96)->Arg(384)->Arg(1536);

void BM_dft_roundtrip_2d(benchmark::State& state) {
  const skg::LatticeSpec spec{2, state.range(0), 1.0};
  const skg::Field f = random_field(spec, 3);
  for (auto _ : state) benchmark::DoNotOptimize(skg::dft_inverse(skg::dft_forward(f)));
}
BENCHMARK(BM_dft_roundtrip_2d)->Arg(32)->Arg(64)->Arg(128);

void BM_laplacian_2d(benchmark::State& state) {
  const skg::LatticeSpec spec{2, state.range(0), 0.5};
  const skg::Field f = random_field(spec, 4);
  for (auto _ : state) benchmark::DoNotOptimize(skg::laplacian_apply(f));
}
BENCHMARK(BM_laplacian_2d)->Arg(64)->Arg(256);

void BM_convolve_1d(benchmark::State& state) {
  const skg::LatticeSpec spec{1, state.range(0), 1.0};
  const skg::Field a = random_field(spec, 5);
  const skg::Field b = random_field(spec, 6);
  for (auto _ : state) benchmark::DoNotOptimize(skg::spatial_convolve(a, b));
}
BENCHMARK(BM_convolve_1d)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
