#include <benchmark/benchmark.h>

#include "skg/duhamel.hpp"
#include "skg/kernels.hpp"
#include "skg/lattice.hpp"
#include "skg/rng.hpp"
#include "skg/simulator.hpp"

namespace {

skg::Field random_field(const skg::LatticeSpec& spec, std::uint64_t key, double amp) {
  skg::Field f = skg::Field::zeros(spec);
  skg::NoiseStream stream(key);
  for (std::size_t i = 0; i < f.values.size(); ++i)
    f.values[i] = amp * stream.normal(static_cast<std::uint64_t>(i));
  return f;
}

void BM_source_convolve(benchmark::State& state) {
  const skg::LatticeSpec spec{1, 16, 1.0};
  skg::ModelParams params;
  params.gamma = 1.0;
  params.mu2 = 1.0;
  const skg::DispersionTable table = skg::build_dispersion(spec, params);
  const skg::TimeGrid grid{1e-2, state.range(0)};
  skg::SpaceTimeField h = skg::SpaceTimeField::zeros(spec, grid);
  skg::NoiseStream stream(7);
  std::uint64_t c = 0;
  for (auto& slice : h.slices)
    for (auto& v : slice.values) v = stream.normal(c++);
  for (auto _ : state) benchmark::DoNotOptimize(skg::source_convolve(h, table));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_source_convolve)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_picard_solve(benchmark::State& state) {
  const skg::LatticeSpec spec{1, 16, 1.0};
  skg::ModelParams params;
  params.gamma = 1.0;
  params.mu2 = 1.0;
  params.lambda = 0.05;
  const skg::DispersionTable table = skg::build_dispersion(spec, params);
  const skg::TimeGrid grid{1e-2, state.range(0)};
  const skg::Field f = random_field(spec, 8, 0.3);
  const skg::Field g = random_field(spec, 9, 0.3);
  const skg::SpaceTimeField xi = skg::SpaceTimeField::zeros(spec, grid);
  for (auto _ : state)
    benchmark::DoNotOptimize(skg::picard_solve(f, g, xi, params, table, grid, 50, 1e-8));
}
BENCHMARK(BM_picard_solve)->Arg(100)->Arg(400);

void BM_em_run(benchmark::State& state) {
  skg::SimConfig cfg;
  cfg.spec = skg::LatticeSpec{1, state.range(0), 1.0};
  cfg.params.gamma = 1.0;
  cfg.params.mu2 = -1.0;
  cfg.params.lambda = 1.0;
  cfg.params.sigma = 0.2;
  cfg.dt = 1e-2;
  cfg.horizon = 1.0;
  cfg.seed = 42;
  cfg.record_every = 10;
  for (auto _ : state) benchmark::DoNotOptimize(skg::run(cfg));
}
BENCHMARK(BM_em_run)->Arg(128)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
