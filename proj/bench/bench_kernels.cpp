// Serial reference vs OpenMP kernels on realistic grids.

#include "rydmw/kernels.hpp"
#include "rydmw/presets.hpp"
#include "rydmw/spectrum.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace rydmw;

SystemParams eia() {
  SystemParams p = *preset("eia");
  p.omega_mw = mhz(5.0);
  return p;
}

template <bool Parallel>
void BM_Transmission(benchmark::State& state) {
  const SystemParams p = eia();
  const auto grid = GridSpec{-mhz(20.0), mhz(20.0), std::size_t(state.range(0))}.values();
  const NoiseModel noise{0.01, khz(10.0), 1};
  std::vector<double> out(grid.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::transmission(p, grid, out, &noise);
    else
      kernels::transmission_serial(p, grid, out, &noise);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_SteadyState(benchmark::State& state) {
  SystemParams p = eia();
  p.omega_p = 1e-3 * p.natural_linewidth();
  const auto grid = GridSpec{-mhz(20.0), mhz(20.0), std::size_t(state.range(0))}.values();
  std::vector<cplx> out(grid.size());
  for (auto _ : state) {
    if constexpr (Parallel)
      kernels::steady_state_coherence(p, grid, out);
    else
      kernels::steady_state_coherence_serial(p, grid, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_Transmission<false>)->Name("transmission/serial")->Arg(2001)->Arg(20001);
BENCHMARK(BM_Transmission<true>)->Name("transmission/omp")->Arg(2001)->Arg(20001);
BENCHMARK(BM_SteadyState<false>)->Name("steady_state/serial")->Arg(201);
BENCHMARK(BM_SteadyState<true>)->Name("steady_state/omp")->Arg(201);

BENCHMARK_MAIN();
