// Serial reference vs OpenMP kernels for the verification checks and the seed sweep.

#include <benchmark/benchmark.h>

#include "dynnorm/simulation.hpp"
#include "dynnorm/verification.hpp"

namespace {

using dynnorm::Execution;

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_LnDerivativeCheck(benchmark::State& state) {
  const std::vector<std::size_t> cs{2, 3, 10, 100};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynnorm::check_ln_derivative(1, 100, cs, exec_of(state)));
  }
}

void BM_DytOdeCheck(benchmark::State& state) {
  const auto grid = dynnorm::uniform_grid(-100, 100, 2001);
  const std::vector<double> alphas{0.049, 0.5, 2.0};
  const std::vector<std::size_t> cs{2, 50, 100};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynnorm::check_dyt_ode(alphas, cs, grid, exec_of(state)));
  }
}

void BM_ChannelBetaCheck(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynnorm::check_channel_beta(7, 500, 100, exec_of(state)));
  }
}

void BM_SeedSweep(benchmark::State& state) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynnorm::sweep_seeds(dynnorm::SimulationConfig{}, seeds, exec_of(state)));
  }
}

}  // namespace

// Arg 0 = serial reference, 1 = OpenMP.
BENCHMARK(BM_LnDerivativeCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DytOdeCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ChannelBetaCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeedSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
