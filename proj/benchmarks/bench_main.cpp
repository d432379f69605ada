#include "fwmcomb/fluctuations.hpp"
#include "fwmcomb/measures.hpp"
#include "fwmcomb/steady_state.hpp"
#include "fwmcomb/sweep.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_SteadyStateCold(benchmark::State& state)
{
    const fwm::SystemParams p = fwm::default_params();
    fwm::SolveOptions o;
    o.check_multistability = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(fwm::solve_steady_state(p, std::nullopt, o));
}
BENCHMARK(BM_SteadyStateCold)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_DriftAndLyapunov(benchmark::State& state)
{
    const fwm::SystemParams p = fwm::default_params();
    const fwm::SteadyState s = fwm::solve_steady_state(p);
    for (auto _ : state) {
        const fwm::DriftDiffusion dd = fwm::build_drift_diffusion(p, s);
        benchmark::DoNotOptimize(fwm::solve_lyapunov(dd.A, dd.D));
    }
}
BENCHMARK(BM_DriftAndLyapunov)->Unit(benchmark::kMicrosecond);

void BM_OutputMeasures(benchmark::State& state)
{
    const fwm::SystemParams p = fwm::default_params();
    const fwm::DriftDiffusion dd = fwm::build_drift_diffusion(p, fwm::solve_steady_state(p));
    for (auto _ : state) {
        const fwm::CovarianceMatrix out = fwm::output_covariance(dd.A, dd.D, p);
        benchmark::DoNotOptimize(fwm::logneg(out.V, 0, 1));
    }
}
BENCHMARK(BM_OutputMeasures)->Unit(benchmark::kMicrosecond);

void BM_DefaultSweep(benchmark::State& state)
{
    const fwm::SystemParams p = fwm::default_params();
    const fwm::SweepAxis ax{"omega_qe", p.omega3, p.omega3 + 0.0005, static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(fwm::run_sweep(p, ax));
}
BENCHMARK(BM_DefaultSweep)->Arg(11)->Arg(101)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
