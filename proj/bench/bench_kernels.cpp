// Serial vs OpenMP for the data-parallel kernels.

#include "specmat/oracle.hpp"
#include "specmat/rootfind.hpp"
#include "specmat/secular.hpp"
#include "specmat/sweep.hpp"

#include <benchmark/benchmark.h>

using namespace specmat;

namespace {

CMatrix2 example() { return {{0.4, 0.3}, {0.6, -0.3}, {0.15, 0.3}, {0.85, -0.3}}; }

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_eval_grid(benchmark::State& st)
{
    SecularFn S = SecularFn::build(example());
    for (auto _ : st) benchmark::DoNotOptimize(eval_grid(S, Rect(0, 40, -10, 10), 400, 200, mode(st)));
}

void BM_spectrum(benchmark::State& st)
{
    RootOptions o;
    o.exec = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(spectrum(example(), Rect(0, 40, -6, 6), o));
}

void BM_growth(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(growth_probe(CMatrix2::real(1, 0, 1, 1), 1.0, {2, 3, 4}, 150, mode(st)));
}

void BM_sweep(benchmark::State& st)
{
    SweepSpec s;
    s.path = PathKind::Segment;
    s.a0 = -0.5;
    s.d0 = 1.6;
    s.a1 = 0.5;
    s.d1 = 2.4;
    s.steps = 8;
    s.count = 12;
    s.exec = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(run_sweep(s));
}

void BM_track_negative(benchmark::State& st)
{
    for (auto _ : st) benchmark::DoNotOptimize(track_negative_eigenvalue(-0.5, 1.5012, 1.62, 40, mode(st)));
}

} // namespace

BENCHMARK(BM_eval_grid)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectrum)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_growth)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_track_negative)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
