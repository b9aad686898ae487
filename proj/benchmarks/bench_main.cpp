#include <benchmark/benchmark.h>

#include "curvedwave/operators.hpp"
#include "curvedwave/specfun.hpp"
#include "curvedwave/suite.hpp"
#include "curvedwave/waves.hpp"

using namespace curvedwave;

static void BM_Hyp2F1Series(benchmark::State& state) {
    const Hyp2F1Params p{complex(0.3, 0.2), complex(1.1, -0.4), complex(2.5, 0.1)};
    const complex x(0.5, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(hyp2f1(p, x));
}
BENCHMARK(BM_Hyp2F1Series);

static void BM_Hyp2F1Polynomial(benchmark::State& state) {
    const Hyp2F1Params p{complex(-static_cast<double>(state.range(0))), complex(3.5), complex(2.0)};
    for (auto _ : state) benchmark::DoNotOptimize(hyp2f1(p, complex(3.0)));
}
BENCHMARK(BM_Hyp2F1Polynomial)->Arg(4)->Arg(32);

static void BM_Hamiltonian(benchmark::State& state) {
    const auto chart = static_cast<ChartId>(state.range(0));
    Family family = Family::h3_cyl_plane;
    for (Family f : plane_families) {
        if (chart_of(f) == chart) family = f;
    }
    const WaveFunction w = make_plane_wave(family, 1, 2.5, Branch::plus);
    const GridSpec g = default_grid(chart, 3);
    const ChartPoint p = g.points()[13];
    for (auto _ : state) benchmark::DoNotOptimize(apply_hamiltonian(chart, w.evaluator, p));
}
BENCHMARK(BM_Hamiltonian)->DenseRange(0, 3);

static void BM_P3(benchmark::State& state) {
    const WaveFunction w = make_plane_wave(Family::h3_horo_plane, 1, 2.5, Branch::plus);
    const ChartPoint p{ChartId::h3_horospherical, {1.0, 0.5, 0.2}};
    for (auto _ : state) benchmark::DoNotOptimize(apply_p3(p.chart, w.evaluator, p));
}
BENCHMARK(BM_P3);

static void BM_SuiteSubset(benchmark::State& state) {
    SuiteConfig c;
    c.families = {Family::s3_cyl_plane};
    c.grid_count = static_cast<int>(state.range(0));
    c.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(run_suite(c));
}
BENCHMARK(BM_SuiteSubset)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
