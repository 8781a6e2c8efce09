#include <chgeom/potential.hpp>
#include <chgeom/quadrangle.hpp>
#include <chgeom/sweep.hpp>
#include <chgeom/triangle.hpp>

#include <benchmark/benchmark.h>

using namespace chg;

namespace {

void BM_Build(benchmark::State& state) {
    const Params P{28, 0, 0, 2};
    for (auto _ : state) benchmark::DoNotOptimize(build(P));
}
BENCHMARK(BM_Build);

void BM_Evaluate(benchmark::State& state) {
    const Params P{28, 0, 0, 2};
    for (auto _ : state) benchmark::DoNotOptimize(evaluate(P));
}
BENCHMARK(BM_Evaluate);

void BM_ComputeF(benchmark::State& state) {
    const QuadrangleData D = *build({28, 0, 0, 2});
    for (auto _ : state) benchmark::DoNotOptimize(compute_f(D));
}
BENCHMARK(BM_ComputeF);

void BM_TriangleHolonomy(benchmark::State& state) {
    const TrianglePolars T{PVec(0.8, 1.0, 0.0), PVec(0.8, -0.5, 0.8), PVec(0.9, -0.5, cplx(-0.8, 0.2))};
    for (auto _ : state) benchmark::DoNotOptimize(classify(restrict_to_slice(holonomy(T), T.g1)));
}
BENCHMARK(BM_TriangleHolonomy);

void BM_ToledoIntegral(benchmark::State& state) {
    const QuadrangleData D = *build({static_cast<int>(state.range(0)), 0, 0, 2});
    for (auto _ : state) benchmark::DoNotOptimize(toledo_by_integral(D));
}
BENCHMARK(BM_ToledoIntegral)->Arg(28)->Arg(200);

void BM_EvaluateUnit(benchmark::State& state) {
    SweepConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_unit(static_cast<int>(state.range(0)), cfg));
    state.SetItemsProcessed(state.iterations() * (state.range(0) - 2) * (state.range(0) - 1));
}
BENCHMARK(BM_EvaluateUnit)->Arg(101)->Arg(301)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
