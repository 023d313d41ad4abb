// Parallel surface kernel against the serial reference.

#include <vector>

#include <benchmark/benchmark.h>

#include "randheston/pricing.hpp"
#include "randheston/randomiser.hpp"

namespace {

using namespace randheston;

struct Fixture {
    ModelParams p = ModelParams::make(2.1, 0.05, 0.1, -0.6);
    VarianceLaw law = law_of(Gamma{0.4, 3.868});
    std::vector<double> ts, xs;

    explicit Fixture(int maturities) {
        for (int i = 1; i <= maturities; ++i) ts.push_back(2.0 * i / maturities);
        for (int j = 0; j < 41; ++j) xs.push_back(-0.4 + 0.02 * j);
    }
};

void BM_SurfaceParallel(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(price_surface_otm(f.p, f.law, f.ts, f.xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SurfaceSerial(benchmark::State& state) {
    const Fixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(price_surface_otm_serial(f.p, f.law, f.ts, f.xs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_SurfaceParallel)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SurfaceSerial)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
