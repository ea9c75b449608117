#include <benchmark/benchmark.h>

#include "rotorqec/angmom.hpp"

using namespace rotorqec;

static void BM_Wigner3j(benchmark::State& state) {
    const int j = static_cast<int>(state.range(0));
    for (auto _ : state) {
        double acc = 0.0;
        for (int m = -j; m <= j; ++m)
            acc += wigner3j(j, 1, j + 1, m, 0, -m);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * (2 * j + 1));
}
BENCHMARK(BM_Wigner3j)->Arg(5)->Arg(10)->Arg(20);

static void BM_SlaterCodeCouplings(benchmark::State& state) {
    for (auto _ : state) {
        double acc = 0.0;
        for (int m = -8; m <= 8; ++m)
            for (int dm = -1; dm <= 1; ++dm) {
                if (std::abs(m + dm) > 7) continue;
                acc += slater(8, 7, m + dm, 1, dm);
            }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_SlaterCodeCouplings);

BENCHMARK_MAIN();
