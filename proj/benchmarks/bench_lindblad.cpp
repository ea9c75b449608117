#include <benchmark/benchmark.h>

#include "rotorqec/channels.hpp"
#include "rotorqec/codes.hpp"
#include "rotorqec/lindblad.hpp"
#include "rotorqec/protocol_dec.hpp"

using namespace rotorqec;

static void BM_EvolveFreeDecay(benchmark::State& state) {
    const int j_max = static_cast<int>(state.range(0));
    auto b = make_basis(j_max);
    EnvParams env;
    CodeSpec code = build_code(CodeKind::CS, std::min(7, j_max - 2), 2, 5, b);
    DensityOp rho0 = DensityOp::pure(b, code.word0);
    auto fam = env_family(b, env);
    for (auto _ : state) {
        auto res = evolve(std::nullopt, fam, rho0, 0, 0.1, {0.1}, {});
        benchmark::DoNotOptimize(res.final_state);
    }
}
BENCHMARK(BM_EvolveFreeDecay)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_RepumpShortSegment(benchmark::State& state) {
    // One adaptive segment of the driven-dissipative repump problem
    // (the dominant cost profile of the long scenario runs).
    auto b = make_basis(10, {1, 1});
    CodeSpec code = build_code(CodeKind::CS, 7, 2, 5, b);
    DecParams dp;
    LinOp h = h_dec_j(b, 7, dp, 0, 1);
    auto cool = cooling_collapses(b, {{0, dp.cool_down}, {1, dp.cool_up}});
    EnvParams env;
    for (auto& op : env_family(b, env)) cool.push_back(std::move(op));
    DensityOp rho0 = DensityOp::pure(b, code.word0);
    SolverOptions so;
    so.rtol = 1e-7;
    so.atol = 1e-9;
    for (auto _ : state) {
        auto res = evolve(h, cool, rho0, 0, 2e-3, {2e-3}, {}, so);
        benchmark::DoNotOptimize(res.final_state);
    }
    state.SetLabel("dim " + std::to_string(b->dim()));
}
BENCHMARK(BM_RepumpShortSegment)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
