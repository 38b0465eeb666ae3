// bench_effective.cpp — Resonance enumeration and effective generators

#include <benchmark/benchmark.h>

#include "effham/effective.hpp"
#include "effham/scenarios.hpp"

using namespace effham;

namespace {

FrequencyDecomposition two_atom(int cutoff) {
    auto p = ScenarioParams::defaults(ScenarioName::kTwoAtomOnePhoton);
    p.cutoff = cutoff;
    return build_two_atom(p);
}

} // namespace

static void BM_EnumerateTwoAtom(benchmark::State& state) {
    const auto d = two_atom(6);
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_resonances(d, order));
}
BENCHMARK(BM_EnumerateTwoAtom)->Arg(2)->Arg(3)->Arg(4)->Arg(5);

static void BM_EffnTwoAtom(benchmark::State& state) {
    const auto d = two_atom(static_cast<int>(state.range(1)));
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(effn(d, order, DegeneracyPolicy::kReport));
}
BENCHMARK(BM_EffnTwoAtom)->Args({2, 6})->Args({3, 6})->Args({3, 20})->Args({4, 6})->Unit(benchmark::kMicrosecond);

static void BM_Eff3Explicit(benchmark::State& state) {
    const auto d = two_atom(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eff3_explicit(d));
}
BENCHMARK(BM_Eff3Explicit)->Arg(6)->Arg(20)->Unit(benchmark::kMicrosecond);
