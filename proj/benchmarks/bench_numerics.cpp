// bench_numerics.cpp — Matrix exponential and propagation steps

#include <random>

#include <benchmark/benchmark.h>

#include "effham/dynamics.hpp"
#include "effham/expm.hpp"
#include "effham/scenarios.hpp"

using namespace effham;

static void BM_Expm(benchmark::State& state) {
    const auto n = static_cast<Eigen::Index>(state.range(0));
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd H(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) H(i, j) = Complex(g(rng), g(rng));
    const Eigen::MatrixXcd A = Complex(0.0, -0.01) * (H + H.adjoint());
    for (auto _ : state) benchmark::DoNotOptimize(expm(A));
}
BENCHMARK(BM_Expm)->Arg(8)->Arg(22)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

static void BM_PropagateRabiPeriod(benchmark::State& state) {
    auto p = ScenarioParams::defaults(ScenarioName::kRabiThreePhoton);
    p.cutoff = static_cast<int>(state.range(0));
    const auto d = build_rabi(p);
    const auto psi0 = StateVector::basis(d.space_ptr(), initial_label(p));
    FullPropagationOptions o;
    o.t_final = d.period();
    o.dt = 0.01;
    o.periodic_fast_path = false;
    for (auto _ : state) benchmark::DoNotOptimize(propagate_full(d, psi0, o));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(d.period() / o.dt));
}
BENCHMARK(BM_PropagateRabiPeriod)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);
