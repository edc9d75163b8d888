#include <benchmark/benchmark.h>

#include <cmath>

#include "nsch/dct.hpp"
#include "nsch/flow.hpp"
#include "nsch/material.hpp"
#include "nsch/ops.hpp"
#include "nsch/phasefield.hpp"

namespace {

using namespace nsch;

ScalarField disk_phi(const Grid& g) {
    ScalarField f(g);
    const double r0 = 0.25 * g.lx;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.xc(i) - 0.5 * g.lx;
            const double dy = g.yc(j) - 0.5 * g.ly;
            const double r = std::sqrt(dx * dx + dy * dy);
            f(i, j) = std::tanh((r0 - r) / (std::sqrt(2.0) * 0.03));
        }
    return f;
}

MaterialModel bench_material() {
    MaterialParams p;
    p.eps = 1e-2;
    return MaterialModel(p);
}

void BM_Laplace(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g(n, n, 1.0, 1.0);
    const ScalarField f = disk_phi(g);
    for (auto _ : state) benchmark::DoNotOptimize(laplace_neumann(g, f));
    state.SetItemsProcessed(state.iterations() * g.cells());
}
BENCHMARK(BM_Laplace)->Arg(64)->Arg(128)->Arg(256);

void BM_DctModalSolve(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g(n, n, 1.0, 1.0);
    const ScalarField f = disk_phi(g);
    std::vector<double> z(f.v.size());
    for (auto _ : state) {
        dct_modal_solve(g, 1.0, 1e-2, 1e-4, f.v, z);
        benchmark::DoNotOptimize(z.data());
    }
    state.SetItemsProcessed(state.iterations() * g.cells());
}
BENCHMARK(BM_DctModalSolve)->Arg(64)->Arg(128)->Arg(256);

void BM_StepCh(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g(n, n, 1.0, 1.0);
    const MaterialModel M = bench_material();
    const PhaseState s = phase_state_instant(g, disk_phi(g), M, 0.0);
    const FaceField v(g);
    ChStepOptions opt;
    opt.phi0_max_abs = max_abs(s.phi.v);
    for (auto _ : state)
        benchmark::DoNotOptimize(step_ch(g, s, v, 1e-4, M, opt));
    state.SetItemsProcessed(state.iterations() * g.cells());
}
BENCHMARK(BM_StepCh)->Arg(64)->Arg(128);

void BM_Project(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g(n, n, 1.0, 1.0);
    const ScalarField rho(g, 1.0);
    FaceField v(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i)
            v.fx(i, j) = std::sin(2.0 * M_PI * g.yc(j));
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            v.fy(i, j) = std::sin(2.0 * M_PI * g.xc(i));
    for (auto _ : state)
        benchmark::DoNotOptimize(project(g, v, rho, 1e-3, 1e-10));
    state.SetItemsProcessed(state.iterations() * g.cells());
}
BENCHMARK(BM_Project)->Arg(64)->Arg(128);

void BM_StepNs(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Grid g(n, n, 1.0, 1.0);
    const MaterialModel M = bench_material();
    const PhaseState phase = phase_state_instant(g, disk_phi(g), M, 0.0);
    FlowState flow(g);
    for (size_t k = 0; k < flow.rho.v.size(); ++k)
        flow.rho.v[k] = M.density(phase.phi.v[k]);
    NsOptions opt;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            step_ns(g, flow, phase, phase.phi, 1e-4, M, opt));
    state.SetItemsProcessed(state.iterations() * g.cells());
}
BENCHMARK(BM_StepNs)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
