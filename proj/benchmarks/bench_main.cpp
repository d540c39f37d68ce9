#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "igabem/assembly.hpp"
#include "igabem/kernels.hpp"
#include "igabem/solve.hpp"

using namespace igabem;

static void BM_BasisEvaluation(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const BasisSpace space(KnotVector::open_uniform(p, 8), p);
    double u = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(space.basis(u));
        u = u + 0.0137 > 1.0 ? 0.0 : u + 0.0137;
    }
}
BENCHMARK(BM_BasisEvaluation)->DenseRange(1, 5);

static void BM_BasisDerivatives(benchmark::State& state) {
    const BasisSpace space(KnotVector::open_uniform(3, 8), 3);
    double u = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(space.basis_derivs(u, 2));
        u = u + 0.0137 > 1.0 ? 0.0 : u + 0.0137;
    }
}
BENCHMARK(BM_BasisDerivatives);

static void BM_TrimmedFrame(benchmark::State& state) {
    const BoundaryModel m = fixture::trimmed_cube_model(2);
    const Surface& s = m.patches[5].surface;
    double t = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s.frame(0.5, t));
        t = t + 0.0137 > 0.99 ? 0.01 : t + 0.0137;
    }
}
BENCHMARK(BM_TrimmedFrame);

static void BM_KelvinPair(benchmark::State& state) {
    const Material mat(1000.0, 0.3);
    const Eigen::Vector3d source(0.1, 0.2, 0.3);
    Eigen::Vector3d field(1.0, 0.5, -0.2);
    const Eigen::Vector3d n(0.0, 0.0, 1.0);
    Eigen::Matrix3d U;
    Eigen::Matrix3d T;
    for (auto _ : state) {
        kelvin_pair(source, field, n, mat, U, T);
        benchmark::DoNotOptimize(U);
        benchmark::DoNotOptimize(T);
        field.x() += 1e-9;
    }
}
BENCHMARK(BM_KelvinPair);

static void BM_CubeAssembly(benchmark::State& state) {
    BoundaryModel m = fixture::cube_model(static_cast<int>(state.range(0)));
    m.config.threads = 1;
    const CollocationSet c = collocation_points(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble(m, c));
    }
    state.counters["dofs"] = static_cast<double>(c.dofs.dof_count());
}
BENCHMARK(BM_CubeAssembly)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

static void BM_TrimmedCubeSolve(benchmark::State& state) {
    BoundaryModel m = fixture::trimmed_cube_model(2);
    m.config.threads = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_model(m));
    }
}
BENCHMARK(BM_TrimmedCubeSolve)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
