#include "kdv/harness.hpp"
#include "kdv/oracles.hpp"
#include "kdv/schemes.hpp"
#include "kdv/spectral_ops.hpp"

#include <benchmark/benchmark.h>

using namespace kdv;

static void BM_fft_round_trip(benchmark::State& state) {
    auto g = SpectralGrid::create(static_cast<std::size_t>(state.range(0)));
    Field u = rough_data({g->size(), 4.0, 1}, g);
    for (auto _ : state) {
        Field v = Field::from_coeffs(g, u.coeffs());
        benchmark::DoNotOptimize(v.samples());
    }
}
BENCHMARK(BM_fft_round_trip)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_multiply(benchmark::State& state) {
    auto g = SpectralGrid::create(1024);
    Field u = rough_data({1024, 4.0, 1}, g);
    Field v = rough_data({1024, 4.0, 2}, g);
    const bool dealias = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(multiply(u, v, dealias));
}
BENCHMARK(BM_multiply)->Arg(0)->Arg(1);

static void BM_lri2_step(benchmark::State& state) {
    auto g = SpectralGrid::create(static_cast<std::size_t>(state.range(0)));
    Field u = rough_data({g->size(), 4.0, 1}, g);
    SchemeConfig cfg;
    cfg.kind = SchemeKind::lri2;
    cfg.tau = 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(lri2_step(u, 0.0, cfg));
}
BENCHMARK(BM_lri2_step)->Arg(256)->Arg(1024)->Arg(4096);

static void BM_strang_step(benchmark::State& state) {
    auto g = SpectralGrid::create(static_cast<std::size_t>(state.range(0)));
    Field u = rough_data({g->size(), 4.0, 1}, g);
    SchemeConfig cfg;
    cfg.kind = SchemeKind::strang;
    cfg.tau = 1e-3;
    for (auto _ : state) benchmark::DoNotOptimize(strang_step(u, 0.0, cfg));
}
BENCHMARK(BM_strang_step)->Arg(256)->Arg(1024);

static void BM_duhamel_oracle(benchmark::State& state) {
    auto g = SpectralGrid::create(64);
    Field u = rough_data({64, 4.0, 1}, g);
    for (auto _ : state)
        benchmark::DoNotOptimize(duhamel_oracle_step(u, 0.0, 0.01, OracleOrder::second));
}
BENCHMARK(BM_duhamel_oracle);

BENCHMARK_MAIN();
