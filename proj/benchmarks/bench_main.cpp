#include <benchmark/benchmark.h>

#include "heckeops/geom.hpp"
#include "heckeops/hecke.hpp"
#include "heckeops/opmodel.hpp"

using namespace heckeops;

static void BM_HeckeMulChi(benchmark::State& st) {
    const long p = st.range(0);
    const int n = int(st.range(1));
    const auto x = HeckeElement::chi(1, p), y = HeckeElement::chi(n, p);
    for (auto _ : st) benchmark::DoNotOptimize(hecke_mul(x, y));
}
BENCHMARK(BM_HeckeMulChi)->Args({2, 6})->Args({3, 6})->Args({5, 6})->Unit(benchmark::kMillisecond);

static void BM_HeckeMulPairs(benchmark::State& st) {
    const auto x = HeckeElement::chi(1, 3), y = HeckeElement::chi(int(st.range(0)), 3);
    for (auto _ : st) benchmark::DoNotOptimize(hecke_mul_pairs(x, y));
}
BENCHMARK(BM_HeckeMulPairs)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_GammaBall(benchmark::State& st) {
    const double t = double(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_gamma_ball(t));
}
BENCHMARK(BM_GammaBall)->Arg(20)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_ModelBuild(benchmark::State& st) {
    const double R = double(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(OperatorModel(ModelConfig{2, R, {0.5, 2.0}, 13, 1e-10}));
}
BENCHMARK(BM_ModelBuild)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

// One uncached corrected coefficient per iteration.
static void BM_CorrectedCoefficient(benchmark::State& st) {
    const OperatorModel m(ModelConfig{2, double(st.range(0)), {0.5, 2.0}, 13, 1e-10});
    std::int64_t b = 1;
    for (auto _ : st) {
        benchmark::DoNotOptimize(m.t(Mat64{1, b, 0, 2}));
        b += 2;
    }
}
BENCHMARK(BM_CorrectedCoefficient)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_DisplacementMC(benchmark::State& st) {
    const SL2RElement g1{3, 0, 0, 1.0 / 3}, g2{1, 2, 0, 1};
    std::uint64_t seed = 1;
    for (auto _ : st) benchmark::DoNotOptimize(displacement_mc(g1, g2, 1e5, std::uint64_t(st.range(0)), seed++));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_DisplacementMC)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_DisplacementIntegral(benchmark::State& st) {
    const SL2RElement g1{3, 0, 0, 1.0 / 3}, g2{1, 2, 0, 1};
    for (auto _ : st) benchmark::DoNotOptimize(displacement_integral(g1, g2));
}
BENCHMARK(BM_DisplacementIntegral);

BENCHMARK_MAIN();
