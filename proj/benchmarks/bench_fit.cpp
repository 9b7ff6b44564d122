#include <benchmark/benchmark.h>

#include "stp/model.hpp"
#include "stp/rng.hpp"

using namespace stp;

namespace {

Ensemble make_ensemble(std::uint64_t seed, std::size_t k, std::size_t n, std::size_t m,
                       std::size_t p) {
    Rng rng(seed);
    Ensemble e;
    e.horizon = HorizonSpec{n, m, p};
    e.centered = true;
    e.episodes.resize(k);
    for (Episode& ep : e.episodes) {
        ep.values.resize(e.horizon.episode_size());
        for (double& v : ep.values) v = rng.next_normal();
    }
    return e;
}

} // namespace

static void BM_Fit(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto p = static_cast<std::size_t>(state.range(1));
    const Ensemble e = make_ensemble(17, k, 8, 8, p);
    const WeightVector w = WeightVector::uniform(p);
    for (auto _ : state) {
        STPModel model = fit(e, k, w);
        benchmark::DoNotOptimize(model.modes.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(k * e.horizon.episode_size()));
}
BENCHMARK(BM_Fit)
    ->Args({32, 64})
    ->Args({128, 64})
    ->Args({128, 512})
    ->Args({256, 1024})
    ->Unit(benchmark::kMillisecond);

static void BM_HindcastCorrelation(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const auto p = static_cast<std::size_t>(state.range(1));
    const Ensemble e = make_ensemble(19, k, 8, 8, p);
    const WeightVector w = WeightVector::uniform(p);
    const Matrix q = build_hindcast_matrix(e);
    for (auto _ : state) {
        Matrix c = hindcast_correlation(q, w);
        benchmark::DoNotOptimize(c.data());
    }
}
BENCHMARK(BM_HindcastCorrelation)->Args({128, 256})->Args({512, 256})->Unit(benchmark::kMillisecond);

static void BM_SolvePod(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const Ensemble e = make_ensemble(23, k, 4, 4, 32);
    const Matrix c = hindcast_correlation(build_hindcast_matrix(e), WeightVector::uniform(32));
    for (auto _ : state) {
        linalg::EigResult eig = solve_pod(c);
        benchmark::DoNotOptimize(eig.eigenvectors.data());
    }
}
BENCHMARK(BM_SolvePod)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
