#include <benchmark/benchmark.h>

#include "stp/model.hpp"
#include "stp/rng.hpp"

using namespace stp;

namespace {

STPModel fitted_model(std::size_t k, std::size_t p, std::size_t rank) {
    Rng rng(29);
    Ensemble e;
    e.horizon = HorizonSpec{8, 8, p};
    e.centered = true;
    e.episodes.resize(k);
    for (Episode& ep : e.episodes) {
        ep.values.resize(e.horizon.episode_size());
        for (double& v : ep.values) v = rng.next_normal();
    }
    return fit(e, rank, WeightVector::uniform(p));
}

} // namespace

static void BM_Predict(benchmark::State& state) {
    const auto rank = static_cast<std::size_t>(state.range(0));
    const auto p = static_cast<std::size_t>(state.range(1));
    const STPModel model = fitted_model(256, p, rank);
    Rng rng(31);
    Vector q_new(static_cast<Eigen::Index>(model.horizon.hindcast_size()));
    for (Eigen::Index i = 0; i < q_new.size(); ++i) q_new(i) = rng.next_normal();

    for (auto _ : state) {
        Prediction pr = predict(model, q_new);
        benchmark::DoNotOptimize(pr.forecast.data());
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(BM_Predict)->Args({16, 256})->Args({100, 256})->Args({100, 2048})->Unit(benchmark::kMicrosecond);

static void BM_Project(benchmark::State& state) {
    const auto rank = static_cast<std::size_t>(state.range(0));
    const STPModel model = fitted_model(256, 512, rank);
    Rng rng(37);
    Vector q_new(static_cast<Eigen::Index>(model.horizon.hindcast_size()));
    for (Eigen::Index i = 0; i < q_new.size(); ++i) q_new(i) = rng.next_normal();

    for (auto _ : state) {
        Vector a = project(model, q_new);
        benchmark::DoNotOptimize(a.data());
    }
}
BENCHMARK(BM_Project)->Arg(16)->Arg(100)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
