#include <benchmark/benchmark.h>

#include "frogsel/baselines.hpp"
#include "frogsel/bsfla.hpp"
#include "frogsel/fuzzy_rough.hpp"

namespace {

using namespace frogsel;

// Synthetic table: half wide-range real columns, half ternary nominals,
// labels random over two classes.
DecisionTable synthetic(std::uint64_t seed, std::size_t objects, std::size_t features) {
    SeededRng rng(seed);
    std::vector<FeatureColumn> cols;
    for (std::size_t f = 0; f < features; ++f) {
        FeatureColumn col;
        col.name = "f" + std::to_string(f);
        if (f % 2 == 0) {
            col.kind = FeatureKind::Real;
            col.reals.resize(objects);
            for (auto& v : col.reals) v = 10.0 * rng.uniform01();
        } else {
            col.kind = FeatureKind::Nominal;
            col.symbols = {"a", "b", "c"};
            col.codes.resize(objects);
            for (auto& c : col.codes) c = static_cast<std::int32_t>(uniform_index(rng, 3));
        }
        cols.push_back(std::move(col));
    }
    DecisionColumn dec;
    dec.classes = {"0", "1"};
    dec.labels.resize(objects);
    for (auto& l : dec.labels) l = static_cast<std::int32_t>(uniform_index(rng, 2));
    return DecisionTable::make("bench", std::move(cols), std::move(dec));
}

Bitmask half_mask(std::size_t bits) {
    Bitmask m(bits);
    for (std::size_t i = 0; i < bits; i += 2) m.set(i);
    return m;
}

void BM_FrddPrecomputed(benchmark::State& state) {
    const auto table = synthetic(1, static_cast<std::size_t>(state.range(0)),
                                 static_cast<std::size_t>(state.range(1)));
    FrddEvaluator eval(table);
    const Bitmask mask = half_mask(table.feature_count());
    for (auto _ : state) benchmark::DoNotOptimize(eval.full(mask).gamma_prime);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FrddPrecomputed)->Args({64, 8})->Args({128, 16})->Args({256, 16});

void BM_FrddOnTheFly(benchmark::State& state) {
    const auto table = synthetic(1, static_cast<std::size_t>(state.range(0)),
                                 static_cast<std::size_t>(state.range(1)));
    FrddEvaluator eval(table, /*memory_budget_bytes=*/0);
    const Bitmask mask = half_mask(table.feature_count());
    for (auto _ : state) benchmark::DoNotOptimize(eval.full(mask).gamma_prime);
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FrddOnTheFly)->Args({64, 8})->Args({128, 16})->Args({256, 16});

void BM_BsflaSearch(benchmark::State& state) {
    const auto table = synthetic(2, 32, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        FrddEvaluator eval(table);
        SearchConfig cfg = auto_params(table.objects(), table.feature_count());
        cfg.max_shuffles = 10;
        cfg.rng_seed = 7;
        benchmark::DoNotOptimize(bsfla_search(eval, cfg).best_fitness);
    }
}
BENCHMARK(BM_BsflaSearch)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Quickreduct(benchmark::State& state) {
    const auto table = synthetic(3, 64, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        FrddEvaluator eval(table);
        benchmark::DoNotOptimize(quickreduct(eval).best_fitness);
    }
}
BENCHMARK(BM_Quickreduct)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
