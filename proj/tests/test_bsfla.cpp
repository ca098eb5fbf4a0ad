#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include <json.hpp>

#include "frogsel/bsfla.hpp"
#include "support/tables.hpp"

using namespace frogsel;

namespace {

Frog make_frog(const std::string& bits, double fitness) {
    Frog f;
    f.mask = Bitmask::from_string(bits);
    f.fitness = fitness;
    f.cardinality = f.mask.count();
    return f;
}

std::string stripped_json(const ReductReport& r) {
    auto j = nlohmann::json::parse(r.to_json());
    j.erase("timing");
    return j.dump();
}

}  // namespace

TEST_CASE("auto_params follows the two parameter schemes") {
    {
        const SearchConfig cfg = auto_params(178, 13);  // wine: 2314 cells
        CHECK(cfg.memeplexes == 29);
        CHECK(cfg.frogs_per_memeplex == 10);
        CHECK(cfg.rounds == 7);
        CHECK(cfg.submemeplex == 6);
        CHECK(cfg.s_max == 7);
        CHECK_NOTHROW(cfg.validate(13));
    }
    {
        const SearchConfig cfg = auto_params(2000, 500);  // over the 15,000-cell switch
        CHECK(cfg.memeplexes == 30);
        CHECK(cfg.frogs_per_memeplex == 30);
        CHECK(cfg.rounds == 5);
        CHECK(cfg.submemeplex == 15);
        CHECK(cfg.s_max == 225);
    }
    {
        const SearchConfig cfg = auto_params(5, 1);  // everything clamps
        CHECK(cfg.s_max == 1);
        CHECK(cfg.submemeplex == 2);
        CHECK(cfg.frogs_per_memeplex >= 3);
        CHECK(cfg.memeplexes >= 2);
        CHECK_NOTHROW(cfg.validate(1));
    }
    {
        // 2.20 * 10 must stay 22 despite binary representation error
        const SearchConfig cfg = auto_params(100, 10);
        CHECK(cfg.memeplexes == 22);
        CHECK(cfg.frogs_per_memeplex == 7);
        CHECK(cfg.rounds == 5);
        CHECK(cfg.submemeplex == 5);
        CHECK(cfg.s_max == 5);
    }
}

TEST_CASE("config validation rejects bad shapes") {
    SearchConfig cfg;
    cfg.memeplexes = 1;
    CHECK_THROWS(cfg.validate(4));
    cfg = SearchConfig{};
    cfg.submemeplex = 31;
    CHECK_THROWS(cfg.validate(4));
    cfg = SearchConfig{};
    cfg.s_max = 5;
    CHECK_THROWS(cfg.validate(4));
}

TEST_CASE("ranking prefers fitness, then fewer features, deterministically") {
    std::vector<Frog> frogs{make_frog("11100", 0.9), make_frog("10000", 1.0)};
    rank(frogs);
    CHECK(frogs[0].fitness == 1.0);

    frogs = {make_frog("11111", 1.0), make_frog("11100", 1.0)};
    rank(frogs);
    CHECK(frogs[0].cardinality == 3);

    frogs = {make_frog("10100", 0.5), make_frog("10100", 0.5), make_frog("01010", 0.5)};
    rank(frogs);
    // lexicographic tie-break: 01010 < 10100; the identical pair stays adjacent
    CHECK(frogs[0].mask.to_string() == "01010");
    CHECK(frogs[1].mask == frogs[2].mask);
}

TEST_CASE("partition deals ranked frogs round-robin") {
    std::vector<Frog> ranked;
    for (int i = 0; i < 6; ++i) ranked.push_back(make_frog("111", 1.0 - 0.1 * i));

    const auto plexes = partition(ranked, 3, 2);
    CHECK(plexes.size() == 3);
    CHECK(plexes[0][0].fitness == ranked[0].fitness);
    CHECK(plexes[0][1].fitness == ranked[3].fitness);  // rank k + m(j-1)

    const auto one = partition(ranked, 1, 6);
    CHECK(one[0].size() == 6);
    const auto solo = partition(ranked, 6, 1);
    for (int k = 0; k < 6; ++k) CHECK(solo[static_cast<std::size_t>(k)][0].fitness ==
                                      ranked[static_cast<std::size_t>(k)].fitness);

    CHECK_THROWS(partition(ranked, 4, 2));

    // closed form against a bigger random shape
    std::vector<Frog> big;
    for (int i = 0; i < 35; ++i) big.push_back(make_frog("1111111", 1.0 - 0.01 * i));
    const auto grid = partition(big, 5, 7);
    for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t j = 0; j < 7; ++j)
            CHECK(grid[k][j].fitness == big[k + 5 * j].fitness);
}

TEST_CASE("submemeplex weights and sampling") {
    CHECK(submemeplex_weight(3, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(submemeplex_weight(3, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(submemeplex_weight(3, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    for (std::size_t n : {3, 7, 20}) {
        CHECK(submemeplex_weight(n, 0) == doctest::Approx(2.0 / (n + 1)).epsilon(1e-15));
        CHECK(submemeplex_weight(n, n - 1) ==
              doctest::Approx(2.0 / (n * (n + 1.0))).epsilon(1e-15));
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += submemeplex_weight(n, j);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }

    SeededRng rng(3);
    const auto whole = sample_submemeplex(5, 5, rng);
    CHECK(whole == std::vector<std::size_t>{0, 1, 2, 3, 4});

    // distinct, sorted, and biased toward the best rank
    std::size_t rank0 = 0, rank4 = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const auto z = sample_submemeplex(5, 2, rng);
        CHECK(z.size() == 2);
        CHECK(z[0] < z[1]);
        for (auto idx : z) CHECK(idx < 5);
        if (z.front() == 0 || z.back() == 0) ++rank0;
        if (z.front() == 4 || z.back() == 4) ++rank4;
    }
    CHECK(rank0 > rank4 * 2);
    CHECK_THROWS(sample_submemeplex(3, 4, rng));
}

TEST_CASE("step size clamps and floors") {
    SeededRng rng(1);
    CHECK(step_size(0, 3, rng) == 0);

    FixedSource high({0.999});
    CHECK(step_size(8, 3, high) == 3);  // floor(7.992) clamped by s_max

    FixedSource half({0.5});
    CHECK(step_size(3, 10, half) == 1);  // floor(1.5)
}

TEST_CASE("leap reproduces the worked bit-flip example") {
    const Bitmask best = Bitmask::from_string("11001010");
    const Bitmask worst = Bitmask::from_string("10101000");
    CHECK(best.hamming(worst) == 3);

    FixedSource draws({0.11, 0.05, 0.96, 0.74, 0.60, 0.79});
    const Bitmask moved = leap(worst, best, 3, draws);
    CHECK(moved.to_string() == "10101010");
    CHECK(draws.consumed() == 6);

    SeededRng rng(9);
    CHECK(leap(worst, best, 0, rng) == worst);
    CHECK(leap(worst, worst, 5, rng) == worst);

    // S below the Hamming distance consumes selection draws as well
    FixedSource partial({0.9, /*selection*/ 0.0, /*position*/ 0.1});
    const Bitmask one_step = leap(worst, best, 1, partial);
    CHECK(partial.consumed() == 3);
    CHECK(one_step.hamming(worst) <= 1);
}

TEST_CASE("evolve_memeplex censors when no leap can improve") {
    const DecisionTable t = testsupport::dominant_feature_table(5, 12, 7);
    FrddEvaluator eval(t);

    // All frogs identical: leaps toward best or global best cannot move.
    const Bitmask stuck = Bitmask::from_string("01010101");
    std::vector<Frog> memeplex(4, Frog::evaluated(stuck, eval));
    const Frog global = memeplex.front();

    SeededRng rng(17);
    EvolveParams params{3, 1, 3, DistanceMode::Hamming};
    evolve_memeplex(memeplex, params, eval, global, rng);

    std::size_t unchanged = 0;
    for (const auto& f : memeplex) {
        CHECK(f.mask.any());
        if (f.mask == stuck) ++unchanged;
    }
    CHECK(unchanged == 3);  // censorship replaced exactly the sampled worst
    CHECK(std::is_sorted(memeplex.begin(), memeplex.end(), frog_rank_less));
}

TEST_CASE("evolve_memeplex never leaves the worst slot ranked below its start") {
    const DecisionTable t = testsupport::dominant_feature_table(6, 10, 5);
    FrddEvaluator eval(t);

    Bitmask good(6);
    good.set(0);  // the signal feature: fitness 1, cardinality 1
    Bitmask bad = Bitmask::all_set(6);

    std::vector<Frog> memeplex{Frog::evaluated(good, eval), Frog::evaluated(bad, eval)};
    rank(memeplex);
    const Frog global = memeplex.front();
    const Frog old_worst = memeplex.back();

    SeededRng rng(23);
    EvolveParams params{2, 1, 3, DistanceMode::Hamming};
    evolve_memeplex(memeplex, params, eval, global, rng);
    CHECK_FALSE(frog_rank_less(old_worst, memeplex.back()));
}

TEST_CASE("evolve_memeplex is reproducible on the pinned table") {
    const DecisionTable t = testsupport::fixed_small_table();
    auto run_once = [&t] {
        FrddEvaluator eval(t);
        std::vector<Frog> memeplex;
        SeededRng init(100);
        for (int i = 0; i < 4; ++i)
            memeplex.push_back(Frog::evaluated(random_feasible_mask(2, init), eval));
        rank(memeplex);
        const Frog global = memeplex.front();
        SeededRng rng(200);
        EvolveParams params{2, 3, 1, DistanceMode::Hamming};
        evolve_memeplex(memeplex, params, eval, global, rng);
        std::string out;
        for (const auto& f : memeplex)
            out += f.mask.to_string() + ":" + std::to_string(f.fitness) + ";";
        return out;
    };
    CHECK(run_once() == run_once());
}

TEST_CASE("search finds the dominant singleton") {
    const DecisionTable t = testsupport::dominant_feature_table(1, 16, 6);
    FrddEvaluator eval(t);
    SearchConfig cfg = auto_params(t.objects(), t.feature_count());
    cfg.rng_seed = 4;
    const ReductReport r = bsfla_search(eval, cfg);
    CHECK(r.best_fitness == 1.0);
    CHECK(r.best_cardinality == 1);
    REQUIRE(!r.reducts.empty());
    CHECK(r.reducts.front().test(0));
}

TEST_CASE("search returns both duplicate singletons") {
    const DecisionTable t = testsupport::duplicate_feature_table(2, 16, 4);
    FrddEvaluator eval(t);
    SearchConfig cfg = auto_params(t.objects(), t.feature_count());
    cfg.rng_seed = 1;
    const ReductReport r = bsfla_search(eval, cfg);
    CHECK(r.best_fitness == 1.0);
    CHECK(r.best_cardinality == 1);
    Bitmask a(t.feature_count()), b(t.feature_count());
    a.set(0);
    b.set(1);
    CHECK(std::find(r.reducts.begin(), r.reducts.end(), a) != r.reducts.end());
    CHECK(std::find(r.reducts.begin(), r.reducts.end(), b) != r.reducts.end());

    // report invariants
    std::size_t freq_total = 0;
    for (auto c : r.feature_frequency) freq_total += c;
    CHECK(freq_total == r.best_cardinality * r.reducts.size());
    std::set<std::string> distinct;
    for (const auto& m : r.reducts) distinct.insert(m.to_string());
    CHECK(distinct.size() == r.reducts.size());
}

TEST_CASE("search is deterministic and thread-count independent") {
    const DecisionTable t = testsupport::planted_table(3);
    SearchConfig cfg = auto_params(t.objects(), t.feature_count());
    cfg.rng_seed = 99;
    cfg.max_shuffles = 12;

    FrddEvaluator e1(t), e2(t), e3(t);
    const ReductReport r1 = bsfla_search(e1, cfg, 1);
    const ReductReport r2 = bsfla_search(e2, cfg, 1);
    const ReductReport r3 = bsfla_search(e3, cfg, 4);
    CHECK(stripped_json(r1) == stripped_json(r2));
    CHECK(stripped_json(r1) == stripped_json(r3));

    // reusing a warm evaluator must not change the report either
    const ReductReport r4 = bsfla_search(e1, cfg, 1);
    CHECK(stripped_json(r1) == stripped_json(r4));
}

TEST_CASE("posregion distance mode gives the same trajectories as hamming") {
    // The agreement-complement realization coincides with the Hamming
    // distance bit for bit, so seeded runs agree in full.
    const DecisionTable t = testsupport::planted_table(8);
    SearchConfig cfg = auto_params(t.objects(), t.feature_count());
    cfg.rng_seed = 5;
    cfg.max_shuffles = 8;
    FrddEvaluator e1(t), e2(t);
    const ReductReport hamming = bsfla_search(e1, cfg);
    cfg.distance = DistanceMode::PosRegion;
    const ReductReport pos = bsfla_search(e2, cfg);
    CHECK(hamming.best_fitness == pos.best_fitness);
    CHECK(hamming.best_cardinality == pos.best_cardinality);
    CHECK(pos.config_echo.at("distance") == "posregion");
}

namespace {

struct InvariantObserver final : SearchObserver {
    std::vector<TracePoint> bests;
    bool all_feasible = true;

    void on_shuffle(std::size_t, const std::vector<Frog>& population) override {
        for (const auto& f : population)
            if (f.mask.none()) all_feasible = false;
        bests.push_back({population.front().fitness, population.front().cardinality});
    }
};

}  // namespace

TEST_CASE("best pair never worsens and every frog stays feasible") {
    const DecisionTable t = testsupport::planted_table(12);
    FrddEvaluator eval(t);
    SearchConfig cfg = auto_params(t.objects(), t.feature_count());
    cfg.rng_seed = 7;

    InvariantObserver obs;
    const ReductReport r = bsfla_search(eval, cfg, 1, &obs);
    CHECK(obs.all_feasible);
    for (std::size_t i = 1; i < obs.bests.size(); ++i)
        CHECK_FALSE(pair_better(obs.bests[i - 1].fitness, obs.bests[i - 1].cardinality,
                                obs.bests[i].fitness, obs.bests[i].cardinality));
    CHECK(obs.bests.size() == r.trace.size());

    // cached fitness matches a fresh recomputation
    for (const auto& m : r.reducts)
        CHECK(std::fabs(frdd(t, m).gamma_prime - r.best_fitness) <= 1e-12);
}

TEST_CASE("stall detection stops the search early") {
    const DecisionTable t = testsupport::dominant_feature_table(9, 10, 3);
    FrddEvaluator eval(t);
    SearchConfig cfg = auto_params(t.objects(), t.feature_count());
    cfg.rng_seed = 2;
    cfg.max_shuffles = 200;
    cfg.stall_shuffles = 5;
    const ReductReport r = bsfla_search(eval, cfg);
    CHECK(r.stop_reason == "stalled");
    CHECK(r.trace.size() < 200);
}
