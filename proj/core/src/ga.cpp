#include <chrono>
#include <stdexcept>

#include "frogsel/baselines.hpp"
#include "frogsel/bsfla.hpp"

namespace frogsel {

void GaConfig::validate() const {
    if (population < 2) throw std::invalid_argument("GaConfig: population must be at least 2");
    if (generations < 1) throw std::invalid_argument("GaConfig: need at least one generation");
    if (p_crossover < 0.0 || p_crossover > 1.0 || p_mutation < 0.0 || p_mutation > 1.0)
        throw std::invalid_argument("GaConfig: probabilities must lie in [0,1]");
}

namespace {

const Frog& tournament2(const std::vector<Frog>& pop, RandomSource& rng) {
    const Frog& a = pop[uniform_index(rng, pop.size())];
    const Frog& b = pop[uniform_index(rng, pop.size())];
    return frog_rank_less(a, b) ? a : b;
}

}  // namespace

ReductReport ga_search(FrddEvaluator& eval, const GaConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t L = eval.table().feature_count();
    const std::uint64_t evals_before = eval.evaluations();
    SeededRng rng(config.rng_seed);

    std::vector<Frog> population;
    population.reserve(config.population);
    for (std::size_t i = 0; i < config.population; ++i)
        population.push_back(Frog::evaluated(random_feasible_mask(L, rng), eval));
    rank(population);

    ReductReport report;
    report.algorithm = "ga";
    report.trace.push_back({population.front().fitness, population.front().cardinality});

    for (std::size_t gen = 0; gen < config.generations; ++gen) {
        std::vector<Frog> next;
        next.reserve(config.population);
        next.push_back(population.front());  // elitism of one
        while (next.size() < config.population) {
            const Frog& pa = tournament2(population, rng);
            const Frog& pb = tournament2(population, rng);
            Bitmask child = pa.mask;
            if (rng.uniform01() < config.p_crossover && L > 1) {
                const std::size_t cut = 1 + uniform_index(rng, L - 1);
                for (std::size_t i = cut; i < L; ++i) child.set(i, pb.mask.test(i));
            }
            for (std::size_t i = 0; i < L; ++i)
                if (rng.uniform01() < config.p_mutation) child.flip(i);
            if (child.none()) child = random_feasible_mask(L, rng);
            next.push_back(Frog::evaluated(std::move(child), eval));
        }
        population = std::move(next);
        rank(population);
        report.trace.push_back({population.front().fitness, population.front().cardinality});
    }

    collect_best_tied(population, L, report);
    report.evaluations = eval.evaluations() - evals_before;
    report.stop_reason = "generations_exhausted";
    report.config_echo = {
        {"population", std::to_string(config.population)},
        {"generations", std::to_string(config.generations)},
        {"p_crossover", format_double(config.p_crossover)},
        {"p_mutation", format_double(config.p_mutation)},
        {"selection", "tournament2+elitism1"},
        {"seed", std::to_string(config.rng_seed)},
        {"rng", kRngAlgorithm},
        {"sigma_mode", to_string(eval.table().sigma_mode())},
        {"normalized", eval.table().normalized() ? "true" : "false"},
    };
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace frogsel
