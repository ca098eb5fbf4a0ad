#include <chrono>
#include <cmath>
#include <stdexcept>

#include "frogsel/baselines.hpp"
#include "frogsel/bsfla.hpp"

namespace frogsel {

void PsoConfig::validate() const {
    if (particles < 1) throw std::invalid_argument("PsoConfig: need at least one particle");
    if (iterations < 1) throw std::invalid_argument("PsoConfig: need at least one iteration");
    if (v_max <= 0.0) throw std::invalid_argument("PsoConfig: v_max must be positive");
}

ReductReport pso_search(FrddEvaluator& eval, const PsoConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t L = eval.table().feature_count();
    const std::uint64_t evals_before = eval.evaluations();
    SeededRng rng(config.rng_seed);

    std::vector<Frog> position;
    position.reserve(config.particles);
    for (std::size_t i = 0; i < config.particles; ++i)
        position.push_back(Frog::evaluated(random_feasible_mask(L, rng), eval));
    std::vector<std::vector<double>> velocity(config.particles, std::vector<double>(L, 0.0));
    std::vector<Frog> pbest = position;

    auto best_of = [](const std::vector<Frog>& frogs) {
        const Frog* best = &frogs.front();
        for (const auto& f : frogs)
            if (frog_rank_less(f, *best)) best = &f;
        return *best;
    };
    Frog gbest = best_of(pbest);

    ReductReport report;
    report.algorithm = "pso";
    report.trace.push_back({gbest.fitness, gbest.cardinality});

    for (std::size_t iter = 0; iter < config.iterations; ++iter) {
        for (std::size_t p = 0; p < config.particles; ++p) {
            auto& v = velocity[p];
            Frog& x = position[p];
            for (std::size_t i = 0; i < L; ++i) {
                const double r1 = rng.uniform01();
                const double r2 = rng.uniform01();
                const double xi = x.mask.test(i) ? 1.0 : 0.0;
                const double pi = pbest[p].mask.test(i) ? 1.0 : 0.0;
                const double gi = gbest.mask.test(i) ? 1.0 : 0.0;
                double nv = config.inertia * v[i] + config.c1 * r1 * (pi - xi) +
                            config.c2 * r2 * (gi - xi);
                if (nv > config.v_max) nv = config.v_max;
                if (nv < -config.v_max) nv = -config.v_max;
                v[i] = nv;
            }
            Bitmask nx(L);
            for (std::size_t i = 0; i < L; ++i) {
                const double s = 1.0 / (1.0 + std::exp(-v[i]));  // sigmoid transfer
                nx.set(i, rng.uniform01() < s);
            }
            if (nx.none()) nx = random_feasible_mask(L, rng);
            x = Frog::evaluated(std::move(nx), eval);
            if (frog_rank_less(x, pbest[p])) pbest[p] = x;
        }
        // Synchronous global-best update keeps one iteration order-free.
        const Frog candidate = best_of(pbest);
        if (frog_rank_less(candidate, gbest)) gbest = candidate;
        report.trace.push_back({gbest.fitness, gbest.cardinality});
    }

    // The swarm's answer: current positions plus the remembered bests.
    std::vector<Frog> pool = position;
    pool.insert(pool.end(), pbest.begin(), pbest.end());
    pool.push_back(gbest);
    collect_best_tied(pool, L, report);

    report.evaluations = eval.evaluations() - evals_before;
    report.stop_reason = "iterations_exhausted";
    report.config_echo = {
        {"particles", std::to_string(config.particles)},
        {"iterations", std::to_string(config.iterations)},
        {"c1", format_double(config.c1)},
        {"c2", format_double(config.c2)},
        {"v_max", format_double(config.v_max)},
        {"inertia", format_double(config.inertia)},
        {"transfer", "sigmoid"},
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
