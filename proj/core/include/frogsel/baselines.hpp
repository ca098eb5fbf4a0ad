#pragma once

#include <cstdint>

#include "frogsel/fuzzy_rough.hpp"
#include "frogsel/search.hpp"

namespace frogsel {

struct GaConfig {
    std::size_t population = 900;
    std::size_t generations = 5;
    double p_crossover = 0.600;
    double p_mutation = 0.033;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct PsoConfig {
    std::size_t particles = 900;
    std::size_t iterations = 5;
    double c1 = 2.0;
    double c2 = 2.0;
    double v_max = 4.0;
    double inertia = 1.0;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// Greedy forward selection: starting from the empty set (gamma' = 0), add
// the feature with the largest gamma' gain (ties to the lowest index) until
// no addition improves by more than 1e-10. Returns a single reduct; the
// trace holds one point per accepted feature.
ReductReport quickreduct(FrddEvaluator& eval);

// Binary GA over feature masks: tournament-2 selection on the
// (fitness, cardinality) ranking, one-point crossover, per-bit mutation,
// elitism of one; all-zero offspring are redrawn as fresh random masks.
ReductReport ga_search(FrddEvaluator& eval, const GaConfig& config);

// Binary PSO: per-bit velocities with cognitive/social pulls clamped to
// +/- v_max and a sigmoid transfer to bit probabilities; personal and
// global bests follow the (fitness, cardinality) ranking; all-zero
// positions are redrawn.
ReductReport pso_search(FrddEvaluator& eval, const PsoConfig& config);

}  // namespace frogsel
