#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frogsel/bitmask.hpp"
#include "frogsel/fuzzy_rough.hpp"
#include "frogsel/rng.hpp"

namespace frogsel {

// Candidate feature subset with its cached fitness.
struct Frog {
    Bitmask mask;
    double fitness = 0.0;       // gamma' of mask
    std::size_t cardinality = 0;

    static Frog evaluated(Bitmask mask, FrddEvaluator& eval) {
        Frog f;
        f.cardinality = mask.count();
        f.fitness = eval.gamma(mask);
        f.mask = std::move(mask);
        return f;
    }
};

// True when (f1, c1) ranks strictly better than (f2, c2): higher fitness
// first, fewer selected features among equals.
inline bool pair_better(double f1, std::size_t c1, double f2, std::size_t c2) {
    if (f1 != f2) return f1 > f2;
    return c1 < c2;
}

// Full ranking order: fitness desc, cardinality asc, then the bit string
// itself so sorting is deterministic.
inline bool frog_rank_less(const Frog& a, const Frog& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    if (a.cardinality != b.cardinality) return a.cardinality < b.cardinality;
    return a.mask.lex_less(b.mask);
}

// Sorts best-first; the best frog ends up at index 0.
void rank(std::vector<Frog>& frogs);

struct TracePoint {
    double fitness = 0.0;
    std::size_t cardinality = 0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct ReductReport {
    std::string algorithm;
    std::vector<Bitmask> reducts;  // distinct best-tied masks, lexicographic order
    double best_fitness = 0.0;
    std::size_t best_cardinality = 0;
    std::vector<std::size_t> feature_frequency;  // appearances across reducts
    std::vector<TracePoint> trace;               // best pair per shuffle/generation
    std::uint64_t evaluations = 0;
    double wall_time_ms = 0.0;
    std::string stop_reason;
    std::map<std::string, std::string> config_echo;

    // Timing lives under its own "timing" key so reruns compare byte-equal
    // after dropping it.
    std::string to_json(int indent = 2) const;
};

// Dedupes the best-tied masks from a candidate pool and fills the report's
// result fields (reducts, best pair, feature frequencies).
void collect_best_tied(const std::vector<Frog>& candidates, std::size_t feature_count,
                       ReductReport& report);

// Shortest decimal form that round-trips, for deterministic text output.
std::string format_double(double v);

}  // namespace frogsel
