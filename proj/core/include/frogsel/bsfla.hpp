#pragma once

#include <cstdint>
#include <vector>

#include "frogsel/fuzzy_rough.hpp"
#include "frogsel/rng.hpp"
#include "frogsel/search.hpp"

namespace frogsel {

enum class DistanceMode { Hamming, PosRegion };

const char* to_string(DistanceMode mode);
DistanceMode parse_distance_mode(const std::string& name);

struct SearchConfig {
    std::size_t memeplexes = 30;         // m
    std::size_t frogs_per_memeplex = 30; // n
    std::size_t rounds = 5;              // evolution rounds per memeplex per shuffle
    std::size_t submemeplex = 15;        // q
    std::size_t s_max = 1;               // max bits moved per leap
    DistanceMode distance = DistanceMode::Hamming;
    std::size_t max_shuffles = 50;
    std::size_t stall_shuffles = 10;     // stop after this many shuffles without progress
    std::uint64_t rng_seed = 0;

    std::size_t total_frogs() const { return memeplexes * frogs_per_memeplex; }
    void validate(std::size_t feature_count) const;  // throws on a bad configuration
};

// Frog counts scale with the feature count L for small tables
// (m,n,N,q,s_max) = ceil((2.20, 0.70, 0.50, 0.45, 0.50) * L); tables over
// 15,000 data cells switch to the fixed set (30, 30, 5, 15) with
// s_max = ceil(0.45 * L). Results are clamped to the config invariants.
SearchConfig auto_params(std::size_t objects, std::size_t features);

std::size_t frog_distance(const Bitmask& a, const Bitmask& b, DistanceMode mode);

// S = min(floor(rand * dist), s_max).
std::size_t step_size(std::size_t dist, std::size_t s_max, RandomSource& rng);

// Moves up to S differing bits of `worst` toward `target`. Draw order:
// thresholds r[0..S), then (only when S < |D|) a partial shuffle selecting
// which differing positions may move, then one draw per selected position;
// position i flips to the target's bit iff r[j] > that draw. When S >= |D|
// every differing position participates in ascending order.
Bitmask leap(const Bitmask& worst, const Bitmask& target, std::size_t steps, RandomSource& rng);

// Deal ranked frogs round-robin: memeplex k takes ranks k, k+m, k+2m, ...
// Throws unless ranked.size() == m * n.
std::vector<std::vector<Frog>> partition(const std::vector<Frog>& ranked, std::size_t m,
                                         std::size_t n);

// Triangular selection weight of the 0-based rank j in a memeplex of n.
inline double submemeplex_weight(std::size_t n, std::size_t rank) {
    return 2.0 * static_cast<double>(n - rank) /
           (static_cast<double>(n) * static_cast<double>(n + 1));
}

// Draws q distinct rank indices out of [0, n) without replacement, the
// rank-j frog weighted by submemeplex_weight (best rank heaviest).
// Returned ascending, so front() is the submemeplex best and back() its
// worst.
std::vector<std::size_t> sample_submemeplex(std::size_t n, std::size_t q, RandomSource& rng);

// Each bit Bernoulli(1/2); all-zero draws are redrawn.
Bitmask random_feasible_mask(std::size_t bits, RandomSource& rng);

struct EvolveParams {
    std::size_t submemeplex = 2;  // q
    std::size_t rounds = 1;       // N
    std::size_t s_max = 1;
    DistanceMode distance = DistanceMode::Hamming;
};

// One memeplex's memetic evolution: N rounds of sample submemeplex, try to
// improve its worst frog toward the submemeplex best, then toward the
// global best, and finally censor it with a random frog if nothing ranked
// strictly better. The memeplex must arrive sorted and leaves sorted.
void evolve_memeplex(std::vector<Frog>& memeplex, const EvolveParams& params,
                     FrddEvaluator& eval, const Frog& global_best, RandomSource& rng);

struct SearchObserver {
    virtual ~SearchObserver() = default;
    virtual void on_shuffle(std::size_t /*shuffle*/, const std::vector<Frog>& /*population*/) {}
};

// The full search: random feasible population, then shuffle rounds of
// rank / partition / evolve until the best (fitness, cardinality) pair
// stalls or max_shuffles is reached. Memeplexes evolve on jobs threads with
// per-(shuffle, memeplex) RNG streams, so the result is identical for any
// thread count. Returns every distinct best-tied mask in the final
// population.
ReductReport bsfla_search(FrddEvaluator& eval, const SearchConfig& config, std::size_t jobs = 1,
                          SearchObserver* observer = nullptr);

}  // namespace frogsel
