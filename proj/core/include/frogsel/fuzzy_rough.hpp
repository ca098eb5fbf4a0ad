#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "frogsel/bitmask.hpp"
#include "frogsel/dataset.hpp"

namespace frogsel {

// Lukasiewicz connectives used throughout: I(p,q) = min(1-p+q, 1),
// T(p,q) = max(p+q-1, 0).
inline double lukasiewicz_implicator(double p, double q) {
    const double v = 1.0 - p + q;
    return v < 1.0 ? v : 1.0;
}
inline double lukasiewicz_tnorm(double p, double q) {
    const double v = p + q - 1.0;
    return v > 0.0 ? v : 0.0;
}

struct FrddValue {
    double gamma_prime = 0.0;            // mean positive-region membership
    std::vector<double> per_object_pos;  // one membership per object
};

struct CrispRegions {
    std::vector<std::size_t> pos, neg, bnd;  // sorted object indices
    double gamma = 0.0;                      // |pos| / |U|
};

// Similarity of two objects on one feature. Real features use the ramp
// max(min((a(y)-(a(x)-s))/s, ((a(x)+s)-a(y))/s), 0) whose denominators,
// written out as a(x)-(a(x)-s) and (a(x)+s)-a(x), both reduce to s = sigma.
// A constant feature (sigma = 0) cannot discriminate and scores 1 for every
// pair. Nominal features compare crisply.
double feature_similarity(const DecisionTable& table, std::size_t feature,
                          std::size_t x, std::size_t y);

// Per-feature similarities combined with the Lukasiewicz t-norm, folded in
// ascending feature index order. Throws on an empty mask.
double subset_similarity(const DecisionTable& table, const Bitmask& mask,
                         std::size_t x, std::size_t y);

// inf over y of I(similarity(x,y), mu_x[y]).
double lower_approx_membership(const DecisionTable& table, const Bitmask& mask,
                               std::size_t x, std::span<const double> mu_x);

// sup over y of T(similarity(x,y), mu_x[y]).
double upper_approx_membership(const DecisionTable& table, const Bitmask& mask,
                               std::size_t x, std::span<const double> mu_x);

// Fuzzy-rough dependency degree of the decision on the selected features.
// Decision classes act as crisp sets; the empty mask scores 0 by convention.
FrddValue frdd(const DecisionTable& table, const Bitmask& mask);

// Classic rough-set regions over the equivalence classes of the selected
// nominal features. Throws if any selected feature is real-valued.
CrispRegions crisp_regions(const DecisionTable& table, const Bitmask& mask);

// Dissimilarity of two equal-length bit vectors, realized as length minus
// the bit-agreement count; ranges over [0, L] and coincides with the
// Hamming distance for crisp bits.
std::size_t pos_dissimilarity(const Bitmask& a, const Bitmask& b);

// Shared fitness function: one instance per table, handed to every search
// algorithm so they optimize the identical objective. Precomputes the
// per-feature similarity matrices when they fit the memory budget and
// memoizes gamma' per mask. Thread safe; same mask always yields the same
// value regardless of caching, precomputation, or scheduling.
class FrddEvaluator {
public:
    static constexpr std::size_t kDefaultBudgetBytes = std::size_t{2} << 30;  // 2 GiB

    explicit FrddEvaluator(const DecisionTable& table,
                           std::size_t memory_budget_bytes = kDefaultBudgetBytes);

    // Cached gamma'. Counts one evaluation per call.
    double gamma(const Bitmask& mask);

    // Uncached full result with per-object memberships.
    FrddValue full(const Bitmask& mask) const;

    const DecisionTable& table() const { return *table_; }
    bool precomputed() const { return !sims_->matrices.empty(); }
    std::uint64_t evaluations() const { return calls_.load(); }
    std::uint64_t cache_misses() const { return misses_.load(); }

    // Same table and precomputed matrices, fresh cache and counters.
    FrddEvaluator fresh_clone() const;

private:
    struct SimBank {
        // matrices[f][x * n + y]; empty when over budget.
        std::vector<std::vector<double>> matrices;
    };

    FrddEvaluator(const DecisionTable& table, std::shared_ptr<const SimBank> sims);

    double pair_similarity(std::span<const std::size_t> feats, std::size_t x, std::size_t y) const;
    FrddValue compute(const Bitmask& mask) const;

    const DecisionTable* table_;
    std::shared_ptr<const SimBank> sims_;
    mutable std::mutex cache_mutex_;
    std::unordered_map<Bitmask, double, BitmaskHash> cache_;
    std::atomic<std::uint64_t> calls_{0};
    std::atomic<std::uint64_t> misses_{0};
};

}  // namespace frogsel
