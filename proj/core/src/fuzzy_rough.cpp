#include "frogsel/fuzzy_rough.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace frogsel {
namespace {

double real_similarity(double ax, double ay, double sigma) {
    if (sigma <= 0.0) return 1.0;  // constant feature: cannot discriminate
    // The two ramp terms are (sigma +/- (ay - ax)) / sigma, so their min is
    // (sigma - |ax - ay|) / sigma. This form is symmetric in (x, y) and
    // exactly 1 on the diagonal, which the raw expressions are not under
    // floating-point rounding.
    const double m = 1.0 - std::fabs(ax - ay) / sigma;
    return m < 0.0 ? 0.0 : m;
}

double feature_similarity_unchecked(const DecisionTable& table, std::size_t feature,
                                    std::size_t x, std::size_t y) {
    const FeatureColumn& col = table.features()[feature];
    if (col.kind == FeatureKind::Real)
        return real_similarity(col.reals[x], col.reals[y], col.sigma);
    return col.codes[x] == col.codes[y] ? 1.0 : 0.0;
}

// Lukasiewicz fold over the selected features in ascending index order.
// Zero absorbs: max(0 + s - 1, 0) = 0 for any s in [0,1].
template <class SimFn>
double fold_similarity(std::span<const std::size_t> feats, std::size_t x, std::size_t y,
                       SimFn&& sim) {
    double t = sim(feats[0], x, y);
    for (std::size_t k = 1; k < feats.size(); ++k) {
        if (t <= 0.0) return 0.0;
        t = lukasiewicz_tnorm(t, sim(feats[k], x, y));
    }
    return t;
}

// gamma' with crisp decision classes. The lower approximation of class c at
// x reduces to min over y outside c of (1 - similarity(x,y)) because
// I(s,1) = 1 and I(s,0) = 1 - s; the positive region takes the best class.
template <class SimFn>
FrddValue frdd_core(const DecisionTable& table, std::span<const std::size_t> feats, SimFn&& sim) {
    const std::size_t n = table.objects();
    FrddValue out;
    out.per_object_pos.assign(n, 0.0);
    if (feats.empty()) return out;

    const auto& labels = table.decision().labels;
    const std::size_t classes = table.decision().class_count();
    double total = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double best = 0.0;
        for (std::size_t c = 0; c < classes && best < 1.0; ++c) {
            double m = 1.0;
            for (std::size_t y = 0; y < n; ++y) {
                if (static_cast<std::size_t>(labels[y]) == c) continue;
                const double v = 1.0 - fold_similarity(feats, x, y, sim);
                if (v < m) m = v;
                if (m == 0.0) break;
            }
            if (m > best) best = m;
        }
        out.per_object_pos[x] = best;
        total += best;
    }
    out.gamma_prime = total / static_cast<double>(n);
    return out;
}

void check_object(const DecisionTable& table, std::size_t x, const char* what) {
    if (x >= table.objects()) throw TableError(std::string(what) + ": object index out of range");
}

std::vector<std::size_t> checked_positions(const DecisionTable& table, const Bitmask& mask,
                                           const char* what) {
    if (mask.size() != table.feature_count())
        throw TableError(std::string(what) + ": mask length does not match feature count");
    if (mask.none()) throw TableError(std::string(what) + ": empty mask");
    return mask.set_positions();
}

}  // namespace

double feature_similarity(const DecisionTable& table, std::size_t feature, std::size_t x,
                          std::size_t y) {
    if (feature >= table.feature_count())
        throw TableError("feature_similarity: feature index out of range");
    check_object(table, x, "feature_similarity");
    check_object(table, y, "feature_similarity");
    return feature_similarity_unchecked(table, feature, x, y);
}

double subset_similarity(const DecisionTable& table, const Bitmask& mask, std::size_t x,
                         std::size_t y) {
    const auto feats = checked_positions(table, mask, "subset_similarity");
    check_object(table, x, "subset_similarity");
    check_object(table, y, "subset_similarity");
    return fold_similarity(feats, x, y, [&](std::size_t f, std::size_t a, std::size_t b) {
        return feature_similarity_unchecked(table, f, a, b);
    });
}

double lower_approx_membership(const DecisionTable& table, const Bitmask& mask, std::size_t x,
                               std::span<const double> mu_x) {
    const auto feats = checked_positions(table, mask, "lower_approx_membership");
    check_object(table, x, "lower_approx_membership");
    if (mu_x.size() != table.objects())
        throw TableError("lower_approx_membership: membership vector size mismatch");
    double inf = 1.0;
    for (std::size_t y = 0; y < table.objects(); ++y) {
        const double s = fold_similarity(feats, x, y, [&](std::size_t f, std::size_t a, std::size_t b) {
            return feature_similarity_unchecked(table, f, a, b);
        });
        inf = std::min(inf, lukasiewicz_implicator(s, mu_x[y]));
    }
    return inf;
}

double upper_approx_membership(const DecisionTable& table, const Bitmask& mask, std::size_t x,
                               std::span<const double> mu_x) {
    const auto feats = checked_positions(table, mask, "upper_approx_membership");
    check_object(table, x, "upper_approx_membership");
    if (mu_x.size() != table.objects())
        throw TableError("upper_approx_membership: membership vector size mismatch");
    double sup = 0.0;
    for (std::size_t y = 0; y < table.objects(); ++y) {
        const double s = fold_similarity(feats, x, y, [&](std::size_t f, std::size_t a, std::size_t b) {
            return feature_similarity_unchecked(table, f, a, b);
        });
        sup = std::max(sup, lukasiewicz_tnorm(s, mu_x[y]));
    }
    return sup;
}

FrddValue frdd(const DecisionTable& table, const Bitmask& mask) {
    if (mask.size() != table.feature_count())
        throw TableError("frdd: mask length does not match feature count");
    const auto feats = mask.set_positions();
    return frdd_core(table, feats, [&](std::size_t f, std::size_t a, std::size_t b) {
        return feature_similarity_unchecked(table, f, a, b);
    });
}

CrispRegions crisp_regions(const DecisionTable& table, const Bitmask& mask) {
    const auto feats = checked_positions(table, mask, "crisp_regions");
    for (auto f : feats)
        if (table.features()[f].kind != FeatureKind::Nominal)
            throw TableError("crisp_regions: feature '" + table.features()[f].name +
                             "' is real-valued; crisp regions need nominal features");

    const std::size_t n = table.objects();
    std::map<std::vector<std::int32_t>, std::vector<std::size_t>> blocks;
    std::vector<std::int32_t> key(feats.size());
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t k = 0; k < feats.size(); ++k) key[k] = table.features()[feats[k]].codes[x];
        blocks[key].push_back(x);
    }

    const auto& labels = table.decision().labels;
    CrispRegions out;
    std::vector<bool> covered(n, false);  // union of upper approximations
    for (const auto& [_, members] : blocks) {
        bool pure = true;
        for (auto m : members)
            if (labels[m] != labels[members.front()]) {
                pure = false;
                break;
            }
        // Every block intersects the class of each member, so the whole
        // block enters that class's upper approximation.
        for (auto m : members) covered[m] = true;
        if (pure)
            for (auto m : members) out.pos.push_back(m);
        else
            for (auto m : members) out.bnd.push_back(m);
    }
    for (std::size_t x = 0; x < n; ++x)
        if (!covered[x]) out.neg.push_back(x);
    std::sort(out.pos.begin(), out.pos.end());
    std::sort(out.bnd.begin(), out.bnd.end());
    out.gamma = static_cast<double>(out.pos.size()) / static_cast<double>(n);
    return out;
}

std::size_t pos_dissimilarity(const Bitmask& a, const Bitmask& b) {
    // Agreement count plays the positive-region role for bit vectors; the
    // complement L - agreement is exactly the Hamming distance.
    return a.hamming(b);
}

FrddEvaluator::FrddEvaluator(const DecisionTable& table, std::size_t memory_budget_bytes)
    : table_(&table) {
    auto bank = std::make_shared<SimBank>();
    const std::size_t n = table.objects();
    const std::size_t L = table.feature_count();
    const double need = static_cast<double>(n) * static_cast<double>(n) *
                        static_cast<double>(L) * sizeof(double);
    if (L > 0 && need <= static_cast<double>(memory_budget_bytes)) {
        bank->matrices.resize(L);
        for (std::size_t f = 0; f < L; ++f) {
            auto& m = bank->matrices[f];
            m.resize(n * n);
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y)
                    m[x * n + y] = feature_similarity_unchecked(table, f, x, y);
        }
    }
    sims_ = std::move(bank);
}

FrddEvaluator::FrddEvaluator(const DecisionTable& table, std::shared_ptr<const SimBank> sims)
    : table_(&table), sims_(std::move(sims)) {}

FrddEvaluator FrddEvaluator::fresh_clone() const { return FrddEvaluator(*table_, sims_); }

FrddValue FrddEvaluator::compute(const Bitmask& mask) const {
    if (mask.size() != table_->feature_count())
        throw TableError("FrddEvaluator: mask length does not match feature count");
    const auto feats = mask.set_positions();
    if (!sims_->matrices.empty()) {
        const std::size_t n = table_->objects();
        const auto& mats = sims_->matrices;
        return frdd_core(*table_, feats, [&](std::size_t f, std::size_t a, std::size_t b) {
            return mats[f][a * n + b];
        });
    }
    return frdd_core(*table_, feats, [&](std::size_t f, std::size_t a, std::size_t b) {
        return feature_similarity_unchecked(*table_, f, a, b);
    });
}

double FrddEvaluator::gamma(const Bitmask& mask) {
    calls_.fetch_add(1, std::memory_order_relaxed);
    {
        std::lock_guard lock(cache_mutex_);
        auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;
    }
    const double value = compute(mask).gamma_prime;
    misses_.fetch_add(1, std::memory_order_relaxed);
    std::lock_guard lock(cache_mutex_);
    return cache_.emplace(mask, value).first->second;
}

FrddValue FrddEvaluator::full(const Bitmask& mask) const { return compute(mask); }

}  // namespace frogsel
