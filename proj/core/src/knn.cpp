#include "frogsel/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frogsel/rng.hpp"

namespace frogsel {
namespace {

void shuffle_indices(std::vector<std::size_t>& v, RandomSource& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace

KnnCvResult knn_cv_accuracy(const DecisionTable& table, const Bitmask& mask, std::size_t folds,
                            std::uint64_t seed) {
    if (folds < 2) throw TableError("knn_cv_accuracy: need at least 2 folds");
    if (table.objects() < folds) throw TableError("knn_cv_accuracy: fewer objects than folds");
    const DecisionTable view = project(table, mask);  // validates the mask
    const std::size_t n = view.objects();

    // Min-max normalize the selected real features for the distance.
    std::vector<std::vector<double>> reals;
    std::vector<const std::vector<std::int32_t>*> nominals;
    for (const auto& col : view.features()) {
        if (col.kind == FeatureKind::Real) {
            auto v = col.reals;
            const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
            const double lo = *mn, hi = *mx;
            if (hi > lo)
                for (double& x : v) x = (x - lo) / (hi - lo);
            else
                for (double& x : v) x = 0.0;
            reals.push_back(std::move(v));
        } else {
            nominals.push_back(&col.codes);
        }
    }
    const auto& labels = view.decision().labels;

    auto distance = [&](std::size_t a, std::size_t b) {
        double sq = 0.0;
        for (const auto& col : reals) {
            const double d = col[a] - col[b];
            sq += d * d;
        }
        double dist = std::sqrt(sq);
        for (const auto* col : nominals)
            if ((*col)[a] != (*col)[b]) dist += 1.0;
        return dist;
    };

    // Fold assignment: shuffle within each class and deal round-robin;
    // fall back to a plain shuffle when stratification is impossible.
    KnnCvResult result;
    std::vector<std::size_t> fold_of(n);
    SeededRng rng(derive_stream_seed(seed, 0x6b6e6e, 0));  // "knn" stream

    std::vector<std::vector<std::size_t>> by_class(view.decision().class_count());
    for (std::size_t i = 0; i < n; ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    result.stratified = std::all_of(by_class.begin(), by_class.end(), [&](const auto& g) {
        return g.size() >= folds;
    });

    if (result.stratified) {
        for (auto& group : by_class) {
            shuffle_indices(group, rng);
            for (std::size_t i = 0; i < group.size(); ++i) fold_of[group[i]] = i % folds;
        }
    } else {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        shuffle_indices(all, rng);
        for (std::size_t i = 0; i < n; ++i) fold_of[all[i]] = i % folds;
    }

    result.fold_sizes.assign(folds, 0);
    for (std::size_t i = 0; i < n; ++i) ++result.fold_sizes[fold_of[i]];

    result.fold_accuracies.assign(folds, 0.0);
    for (std::size_t fold = 0; fold < folds; ++fold) {
        std::size_t correct = 0, total = 0;
        for (std::size_t test = 0; test < n; ++test) {
            if (fold_of[test] != fold) continue;
            double best_dist = std::numeric_limits<double>::infinity();
            std::size_t best_idx = n;
            for (std::size_t train = 0; train < n; ++train) {
                if (fold_of[train] == fold) continue;
                const double d = distance(test, train);
                if (d < best_dist) {  // ties keep the lowest train index
                    best_dist = d;
                    best_idx = train;
                }
            }
            ++total;
            if (best_idx < n && labels[best_idx] == labels[test]) ++correct;
        }
        result.fold_accuracies[fold] =
            total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
    double sum = 0.0;
    for (double a : result.fold_accuracies) sum += a;
    result.mean_accuracy = sum / static_cast<double>(folds);
    return result;
}

}  // namespace frogsel
