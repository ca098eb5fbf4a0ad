#pragma once

#include <cstdint>
#include <vector>

#include "frogsel/bitmask.hpp"
#include "frogsel/dataset.hpp"

namespace frogsel {

struct KnnCvResult {
    double mean_accuracy = 0.0;
    std::vector<double> fold_accuracies;
    std::vector<std::size_t> fold_sizes;  // sums to the object count
    bool stratified = true;  // false when a class is smaller than the fold count
};

// Cross-validated 1-nearest-neighbor accuracy on the selected features.
// Features are min-max normalized inside; distance is the Euclidean norm
// over real features plus the mismatch count over nominal ones. Folds are
// stratified per class unless some class has fewer members than folds.
KnnCvResult knn_cv_accuracy(const DecisionTable& table, const Bitmask& mask,
                            std::size_t folds = 10, std::uint64_t seed = 0);

}  // namespace frogsel
