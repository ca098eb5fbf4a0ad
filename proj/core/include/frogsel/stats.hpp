#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace frogsel {

// Scores per (dataset row, algorithm column); higher is better. NaN marks a
// missing cell.
struct ScoreMatrix {
    std::vector<std::string> algorithms;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> scores;

    void validate() const;  // throws on ragged or undersized matrices
};

enum class MissingScorePolicy { Error, DropDataset, WorstRank };

struct FriedmanResult {
    std::vector<double> average_ranks;  // rank 1 = best
    double statistic = 0.0;             // chi-square with k-1 df
    double p_value = 1.0;
    std::size_t n_datasets = 0;  // N
    std::size_t n_algorithms = 0;  // k
};

struct LiComparison {
    std::size_t algorithm = 0;  // column index of the compared algorithm
    double z = 0.0;
    double p = 0.0;          // two-sided normal tail
    double threshold = 0.0;  // alpha for the largest p, the Li bound otherwise
    bool rejected = false;
};

struct LiResult {
    std::size_t control = 0;
    double se = 0.0;
    double p_max = 0.0;
    // alpha while p_max <= alpha, then alpha * (1 - p_max) / (1 - alpha).
    double threshold = 0.0;
    double alpha = 0.05;
    std::vector<LiComparison> comparisons;  // non-control columns, z descending
};

// Upper tail of the chi-square distribution via the regularized incomplete
// gamma function Q(df/2, x/2).
double chi_square_sf(double x, unsigned df);

// 1 - Phi(z).
double normal_sf(double z);

// Average ranks per algorithm (ties averaged within a dataset), the
// Friedman statistic, and its chi-square p-value.
FriedmanResult friedman(const ScoreMatrix& matrix,
                        MissingScorePolicy policy = MissingScorePolicy::Error);

// Rank-injection entry point: runs the test from already-averaged ranks.
// Published rank tables are usually rounded to a few decimals, so by
// default each rank is snapped to the nearest multiple of 1/(2N) - the grid
// average ranks actually live on under the tie-averaging scheme.
FriedmanResult friedman_from_ranks(std::vector<double> average_ranks, std::size_t n_datasets,
                                   bool snap_to_rank_grid = true);

// Li's step-down comparison of every algorithm against the control (the
// one with the lowest average rank unless specified): z = |R_i - R_0| / SE
// with SE = sqrt(k(k+1)/(6N)); the largest p is tested at alpha, the rest
// against alpha(1 - p_max)/(1 - alpha).
LiResult li_posthoc(const std::vector<double>& average_ranks, std::size_t n_datasets,
                    std::size_t control, double alpha = 0.05);

// Convenience: control = argmin average rank.
std::size_t best_rank_index(const std::vector<double>& average_ranks);

// Reads a score matrix from CSV: header of algorithm names (first cell is a
// row label), one dataset per row. Empty cells and "?", "-", "NA" are
// missing.
ScoreMatrix load_score_matrix(const std::string& path);

}  // namespace frogsel
