#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frogsel/baselines.hpp"
#include "frogsel/bsfla.hpp"
#include "frogsel/dataset.hpp"
#include "frogsel/search.hpp"
#include "frogsel/stats.hpp"

namespace frogsel {

enum class Algorithm { Bsfla, QuickReduct, Ga, Pso };

Algorithm parse_algorithm(const std::string& name);
const char* to_string(Algorithm algorithm);

// Optional knobs layered over auto_params (B-SFLA) or the defaults (GA/PSO).
struct SearchOverrides {
    std::optional<std::size_t> memeplexes, frogs_per_memeplex, rounds, submemeplex, s_max;
    std::optional<std::size_t> max_shuffles, stall_shuffles;
    std::optional<std::size_t> population, generations;
    std::optional<std::size_t> particles, iterations;
};

// Builds the per-algorithm configuration and runs one cell.
ReductReport run_algorithm(FrddEvaluator& eval, Algorithm algorithm, std::uint64_t seed,
                           DistanceMode distance, const SearchOverrides& overrides = {},
                           std::size_t jobs = 1);

struct RunSpec {
    std::vector<std::string> dataset_paths;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;
    LoadOptions load;
    DistanceMode distance = DistanceMode::Hamming;
    SearchOverrides overrides;
    std::string out_dir;  // empty: keep everything in memory
    bool proxy = false;   // add the 1-NN cross-validation column
    std::size_t cv_folds = 10;
    std::size_t jobs = 1;  // worker pool over benchmark cells
};

struct CellResult {
    std::string dataset;
    std::string algorithm;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    ReductReport report;
    std::optional<double> proxy_accuracy;
};

struct BenchmarkReport {
    std::vector<CellResult> cells;  // dataset-major, then algorithm, then seed
    bool with_proxy = false;

    bool all_ok() const;
    // Deterministic summary; wall times live in timings_csv() only.
    std::string aggregate_csv() const;
    std::string timings_csv() const;
};

// Executes the dataset x algorithm x seed grid. Failures are recorded per
// cell and the remaining cells still run. With out_dir set, writes one JSON
// per cell plus summary.csv and timings.csv.
BenchmarkReport run(const RunSpec& spec);

enum class WinMetric { ProxyAccuracy, Fitness, Cardinality };

// One win per dataset for each algorithm achieving the best metric there
// (ties award everyone tied). Cells are aggregated over seeds by mean
// first. Output sorted by descending wins.
std::vector<std::pair<std::string, int>> wins_table(const BenchmarkReport& report, WinMetric metric);

// Same counting rule straight from a score matrix (higher is better; NaN
// never wins).
std::vector<std::pair<std::string, int>> wins_from_scores(const ScoreMatrix& scores);

// Writes the projected table; decision column last, stable formatting.
void export_reduced(const DecisionTable& table, const Bitmask& mask, const std::string& path,
                    TableFormat format);
std::string reduced_table_text(const DecisionTable& table, const Bitmask& mask,
                               TableFormat format);

struct OracleResult {
    double best_gamma = 0.0;
    std::size_t best_cardinality = 0;
    std::vector<Bitmask> optimal_masks;  // lexicographic order
    double full_gamma = 0.0;             // gamma' of the complete feature set
    std::uint64_t masks_evaluated = 0;

    std::string to_json(int indent = 2) const;
};

// Enumerates every non-empty subset (feature count capped at 20) and
// reports the optimal (gamma', cardinality) frontier: gammas within `tol`
// of the maximum count as ties, and the frontier keeps the smallest subsets
// among them.
OracleResult exhaustive_frontier(FrddEvaluator& eval, double tol = 1e-10);

}  // namespace frogsel
