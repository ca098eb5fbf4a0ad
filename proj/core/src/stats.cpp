#include "frogsel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace frogsel {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Regularized lower incomplete gamma by series expansion; valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by Lentz's continued fraction; valid
// for x >= a+1.
double gamma_q_continued_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double regularized_gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("regularized_gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_continued_fraction(a, x);
}

// Average ranks of one row, rank 1 for the largest value; NaN sorts last.
std::vector<double> row_ranks(const std::vector<double>& row) {
    const std::size_t k = row.size();
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = std::isnan(row[a]) ? -std::numeric_limits<double>::infinity() : row[a];
        const double vb = std::isnan(row[b]) ? -std::numeric_limits<double>::infinity() : row[b];
        if (va != vb) return va > vb;
        return a < b;
    });
    std::vector<double> ranks(k, 0.0);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        auto value = [&](std::size_t idx) {
            const double v = row[order[idx]];
            return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
        };
        while (j + 1 < k && value(j + 1) == value(i)) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

bool row_has_missing(const std::vector<double>& row) {
    for (double v : row)
        if (std::isnan(v)) return true;
    return false;
}

FriedmanResult friedman_statistic(const std::vector<double>& avg_ranks, std::size_t n) {
    FriedmanResult out;
    out.average_ranks = avg_ranks;
    out.n_datasets = n;
    out.n_algorithms = avg_ranks.size();
    const double k = static_cast<double>(avg_ranks.size());
    const double N = static_cast<double>(n);
    double sumsq = 0.0;
    for (double r : avg_ranks) sumsq += r * r;
    out.statistic = 12.0 * N / (k * (k + 1.0)) * (sumsq - k * (k + 1.0) * (k + 1.0) / 4.0);
    if (out.statistic < 0.0) out.statistic = 0.0;  // guard rounding on constant matrices
    out.p_value = chi_square_sf(out.statistic, static_cast<unsigned>(avg_ranks.size() - 1));
    return out;
}

}  // namespace

void ScoreMatrix::validate() const {
    if (algorithms.size() < 2) throw std::invalid_argument("ScoreMatrix: need at least 2 algorithms");
    if (datasets.size() < 2) throw std::invalid_argument("ScoreMatrix: need at least 2 datasets");
    if (scores.size() != datasets.size())
        throw std::invalid_argument("ScoreMatrix: score rows do not match dataset names");
    for (const auto& row : scores)
        if (row.size() != algorithms.size())
            throw std::invalid_argument("ScoreMatrix: ragged score row");
}

double chi_square_sf(double x, unsigned df) {
    if (x < 0.0) throw std::invalid_argument("chi_square_sf: x must be nonnegative");
    if (df == 0) throw std::invalid_argument("chi_square_sf: df must be positive");
    if (x == 0.0) return 1.0;
    return regularized_gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

FriedmanResult friedman(const ScoreMatrix& matrix, MissingScorePolicy policy) {
    matrix.validate();
    const std::size_t k = matrix.algorithms.size();
    std::vector<double> rank_sums(k, 0.0);
    std::size_t used_rows = 0;

    for (std::size_t r = 0; r < matrix.scores.size(); ++r) {
        const auto& row = matrix.scores[r];
        if (row_has_missing(row)) {
            if (policy == MissingScorePolicy::Error)
                throw std::invalid_argument("friedman: missing score in dataset '" +
                                            matrix.datasets[r] +
                                            "' (choose a missing-data policy)");
            if (policy == MissingScorePolicy::DropDataset) continue;
            // WorstRank falls through: NaN ranks below every real score.
        }
        const auto ranks = row_ranks(row);
        for (std::size_t c = 0; c < k; ++c) rank_sums[c] += ranks[c];
        ++used_rows;
    }
    if (used_rows < 2) throw std::invalid_argument("friedman: fewer than 2 usable datasets");

    std::vector<double> avg(k);
    for (std::size_t c = 0; c < k; ++c) avg[c] = rank_sums[c] / static_cast<double>(used_rows);
    return friedman_statistic(avg, used_rows);
}

FriedmanResult friedman_from_ranks(std::vector<double> average_ranks, std::size_t n_datasets,
                                   bool snap_to_rank_grid) {
    if (average_ranks.size() < 2)
        throw std::invalid_argument("friedman_from_ranks: need at least 2 algorithms");
    if (n_datasets < 1) throw std::invalid_argument("friedman_from_ranks: need at least 1 dataset");
    if (snap_to_rank_grid) {
        const double grid = 2.0 * static_cast<double>(n_datasets);
        for (double& r : average_ranks) r = std::round(r * grid) / grid;
    }
    return friedman_statistic(average_ranks, n_datasets);
}

std::size_t best_rank_index(const std::vector<double>& average_ranks) {
    if (average_ranks.empty()) throw std::invalid_argument("best_rank_index: empty ranks");
    std::size_t best = 0;
    for (std::size_t i = 1; i < average_ranks.size(); ++i)
        if (average_ranks[i] < average_ranks[best]) best = i;
    return best;
}

LiResult li_posthoc(const std::vector<double>& average_ranks, std::size_t n_datasets,
                    std::size_t control, double alpha) {
    const std::size_t k = average_ranks.size();
    if (k < 2) throw std::invalid_argument("li_posthoc: need at least 2 algorithms");
    if (control >= k) throw std::invalid_argument("li_posthoc: control index out of range");
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("li_posthoc: alpha in (0,1)");

    LiResult out;
    out.control = control;
    out.alpha = alpha;
    out.se = std::sqrt(static_cast<double>(k) * static_cast<double>(k + 1) /
                       (6.0 * static_cast<double>(n_datasets)));

    for (std::size_t i = 0; i < k; ++i) {
        if (i == control) continue;
        LiComparison c;
        c.algorithm = i;
        c.z = std::fabs(average_ranks[i] - average_ranks[control]) / out.se;
        c.p = std::min(1.0, 2.0 * normal_sf(c.z));
        out.comparisons.push_back(c);
    }
    out.p_max = 0.0;
    for (const auto& c : out.comparisons) out.p_max = std::max(out.p_max, c.p);
    // Step-down rule: everything is tested at alpha while p_max <= alpha;
    // beyond that the bound tightens to alpha(1 - p_max)/(1 - alpha).
    out.threshold =
        out.p_max <= alpha ? alpha : alpha * (1.0 - out.p_max) / (1.0 - alpha);

    for (auto& c : out.comparisons) {
        // The comparison carrying the largest p is always tested at alpha.
        c.threshold = (c.p == out.p_max) ? alpha : out.threshold;
        c.rejected = c.p <= c.threshold;
    }
    std::sort(out.comparisons.begin(), out.comparisons.end(),
              [](const LiComparison& a, const LiComparison& b) {
                  if (a.z != b.z) return a.z > b.z;
                  return a.algorithm < b.algorithm;
              });
    return out;
}

ScoreMatrix load_score_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(path + ": cannot open score matrix");
    ScoreMatrix out;
    std::string line;
    bool header = true;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
            while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
            cells.push_back(cell);
        }
        return cells;
    };
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split(line);
        if (header) {
            if (cells.size() < 3)
                throw std::invalid_argument(path + ": need a label column plus at least 2 algorithms");
            out.algorithms.assign(cells.begin() + 1, cells.end());
            header = false;
            continue;
        }
        if (cells.size() != out.algorithms.size() + 1)
            throw std::invalid_argument(path + ": ragged score row '" + line + "'");
        out.datasets.push_back(cells.front());
        std::vector<double> row;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const std::string& cell = cells[c];
            if (cell.empty() || cell == "?" || cell == "-" || cell == "NA") {
                row.push_back(kNaN);
            } else {
                try {
                    row.push_back(std::stod(cell));
                } catch (const std::exception&) {
                    throw std::invalid_argument(path + ": bad score '" + cell + "'");
                }
            }
        }
        out.scores.push_back(std::move(row));
    }
    out.validate();
    return out;
}

}  // namespace frogsel
