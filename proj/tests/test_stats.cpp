#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "frogsel/rng.hpp"
#include "frogsel/stats.hpp"

using namespace frogsel;

namespace {

const std::vector<double> kReferenceRanks{2.7727, 3.1818, 3.4091, 3.5000, 2.1364};
constexpr std::size_t kReferenceN = 22;

// Closed form for even degrees of freedom: exp(-x/2) * sum (x/2)^j / j!
double even_df_sf(double x, unsigned df) {
    const double h = x / 2.0;
    double term = 1.0, sum = 1.0;
    for (unsigned j = 1; j < df / 2; ++j) {
        term *= h / j;
        sum += term;
    }
    return std::exp(-h) * sum;
}

ScoreMatrix small_matrix(std::vector<std::vector<double>> scores) {
    ScoreMatrix m;
    m.scores = std::move(scores);
    for (std::size_t c = 0; c < m.scores.front().size(); ++c)
        m.algorithms.push_back("a" + std::to_string(c));
    for (std::size_t r = 0; r < m.scores.size(); ++r)
        m.datasets.push_back("d" + std::to_string(r));
    return m;
}

}  // namespace

TEST_CASE("chi_square_sf basics and reference value") {
    CHECK(chi_square_sf(0.0, 4) == 1.0);
    CHECK(chi_square_sf(2.0 * std::log(2.0), 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chi_square_sf(10.981818, 4) == doctest::Approx(0.026769).epsilon(2e-4));
    CHECK_THROWS(chi_square_sf(-1.0, 2));
    CHECK_THROWS(chi_square_sf(1.0, 0));
}

TEST_CASE("chi_square_sf matches the even-df closed form to 1e-12") {
    for (unsigned df : {2u, 4u, 6u, 10u, 20u, 30u})
        for (double x : {0.01, 0.5, 1.0, 3.0, 7.5, 12.0, 31.0, 60.0, 120.0, 200.0})
            CHECK(chi_square_sf(x, df) == doctest::Approx(even_df_sf(x, df)).epsilon(1e-12));
}

TEST_CASE("normal_sf") {
    CHECK(normal_sf(0.0) == 0.5);
    CHECK(normal_sf(-40.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(2.0 * normal_sf(2.860388) == doctest::Approx(0.004231).epsilon(2e-4));
    for (double z : {-3.0, -1.0, 0.3, 2.5})
        CHECK(normal_sf(z) + normal_sf(-z) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("friedman from injected ranks reproduces the reference analysis") {
    const FriedmanResult fr = friedman_from_ranks(kReferenceRanks, kReferenceN);
    CHECK(fr.statistic == doctest::Approx(10.981818).epsilon(1e-6));
    CHECK(std::fabs(fr.statistic - 10.981818) <= 1e-4);
    CHECK(std::fabs(fr.p_value - 0.026769) <= 1e-4);
    CHECK(fr.n_algorithms == 5);

    // snapping restores the exact rational ranks (multiples of 1/44)
    CHECK(fr.average_ranks[0] == doctest::Approx(61.0 / 22.0).epsilon(1e-12));
    CHECK(fr.average_ranks[4] == doctest::Approx(47.0 / 22.0).epsilon(1e-12));

    // without snapping the rounded inputs land close but not exact
    const FriedmanResult raw = friedman_from_ranks(kReferenceRanks, kReferenceN, false);
    CHECK(std::fabs(raw.statistic - 10.981818) < 1e-2);
}

TEST_CASE("friedman formula instantiations") {
    // one algorithm always better over 4 datasets
    const auto m = small_matrix({{2.0, 1.0}, {4.0, 3.0}, {6.0, 5.0}, {8.0, 7.0}});
    const FriedmanResult fr = friedman(m);
    CHECK(fr.average_ranks == std::vector<double>{1.0, 2.0});
    CHECK(fr.statistic == doctest::Approx(4.0).epsilon(1e-12));

    // all scores equal: every rank is (k+1)/2 and the statistic vanishes
    const auto flat = small_matrix({{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}});
    const FriedmanResult fr2 = friedman(flat);
    for (double r : fr2.average_ranks) CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fr2.statistic == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fr2.p_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank sums are conserved, ties included") {
    SeededRng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<double>> scores(3 + trial % 4,
                                                std::vector<double>(2 + trial % 5, 0.0));
        for (auto& row : scores)
            for (auto& v : row) v = std::floor(rng.uniform01() * 4.0);  // frequent ties
        const auto m = small_matrix(std::move(scores));
        const FriedmanResult fr = friedman(m);
        double sum = 0.0;
        for (double r : fr.average_ranks) sum += r;
        const double k = static_cast<double>(fr.n_algorithms);
        CHECK(sum == doctest::Approx(k * (k + 1.0) / 2.0).epsilon(1e-9));
    }
}

TEST_CASE("friedman is invariant under per-dataset monotone transforms") {
    SeededRng rng(8);
    std::vector<std::vector<double>> scores(6, std::vector<double>(4, 0.0));
    for (auto& row : scores)
        for (auto& v : row) v = rng.uniform01();
    const FriedmanResult base = friedman(small_matrix(scores));

    auto transformed = scores;
    for (std::size_t r = 0; r < transformed.size(); ++r)
        for (auto& v : transformed[r])
            v = (r % 2 == 0) ? std::exp(3.0 * v) : 2.0 * v - 5.0;
    const FriedmanResult after = friedman(small_matrix(transformed));
    CHECK(base.average_ranks == after.average_ranks);
    CHECK(base.statistic == after.statistic);
    CHECK(base.p_value == after.p_value);
}

TEST_CASE("li post-hoc reproduces the reference comparison") {
    const std::size_t control = best_rank_index(kReferenceRanks);
    CHECK(control == 4);
    const auto snapped = friedman_from_ranks(kReferenceRanks, kReferenceN).average_ranks;
    const LiResult li = li_posthoc(snapped, kReferenceN, control);

    REQUIRE(li.comparisons.size() == 4);
    // descending z: GBFS (index 3), PSO (2), GA (1), L-FRFS (0)
    CHECK(li.comparisons[0].algorithm == 3);
    CHECK(std::fabs(li.comparisons[0].z - 2.860388) <= 1e-4);
    CHECK(std::fabs(li.comparisons[0].p - 0.004231) <= 1e-4);
    CHECK(li.comparisons[1].algorithm == 2);
    CHECK(std::fabs(li.comparisons[1].z - 2.669695) <= 1e-4);
    CHECK(std::fabs(li.comparisons[1].p - 0.007592) <= 1e-4);
    CHECK(li.comparisons[2].algorithm == 1);
    CHECK(std::fabs(li.comparisons[2].z - 2.192964) <= 1e-4);
    CHECK(std::fabs(li.comparisons[2].p - 0.02831) <= 1e-4);
    CHECK(li.comparisons[3].algorithm == 0);
    CHECK(std::fabs(li.comparisons[3].z - 1.334848) <= 1e-4);
    CHECK(std::fabs(li.comparisons[3].p - 0.181926) <= 1e-4);

    CHECK(std::fabs(li.threshold - 0.043057) <= 1e-5);
    CHECK(li.comparisons[3].threshold == 0.05);  // the largest p is tested at alpha
    CHECK(li.comparisons[0].rejected);
    CHECK(li.comparisons[1].rejected);
    CHECK(li.comparisons[2].rejected);
    CHECK_FALSE(li.comparisons[3].rejected);
}

TEST_CASE("li post-hoc formula instantiation for k=2") {
    const LiResult li = li_posthoc({1.0, 2.0}, 100, 0);
    REQUIRE(li.comparisons.size() == 1);
    CHECK(li.comparisons[0].z == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(li.comparisons[0].p <= 1e-20);
    CHECK(li.comparisons[0].rejected);
}

TEST_CASE("li threshold limits") {
    // p_max == 0: the threshold reduces to alpha
    const LiResult wide = li_posthoc({1.0, 100.0}, 20, 0);
    CHECK(wide.p_max == 0.0);
    CHECK(wide.threshold == doctest::Approx(0.05).epsilon(1e-12));

    // p_max -> 1: the threshold collapses to 0
    const LiResult tied = li_posthoc({2.0, 2.0}, 20, 0);
    CHECK(tied.p_max == 1.0);
    CHECK(tied.threshold == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(tied.comparisons[0].rejected);
}

TEST_CASE("missing score policies") {
    auto m = small_matrix({{1.0, 2.0, 3.0}, {3.0, 2.0, 1.0}, {1.0, 3.0, 2.0}});
    m.scores[1][2] = std::numeric_limits<double>::quiet_NaN();

    CHECK_THROWS(friedman(m, MissingScorePolicy::Error));

    const FriedmanResult dropped = friedman(m, MissingScorePolicy::DropDataset);
    CHECK(dropped.n_datasets == 2);

    const FriedmanResult worst = friedman(m, MissingScorePolicy::WorstRank);
    CHECK(worst.n_datasets == 3);
    // the missing cell took rank 3 in its dataset
    CHECK(worst.average_ranks[2] == doctest::Approx((1.0 + 3.0 + 2.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("score matrix loading") {
    const auto path = std::filesystem::temp_directory_path() / "scores.csv";
    std::ofstream(path) << "dataset,alpha,beta,gamma\n"
                           "d1,0.9,0.8,0.7\n"
                           "d2,0.5,-,0.6\n";
    const ScoreMatrix m = load_score_matrix(path.string());
    CHECK(m.algorithms == std::vector<std::string>{"alpha", "beta", "gamma"});
    CHECK(m.datasets == std::vector<std::string>{"d1", "d2"});
    CHECK(m.scores[0][1] == 0.8);
    CHECK(std::isnan(m.scores[1][1]));

    std::ofstream(path) << "dataset,only\nd1,1\nd2,2\n";
    CHECK_THROWS(load_score_matrix(path.string()));
}
