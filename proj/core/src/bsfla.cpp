#include "frogsel/bsfla.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace frogsel {

const char* to_string(DistanceMode mode) {
    return mode == DistanceMode::Hamming ? "hamming" : "posregion";
}

DistanceMode parse_distance_mode(const std::string& name) {
    if (name == "hamming") return DistanceMode::Hamming;
    if (name == "posregion") return DistanceMode::PosRegion;
    throw std::invalid_argument("unknown distance mode '" + name + "'");
}

void SearchConfig::validate(std::size_t feature_count) const {
    if (memeplexes < 2) throw std::invalid_argument("SearchConfig: need at least 2 memeplexes");
    if (frogs_per_memeplex < 3)
        throw std::invalid_argument("SearchConfig: need at least 3 frogs per memeplex");
    if (submemeplex < 2 || submemeplex > frogs_per_memeplex)
        throw std::invalid_argument("SearchConfig: submemeplex size must be in [2, n]");
    if (s_max < 1 || s_max > feature_count)
        throw std::invalid_argument("SearchConfig: s_max must be in [1, feature count]");
    if (rounds < 1) throw std::invalid_argument("SearchConfig: need at least 1 evolution round");
    if (max_shuffles < 1 || stall_shuffles < 1)
        throw std::invalid_argument("SearchConfig: shuffle limits must be positive");
}

namespace {

// ceil(c * L) where c is a short decimal; the epsilon absorbs binary
// representation error so e.g. 2.20 * 10 stays 22.
std::size_t ceil_mult(double c, std::size_t L) {
    return static_cast<std::size_t>(std::ceil(c * static_cast<double>(L) - 1e-9));
}

}  // namespace

SearchConfig auto_params(std::size_t objects, std::size_t features) {
    if (objects < 1 || features < 1) throw std::invalid_argument("auto_params: empty table");
    SearchConfig cfg;
    const double cells = static_cast<double>(objects) * static_cast<double>(features);
    if (cells <= 15000.0) {
        cfg.memeplexes = ceil_mult(2.20, features);
        cfg.frogs_per_memeplex = ceil_mult(0.70, features);
        cfg.rounds = ceil_mult(0.50, features);
        cfg.submemeplex = ceil_mult(0.45, features);
        cfg.s_max = ceil_mult(0.50, features);
    } else {
        cfg.memeplexes = 30;
        cfg.frogs_per_memeplex = 30;
        cfg.rounds = 5;
        cfg.submemeplex = 15;
        cfg.s_max = ceil_mult(0.45, features);
    }
    cfg.memeplexes = std::max<std::size_t>(cfg.memeplexes, 2);
    cfg.frogs_per_memeplex = std::max<std::size_t>(cfg.frogs_per_memeplex, 3);
    cfg.rounds = std::max<std::size_t>(cfg.rounds, 1);
    cfg.s_max = std::clamp<std::size_t>(cfg.s_max, 1, features);
    cfg.submemeplex = std::clamp<std::size_t>(cfg.submemeplex, 2, cfg.frogs_per_memeplex);
    return cfg;
}

std::size_t frog_distance(const Bitmask& a, const Bitmask& b, DistanceMode mode) {
    return mode == DistanceMode::Hamming ? a.hamming(b) : pos_dissimilarity(a, b);
}

std::size_t step_size(std::size_t dist, std::size_t s_max, RandomSource& rng) {
    const auto raw = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(dist));
    return std::min(raw, s_max);
}

Bitmask leap(const Bitmask& worst, const Bitmask& target, std::size_t steps, RandomSource& rng) {
    if (worst.size() != target.size()) throw std::invalid_argument("leap: frog length mismatch");
    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < worst.size(); ++i)
        if (worst.test(i) != target.test(i)) diff.push_back(i);

    const std::size_t moves = std::min(steps, diff.size());
    if (moves == 0) return worst;

    std::vector<double> thresholds(moves);
    for (auto& t : thresholds) t = rng.uniform01();

    if (moves < diff.size()) {
        // Partial Fisher-Yates picks which differing bits may move.
        for (std::size_t j = 0; j < moves; ++j) {
            const std::size_t pick = j + uniform_index(rng, diff.size() - j);
            std::swap(diff[j], diff[pick]);
        }
        diff.resize(moves);
    }

    Bitmask out = worst;
    for (std::size_t j = 0; j < moves; ++j) {
        const double pos_draw = rng.uniform01();
        if (thresholds[j] > pos_draw) out.set(diff[j], target.test(diff[j]));
    }
    return out;
}

std::vector<std::vector<Frog>> partition(const std::vector<Frog>& ranked, std::size_t m,
                                         std::size_t n) {
    if (ranked.size() != m * n)
        throw std::invalid_argument("partition: population size is not m * n");
    std::vector<std::vector<Frog>> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        out[k].reserve(n);
        for (std::size_t j = 0; j < n; ++j) out[k].push_back(ranked[k + m * j]);
    }
    return out;
}

std::vector<std::size_t> sample_submemeplex(std::size_t n, std::size_t q, RandomSource& rng) {
    if (q > n) throw std::invalid_argument("sample_submemeplex: q exceeds memeplex size");
    std::vector<std::size_t> avail(n);
    std::vector<double> weight(n);
    for (std::size_t j = 0; j < n; ++j) {
        avail[j] = j;
        weight[j] = submemeplex_weight(n, j);
    }
    std::vector<std::size_t> chosen;
    chosen.reserve(q);
    for (std::size_t pick = 0; pick < q; ++pick) {
        double total = 0.0;
        for (std::size_t j = 0; j < avail.size(); ++j) total += weight[j];
        const double u = rng.uniform01() * total;
        double acc = 0.0;
        std::size_t sel = avail.size() - 1;
        for (std::size_t j = 0; j < avail.size(); ++j) {
            acc += weight[j];
            if (u < acc) {
                sel = j;
                break;
            }
        }
        chosen.push_back(avail[sel]);
        avail.erase(avail.begin() + static_cast<std::ptrdiff_t>(sel));
        weight.erase(weight.begin() + static_cast<std::ptrdiff_t>(sel));
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

Bitmask random_feasible_mask(std::size_t bits, RandomSource& rng) {
    Bitmask m(bits);
    do {
        for (std::size_t i = 0; i < bits; ++i) m.set(i, rng.uniform01() < 0.5);
    } while (m.none());
    return m;
}

void evolve_memeplex(std::vector<Frog>& memeplex, const EvolveParams& params, FrddEvaluator& eval,
                     const Frog& global_best, RandomSource& rng) {
    const std::size_t n = memeplex.size();
    if (n == 0) return;
    const std::size_t q = std::min(params.submemeplex, n);

    for (std::size_t round = 0; round < params.rounds; ++round) {
        const auto z = sample_submemeplex(n, q, rng);
        Frog& worst = memeplex[z.back()];
        const Frog& sub_best = memeplex[z.front()];

        auto attempt = [&](const Frog& target) {
            const std::size_t dist = frog_distance(target.mask, worst.mask, params.distance);
            const std::size_t s = step_size(dist, params.s_max, rng);
            Bitmask cand = leap(worst.mask, target.mask, s, rng);
            if (cand.none() || cand == worst.mask) return false;
            const double g = eval.gamma(cand);
            const std::size_t card = cand.count();
            if (!pair_better(g, card, worst.fitness, worst.cardinality)) return false;
            worst.mask = std::move(cand);
            worst.fitness = g;
            worst.cardinality = card;
            return true;
        };

        if (!attempt(sub_best) && !attempt(global_best)) {
            // Censorship: the stuck frog is replaced unconditionally.
            worst = Frog::evaluated(random_feasible_mask(worst.mask.size(), rng), eval);
        }
        std::sort(memeplex.begin(), memeplex.end(), frog_rank_less);
    }
}

ReductReport bsfla_search(FrddEvaluator& eval, const SearchConfig& config, std::size_t jobs,
                          SearchObserver* observer) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t L = eval.table().feature_count();
    config.validate(L);
    const std::uint64_t evals_before = eval.evaluations();

    SeededRng init_rng(derive_stream_seed(config.rng_seed, 0, 0));
    std::vector<Frog> population;
    population.reserve(config.total_frogs());
    for (std::size_t i = 0; i < config.total_frogs(); ++i)
        population.push_back(Frog::evaluated(random_feasible_mask(L, init_rng), eval));
    rank(population);

    ReductReport report;
    report.algorithm = "bsfla";
    report.trace.push_back({population.front().fitness, population.front().cardinality});
    if (observer) observer->on_shuffle(0, population);

    const EvolveParams params{config.submemeplex, config.rounds, config.s_max, config.distance};
    std::size_t stall = 0;
    std::string stop_reason = "max_shuffles";

    for (std::size_t shuffle = 1; shuffle <= config.max_shuffles; ++shuffle) {
        auto memeplexes = partition(population, config.memeplexes, config.frogs_per_memeplex);
        const Frog global_best = population.front();  // fixed P_X for this round

        auto evolve_one = [&](std::size_t k) {
            SeededRng rng(derive_stream_seed(config.rng_seed, shuffle, k + 1));
            evolve_memeplex(memeplexes[k], params, eval, global_best, rng);
        };
        if (jobs <= 1 || config.memeplexes < 2) {
            for (std::size_t k = 0; k < config.memeplexes; ++k) evolve_one(k);
        } else {
            std::atomic<std::size_t> next{0};
            const std::size_t workers = std::min(jobs, config.memeplexes);
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t k = next.fetch_add(1); k < config.memeplexes;
                         k = next.fetch_add(1))
                        evolve_one(k);
                });
            for (auto& t : pool) t.join();
        }

        population.clear();
        for (auto& mem : memeplexes)
            for (auto& f : mem) population.push_back(std::move(f));
        rank(population);

        report.trace.push_back({population.front().fitness, population.front().cardinality});
        if (observer) observer->on_shuffle(shuffle, population);

        const auto& cur = report.trace.back();
        const auto& prev = report.trace[report.trace.size() - 2];
        stall = (cur == prev) ? stall + 1 : 0;
        if (stall >= config.stall_shuffles) {
            stop_reason = "stalled";
            break;
        }
    }

    collect_best_tied(population, L, report);
    report.evaluations = eval.evaluations() - evals_before;
    report.stop_reason = stop_reason;
    report.config_echo = {
        {"m", std::to_string(config.memeplexes)},
        {"n", std::to_string(config.frogs_per_memeplex)},
        {"rounds", std::to_string(config.rounds)},
        {"q", std::to_string(config.submemeplex)},
        {"s_max", std::to_string(config.s_max)},
        {"distance", to_string(config.distance)},
        {"max_shuffles", std::to_string(config.max_shuffles)},
        {"stall_shuffles", std::to_string(config.stall_shuffles)},
        {"seed", std::to_string(config.rng_seed)},
        {"rng", kRngAlgorithm},
        {"sigma_mode", to_string(eval.table().sigma_mode())},
        {"normalized", eval.table().normalized() ? "true" : "false"},
    };
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace frogsel
