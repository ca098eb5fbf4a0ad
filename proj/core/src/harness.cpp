#include "frogsel/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "frogsel/knn.hpp"

namespace frogsel {

Algorithm parse_algorithm(const std::string& name) {
    if (name == "bsfla") return Algorithm::Bsfla;
    if (name == "quickreduct") return Algorithm::QuickReduct;
    if (name == "ga") return Algorithm::Ga;
    if (name == "pso") return Algorithm::Pso;
    throw std::invalid_argument("unknown algorithm '" + name +
                                "' (expected bsfla, quickreduct, ga, or pso)");
}

const char* to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Bsfla: return "bsfla";
        case Algorithm::QuickReduct: return "quickreduct";
        case Algorithm::Ga: return "ga";
        case Algorithm::Pso: return "pso";
    }
    return "?";
}

ReductReport run_algorithm(FrddEvaluator& eval, Algorithm algorithm, std::uint64_t seed,
                           DistanceMode distance, const SearchOverrides& o, std::size_t jobs) {
    const auto& table = eval.table();
    switch (algorithm) {
        case Algorithm::Bsfla: {
            SearchConfig cfg = auto_params(table.objects(), table.feature_count());
            if (o.memeplexes) cfg.memeplexes = *o.memeplexes;
            if (o.frogs_per_memeplex) cfg.frogs_per_memeplex = *o.frogs_per_memeplex;
            if (o.rounds) cfg.rounds = *o.rounds;
            if (o.submemeplex) cfg.submemeplex = *o.submemeplex;
            if (o.s_max) cfg.s_max = *o.s_max;
            if (o.max_shuffles) cfg.max_shuffles = *o.max_shuffles;
            if (o.stall_shuffles) cfg.stall_shuffles = *o.stall_shuffles;
            cfg.distance = distance;
            cfg.rng_seed = seed;
            return bsfla_search(eval, cfg, jobs);
        }
        case Algorithm::QuickReduct:
            return quickreduct(eval);
        case Algorithm::Ga: {
            GaConfig cfg;
            if (o.population) cfg.population = *o.population;
            if (o.generations) cfg.generations = *o.generations;
            cfg.rng_seed = seed;
            return ga_search(eval, cfg);
        }
        case Algorithm::Pso: {
            PsoConfig cfg;
            if (o.particles) cfg.particles = *o.particles;
            if (o.iterations) cfg.iterations = *o.iterations;
            cfg.rng_seed = seed;
            return pso_search(eval, cfg);
        }
    }
    throw std::logic_error("run_algorithm: unreachable");
}

bool BenchmarkReport::all_ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

std::string BenchmarkReport::aggregate_csv() const {
    std::ostringstream out;
    out << "dataset,algorithm,seed,status,best_fitness,best_cardinality,num_reducts,evaluations,"
           "stop_reason";
    if (with_proxy) out << ",proxy_accuracy";
    out << "\n";
    for (const auto& c : cells) {
        out << c.dataset << ',' << c.algorithm << ',' << c.seed << ',';
        if (!c.ok) {
            out << "error,,,,," << '"' << c.error << '"';
            if (with_proxy) out << ',';
            out << "\n";
            continue;
        }
        out << "ok," << format_double(c.report.best_fitness) << ',' << c.report.best_cardinality
            << ',' << c.report.reducts.size() << ',' << c.report.evaluations << ','
            << c.report.stop_reason;
        if (with_proxy) {
            out << ',';
            if (c.proxy_accuracy) out << format_double(*c.proxy_accuracy);
        }
        out << "\n";
    }
    return out.str();
}

std::string BenchmarkReport::timings_csv() const {
    std::ostringstream out;
    out << "dataset,algorithm,seed,wall_time_ms\n";
    for (const auto& c : cells)
        out << c.dataset << ',' << c.algorithm << ',' << c.seed << ','
            << format_double(c.report.wall_time_ms) << "\n";
    return out.str();
}

BenchmarkReport run(const RunSpec& spec) {
    if (spec.dataset_paths.empty() || spec.algorithms.empty() || spec.seeds.empty())
        throw std::invalid_argument("run: need at least one dataset, algorithm, and seed");

    struct LoadedTable {
        std::unique_ptr<DecisionTable> table;
        std::unique_ptr<FrddEvaluator> evaluator;  // shares precomputed similarities
    };
    std::vector<LoadedTable> tables;
    tables.reserve(spec.dataset_paths.size());
    for (const auto& path : spec.dataset_paths) {
        LoadedTable loaded;
        loaded.table =
            std::make_unique<DecisionTable>(load_table(path, infer_format(path), spec.load));
        loaded.evaluator = std::make_unique<FrddEvaluator>(*loaded.table);
        tables.push_back(std::move(loaded));
    }

    BenchmarkReport report;
    report.with_proxy = spec.proxy;
    for (const auto& loaded : tables)
        for (const auto algorithm : spec.algorithms)
            for (const auto seed : spec.seeds) {
                CellResult cell;
                cell.dataset = loaded.table->name();
                cell.algorithm = to_string(algorithm);
                cell.seed = seed;
                report.cells.push_back(std::move(cell));
            }

    const std::size_t per_table = spec.algorithms.size() * spec.seeds.size();
    auto run_cell = [&](std::size_t index) {
        CellResult& cell = report.cells[index];
        const LoadedTable& loaded = tables[index / per_table];
        try {
            FrddEvaluator eval = loaded.evaluator->fresh_clone();
            const Algorithm algorithm = spec.algorithms[(index % per_table) / spec.seeds.size()];
            cell.report = run_algorithm(eval, algorithm, cell.seed, spec.distance, spec.overrides);
            if (spec.proxy && !cell.report.reducts.empty())
                cell.proxy_accuracy =
                    knn_cv_accuracy(*loaded.table, cell.report.reducts.front(), spec.cv_folds,
                                    cell.seed)
                        .mean_accuracy;
            cell.ok = true;
        } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
        }
    };

    if (spec.jobs <= 1) {
        for (std::size_t i = 0; i < report.cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        const std::size_t workers = std::min(spec.jobs, report.cells.size());
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < report.cells.size();
                     i = next.fetch_add(1))
                    run_cell(i);
            });
        for (auto& t : pool) t.join();
    }

    if (!spec.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(spec.out_dir);
        for (std::size_t i = 0; i < report.cells.size(); ++i) {
            const auto& c = report.cells[i];
            std::ostringstream name;
            name << "cell_" << i << '_' << c.dataset << '_' << c.algorithm << "_seed" << c.seed
                 << ".json";
            std::ofstream out(fs::path(spec.out_dir) / name.str());
            if (c.ok) {
                out << c.report.to_json() << "\n";
            } else {
                nlohmann::json j;
                j["error"] = c.error;
                out << j.dump(2) << "\n";
            }
        }
        std::ofstream(fs::path(spec.out_dir) / "summary.csv") << report.aggregate_csv();
        std::ofstream(fs::path(spec.out_dir) / "timings.csv") << report.timings_csv();
    }
    return report;
}

namespace {

std::vector<std::pair<std::string, int>> count_wins(const std::vector<std::string>& algorithms,
                                                    const std::vector<std::vector<double>>& rows) {
    std::map<std::string, int> wins;
    for (const auto& a : algorithms) wins[a] = 0;
    for (const auto& row : rows) {
        double best = -std::numeric_limits<double>::infinity();
        for (double v : row)
            if (!std::isnan(v)) best = std::max(best, v);
        if (!std::isfinite(best)) continue;
        for (std::size_t c = 0; c < row.size(); ++c)
            if (!std::isnan(row[c]) && row[c] == best) ++wins[algorithms[c]];
    }
    std::vector<std::pair<std::string, int>> out(wins.begin(), wins.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return out;
}

}  // namespace

std::vector<std::pair<std::string, int>> wins_table(const BenchmarkReport& report,
                                                    WinMetric metric) {
    // dataset -> algorithm -> seed means
    std::vector<std::string> datasets, algorithms;
    for (const auto& c : report.cells) {
        if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end())
            datasets.push_back(c.dataset);
        if (std::find(algorithms.begin(), algorithms.end(), c.algorithm) == algorithms.end())
            algorithms.push_back(c.algorithm);
    }
    std::vector<std::vector<double>> sums(datasets.size(),
                                          std::vector<double>(algorithms.size(), 0.0));
    std::vector<std::vector<std::size_t>> counts(datasets.size(),
                                                 std::vector<std::size_t>(algorithms.size(), 0));
    for (const auto& c : report.cells) {
        if (!c.ok) throw std::invalid_argument("wins_table: failed cell for " + c.dataset);
        const auto d = static_cast<std::size_t>(
            std::find(datasets.begin(), datasets.end(), c.dataset) - datasets.begin());
        const auto a = static_cast<std::size_t>(
            std::find(algorithms.begin(), algorithms.end(), c.algorithm) - algorithms.begin());
        double value = 0.0;
        switch (metric) {
            case WinMetric::ProxyAccuracy:
                if (!c.proxy_accuracy)
                    throw std::invalid_argument("wins_table: proxy accuracy missing for " +
                                                c.dataset + "/" + c.algorithm);
                value = *c.proxy_accuracy;
                break;
            case WinMetric::Fitness: value = c.report.best_fitness; break;
            case WinMetric::Cardinality:
                value = -static_cast<double>(c.report.best_cardinality);  // fewer is better
                break;
        }
        sums[d][a] += value;
        ++counts[d][a];
    }
    for (std::size_t d = 0; d < datasets.size(); ++d)
        for (std::size_t a = 0; a < algorithms.size(); ++a)
            sums[d][a] = counts[d][a] ? sums[d][a] / static_cast<double>(counts[d][a])
                                      : std::numeric_limits<double>::quiet_NaN();
    return count_wins(algorithms, sums);
}

std::vector<std::pair<std::string, int>> wins_from_scores(const ScoreMatrix& scores) {
    scores.validate();
    return count_wins(scores.algorithms, scores.scores);
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_cell(const FeatureColumn& col, std::size_t row) {
    if (col.kind == FeatureKind::Real) return format_double(col.reals[row]);
    return col.symbols[static_cast<std::size_t>(col.codes[row])];
}

std::string arff_quote(const std::string& s) {
    if (!s.empty() && s.find_first_of(" ,{}'\"%") == std::string::npos) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += '\\';
        out += c;
    }
    out += '\'';
    return out;
}

}  // namespace

std::string reduced_table_text(const DecisionTable& table, const Bitmask& mask,
                               TableFormat format) {
    const DecisionTable view = project(table, mask);
    std::ostringstream out;
    if (format == TableFormat::Csv) {
        for (const auto& col : view.features()) out << csv_escape(col.name) << ',';
        out << csv_escape(view.decision().name) << "\n";
        for (std::size_t r = 0; r < view.objects(); ++r) {
            for (const auto& col : view.features()) out << csv_escape(format_cell(col, r)) << ',';
            out << csv_escape(
                       view.decision().classes[static_cast<std::size_t>(view.decision().labels[r])])
                << "\n";
        }
    } else {
        out << "@relation " << arff_quote(view.name()) << "\n\n";
        for (const auto& col : view.features()) {
            out << "@attribute " << arff_quote(col.name) << ' ';
            if (col.kind == FeatureKind::Real) {
                out << "numeric\n";
            } else {
                out << '{';
                for (std::size_t s = 0; s < col.symbols.size(); ++s) {
                    if (s) out << ',';
                    out << arff_quote(col.symbols[s]);
                }
                out << "}\n";
            }
        }
        out << "@attribute " << arff_quote(view.decision().name) << " {";
        for (std::size_t s = 0; s < view.decision().classes.size(); ++s) {
            if (s) out << ',';
            out << arff_quote(view.decision().classes[s]);
        }
        out << "}\n\n@data\n";
        for (std::size_t r = 0; r < view.objects(); ++r) {
            for (const auto& col : view.features()) out << format_cell(col, r) << ',';
            out << view.decision().classes[static_cast<std::size_t>(view.decision().labels[r])]
                << "\n";
        }
    }
    return out.str();
}

void export_reduced(const DecisionTable& table, const Bitmask& mask, const std::string& path,
                    TableFormat format) {
    const std::string text = reduced_table_text(table, mask, format);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw TableError(path + ": cannot open for writing");
    out << text;
    if (!out) throw TableError(path + ": write failed");
}

std::string OracleResult::to_json(int indent) const {
    nlohmann::json j;
    j["best_gamma"] = best_gamma;
    j["best_cardinality"] = best_cardinality;
    nlohmann::json masks = nlohmann::json::array();
    for (const auto& m : optimal_masks) masks.push_back(m.to_string());
    j["optimal_masks"] = std::move(masks);
    j["full_gamma"] = full_gamma;
    j["masks_evaluated"] = masks_evaluated;
    return j.dump(indent);
}

OracleResult exhaustive_frontier(FrddEvaluator& eval, double tol) {
    const std::size_t L = eval.table().feature_count();
    if (L > 20) throw std::invalid_argument("exhaustive_frontier: feature count capped at 20");
    const std::uint64_t total = (std::uint64_t{1} << L) - 1;

    std::vector<double> gamma(total + 1, 0.0);
    double best = -1.0;
    for (std::uint64_t bits = 1; bits <= total; ++bits) {
        Bitmask mask(L);
        for (std::size_t i = 0; i < L; ++i)
            if ((bits >> i) & 1u) mask.set(i);
        gamma[bits] = eval.full(mask).gamma_prime;
        best = std::max(best, gamma[bits]);
    }

    OracleResult out;
    out.best_gamma = best;
    out.full_gamma = gamma[total];
    out.masks_evaluated = total;

    std::size_t min_card = L + 1;
    for (std::uint64_t bits = 1; bits <= total; ++bits) {
        if (gamma[bits] < best - tol) continue;
        const auto card = static_cast<std::size_t>(std::popcount(bits));
        min_card = std::min(min_card, card);
    }
    out.best_cardinality = min_card;
    for (std::uint64_t bits = 1; bits <= total; ++bits) {
        if (gamma[bits] < best - tol) continue;
        if (static_cast<std::size_t>(std::popcount(bits)) != min_card) continue;
        Bitmask mask(L);
        for (std::size_t i = 0; i < L; ++i)
            if ((bits >> i) & 1u) mask.set(i);
        out.optimal_masks.push_back(std::move(mask));
    }
    std::sort(out.optimal_masks.begin(), out.optimal_masks.end(),
              [](const Bitmask& a, const Bitmask& b) { return a.lex_less(b); });
    return out;
}

}  // namespace frogsel
