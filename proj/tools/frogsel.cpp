#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frogsel/harness.hpp"
#include "frogsel/knn.hpp"

namespace {

using frogsel::Algorithm;
using frogsel::Bitmask;
using frogsel::DecisionTable;
using frogsel::DistanceMode;
using frogsel::FrddEvaluator;
using frogsel::LoadOptions;
using frogsel::TableFormat;

struct GlobalOpts {
    LoadOptions load;
    DistanceMode distance = DistanceMode::Hamming;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string format = "json";
};

void add_load_flags(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--class", g.load.class_column,
                    "Decision column (name or 0-based index; default: last, or the ARFF "
                    "attribute named 'class')");
    cmd->add_option("--sigma", [&g](const std::vector<std::string>& v) {
            if (v[0] == "variance") g.load.sigma_mode = frogsel::SigmaMode::Variance;
            else if (v[0] == "stddev") g.load.sigma_mode = frogsel::SigmaMode::StdDev;
            else return false;
            return true;
        }, "Spread statistic for the similarity ramp: variance (default) or stddev")
        ->type_name("MODE");
    cmd->add_option("--normalize", [&g](const std::vector<std::string>& v) {
            if (v[0] == "on") g.load.normalize = true;
            else if (v[0] == "off") g.load.normalize = false;
            else return false;
            return true;
        }, "Min-max scale real columns to [0,1] at load: on (default) or off")
        ->type_name("on|off");
    cmd->add_option("--missing", [&g](const std::vector<std::string>& v) {
            if (v[0] == "reject") g.load.missing = frogsel::MissingPolicy::Reject;
            else if (v[0] == "impute") g.load.missing = frogsel::MissingPolicy::Impute;
            else return false;
            return true;
        }, "Missing-value policy: reject (default) or impute")
        ->type_name("POLICY");
    cmd->add_flag("--nominal-ints", g.load.integer_columns_nominal,
                  "Treat small integer CSV columns as nominal");
    cmd->add_option("--nominal-threshold", g.load.nominal_threshold,
                    "Max distinct integers for --nominal-ints (default 10)");
}

void add_distance_flag(CLI::App* cmd, GlobalOpts& g) {
    cmd->add_option("--distance", [&g](const std::vector<std::string>& v) {
            g.distance = frogsel::parse_distance_mode(v[0]);
            return true;
        }, "Frog distance: hamming (default) or posregion")
        ->type_name("MODE");
}

DecisionTable load(const std::string& path, const GlobalOpts& g) {
    return frogsel::load_table(path, frogsel::infer_format(path), g.load);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
        out << text << "\n";
    }
}

void add_override_flags(CLI::App* cmd, frogsel::SearchOverrides& o) {
    auto opt = [&cmd](const char* name, std::optional<std::size_t>& slot, const char* help) {
        cmd->add_option(name, [&slot](const std::vector<std::string>& v) {
                slot = static_cast<std::size_t>(std::stoull(v[0]));
                return true;
            }, help)
            ->type_name("N");
    };
    opt("--memeplexes", o.memeplexes, "B-SFLA: memeplex count m");
    opt("--frogs", o.frogs_per_memeplex, "B-SFLA: frogs per memeplex n");
    opt("--rounds", o.rounds, "B-SFLA: evolution rounds per memeplex N");
    opt("--submemeplex", o.submemeplex, "B-SFLA: submemeplex size q");
    opt("--s-max", o.s_max, "B-SFLA: maximum step size");
    opt("--max-shuffles", o.max_shuffles, "B-SFLA: shuffle limit");
    opt("--stall-shuffles", o.stall_shuffles, "B-SFLA: early stop after this many stalled shuffles");
    opt("--population", o.population, "GA: population size");
    opt("--generations", o.generations, "GA: generation count");
    opt("--particles", o.particles, "PSO: particle count");
    opt("--iterations", o.iterations, "PSO: iteration count");
}

std::string stats_human_table(const frogsel::FriedmanResult& fr, const frogsel::LiResult& li,
                              const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "Friedman: N=" << fr.n_datasets << " k=" << fr.n_algorithms
        << " statistic=" << frogsel::format_double(fr.statistic)
        << " p=" << frogsel::format_double(fr.p_value) << "\n";
    out << "average ranks:\n";
    for (std::size_t i = 0; i < fr.average_ranks.size(); ++i)
        out << "  " << names[i] << ": " << frogsel::format_double(fr.average_ranks[i]) << "\n";
    out << "Li post-hoc vs control '" << names[li.control]
        << "' (alpha=" << frogsel::format_double(li.alpha)
        << ", threshold=" << frogsel::format_double(li.threshold) << "):\n";
    for (const auto& c : li.comparisons)
        out << "  " << names[c.algorithm] << ": z=" << frogsel::format_double(c.z)
            << " p=" << frogsel::format_double(c.p)
            << " threshold=" << frogsel::format_double(c.threshold)
            << (c.rejected ? " REJECTED" : " not rejected") << "\n";
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimal-reduct feature selection with fuzzy-rough dependency and a binary "
                 "shuffled frog leaping search"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI-style config file; command-line flags override it");

    GlobalOpts g;

    // --- select ---------------------------------------------------------
    std::string sel_data, sel_algo = "bsfla", sel_out, sel_export;
    frogsel::SearchOverrides sel_overrides;
    auto* select = app.add_subcommand("select", "Run one algorithm on one dataset");
    select->add_option("dataset", sel_data, "CSV or ARFF decision table")->required();
    select->add_option("--algo", sel_algo, "bsfla (default), quickreduct, ga, or pso");
    select->add_option("--seed", g.seed, "RNG seed (default 0)");
    select->add_option("--jobs", g.jobs, "Threads for memeplex evolution");
    select->add_option("-o,--out", sel_out, "Write the report JSON here instead of stdout");
    select->add_option("--export", sel_export, "Also export the first reduct as CSV/ARFF");
    add_load_flags(select, g);
    add_distance_flag(select, g);
    add_override_flags(select, sel_overrides);

    // --- frdd -----------------------------------------------------------
    std::string frdd_data, frdd_mask, frdd_out;
    auto* frdd_cmd = app.add_subcommand("frdd", "Evaluate gamma' for a feature mask");
    frdd_cmd->add_option("dataset", frdd_data)->required();
    frdd_cmd->add_option("--mask", frdd_mask, "Bit string, e.g. 10110; default: all features");
    frdd_cmd->add_option("-o,--out", frdd_out);
    add_load_flags(frdd_cmd, g);

    // --- reduce ---------------------------------------------------------
    std::string red_data, red_mask, red_out, red_format = "csv";
    auto* reduce = app.add_subcommand("reduce", "Export the reduced dataset for a mask");
    reduce->add_option("dataset", red_data)->required();
    reduce->add_option("--mask", red_mask, "Bit string selecting the features")->required();
    reduce->add_option("-o,--out", red_out, "Output path")->required();
    reduce->add_option("--format", red_format, "csv (default) or arff");
    add_load_flags(reduce, g);

    // --- bench ----------------------------------------------------------
    std::vector<std::string> bench_data;
    std::string bench_algos = "bsfla", bench_seeds = "0", bench_out_dir;
    bool bench_proxy = false;
    std::size_t bench_folds = 10;
    frogsel::SearchOverrides bench_overrides;
    auto* bench = app.add_subcommand("bench", "Run a dataset x algorithm x seed grid");
    bench->add_option("datasets", bench_data, "One or more tables")->required();
    bench->add_option("--algos", bench_algos, "Comma list, e.g. bsfla,quickreduct,ga,pso");
    bench->add_option("--seeds", bench_seeds, "Comma list of seeds, e.g. 0,1,2");
    bench->add_option("--out-dir", bench_out_dir, "Directory for per-cell JSON and CSV summaries");
    bench->add_flag("--proxy", bench_proxy, "Add the 1-NN cross-validation accuracy column");
    bench->add_option("--folds", bench_folds, "Folds for the proxy accuracy (default 10)");
    bench->add_option("--jobs", g.jobs, "Worker pool size over cells");
    add_load_flags(bench, g);
    add_distance_flag(bench, g);
    add_override_flags(bench, bench_overrides);

    // --- stats ----------------------------------------------------------
    std::string stats_scores, stats_ranks, stats_out;
    std::size_t stats_n = 0;
    double stats_alpha = 0.05;
    std::string stats_missing = "error";
    auto* stats = app.add_subcommand("stats", "Friedman test and Li post-hoc on a score matrix");
    stats->add_option("scores", stats_scores,
                      "CSV: header row of algorithm names, one dataset per row");
    stats->add_option("--ranks", stats_ranks, "Inject average ranks directly (comma list)");
    stats->add_option("--datasets", stats_n, "Dataset count N when using --ranks");
    stats->add_option("--alpha", stats_alpha, "Significance level (default 0.05)");
    stats->add_option("--missing", stats_missing, "error (default), drop, or worst-rank");
    stats->add_option("-o,--out", stats_out);

    // --- oracle ---------------------------------------------------------
    std::string oracle_data, oracle_out;
    auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum for small tables (<= 20 features)");
    oracle->add_option("dataset", oracle_data)->required();
    oracle->add_option("-o,--out", oracle_out);
    add_load_flags(oracle, g);

    CLI11_PARSE(app, argc, argv);

    try {
        if (select->parsed()) {
            const DecisionTable table = load(sel_data, g);
            FrddEvaluator eval(table);
            const Algorithm algo = frogsel::parse_algorithm(sel_algo);
            const auto report =
                frogsel::run_algorithm(eval, algo, g.seed, g.distance, sel_overrides, g.jobs);
            emit(report.to_json(), sel_out);
            if (!sel_export.empty()) {
                if (report.reducts.empty()) throw std::runtime_error("no reduct to export");
                frogsel::export_reduced(table, report.reducts.front(), sel_export,
                                        frogsel::infer_format(sel_export));
            }
        } else if (frdd_cmd->parsed()) {
            const DecisionTable table = load(frdd_data, g);
            const Bitmask mask = frdd_mask.empty() ? Bitmask::all_set(table.feature_count())
                                                   : Bitmask::from_string(frdd_mask);
            const auto value = frogsel::frdd(table, mask);
            nlohmann::json j;
            j["table"] = nlohmann::json::parse(frogsel::table_summary_json(table));
            j["mask"] = mask.to_string();
            j["cardinality"] = mask.count();
            j["gamma_prime"] = value.gamma_prime;
            emit(j.dump(2), frdd_out);
        } else if (reduce->parsed()) {
            const DecisionTable table = load(red_data, g);
            const TableFormat fmt = red_format == "arff" ? TableFormat::Arff : TableFormat::Csv;
            frogsel::export_reduced(table, Bitmask::from_string(red_mask), red_out, fmt);
        } else if (bench->parsed()) {
            frogsel::RunSpec spec;
            spec.dataset_paths = bench_data;
            for (auto& name : CLI::detail::split(bench_algos, ','))
                spec.algorithms.push_back(frogsel::parse_algorithm(name));
            for (auto& s : CLI::detail::split(bench_seeds, ','))
                spec.seeds.push_back(std::stoull(s));
            spec.load = g.load;
            spec.distance = g.distance;
            spec.overrides = bench_overrides;
            spec.out_dir = bench_out_dir;
            spec.proxy = bench_proxy;
            spec.cv_folds = bench_folds;
            spec.jobs = g.jobs;
            const auto report = frogsel::run(spec);
            std::cout << report.aggregate_csv();
            if (bench_proxy && report.all_ok()) {
                std::cerr << "wins (proxy accuracy):\n";
                for (const auto& [name, wins] :
                     frogsel::wins_table(report, frogsel::WinMetric::ProxyAccuracy))
                    std::cerr << "  " << name << ": " << wins << "\n";
            }
            if (!report.all_ok()) {
                std::cerr << "some cells failed; see summary\n";
                return 1;
            }
        } else if (stats->parsed()) {
            frogsel::FriedmanResult fr;
            std::vector<std::string> names;
            if (!stats_ranks.empty()) {
                if (stats_n == 0) throw std::runtime_error("--ranks needs --datasets N");
                std::vector<double> ranks;
                for (auto& r : CLI::detail::split(stats_ranks, ',')) ranks.push_back(std::stod(r));
                fr = frogsel::friedman_from_ranks(ranks, stats_n);
                for (std::size_t i = 0; i < ranks.size(); ++i)
                    names.push_back("algo" + std::to_string(i));
            } else if (!stats_scores.empty()) {
                const auto matrix = frogsel::load_score_matrix(stats_scores);
                auto policy = frogsel::MissingScorePolicy::Error;
                if (stats_missing == "drop") policy = frogsel::MissingScorePolicy::DropDataset;
                else if (stats_missing == "worst-rank") policy = frogsel::MissingScorePolicy::WorstRank;
                else if (stats_missing != "error") throw std::runtime_error("bad --missing value");
                fr = frogsel::friedman(matrix, policy);
                names = matrix.algorithms;
            } else {
                throw std::runtime_error("stats: pass a score CSV or --ranks");
            }
            const std::size_t control = frogsel::best_rank_index(fr.average_ranks);
            const auto li = frogsel::li_posthoc(fr.average_ranks, fr.n_datasets, control, stats_alpha);

            nlohmann::json j;
            j["friedman"] = {{"average_ranks", fr.average_ranks},
                             {"statistic", fr.statistic},
                             {"p_value", fr.p_value},
                             {"datasets", fr.n_datasets},
                             {"algorithms", fr.n_algorithms}};
            nlohmann::json cmp = nlohmann::json::array();
            for (const auto& c : li.comparisons)
                cmp.push_back({{"algorithm", names[c.algorithm]},
                               {"z", c.z},
                               {"p", c.p},
                               {"threshold", c.threshold},
                               {"rejected", c.rejected}});
            j["li"] = {{"control", names[control]},
                       {"se", li.se},
                       {"threshold", li.threshold},
                       {"alpha", li.alpha},
                       {"comparisons", cmp}};
            emit(j.dump(2), stats_out);
            std::cerr << stats_human_table(fr, li, names);
        } else if (oracle->parsed()) {
            const DecisionTable table = load(oracle_data, g);
            FrddEvaluator eval(table);
            emit(frogsel::exhaustive_frontier(eval).to_json(), oracle_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
