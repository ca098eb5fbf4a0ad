#include <chrono>

#include "frogsel/baselines.hpp"

namespace frogsel {

ReductReport quickreduct(FrddEvaluator& eval) {
    constexpr double kGainTolerance = 1e-10;
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t L = eval.table().feature_count();
    const std::uint64_t evals_before = eval.evaluations();

    ReductReport report;
    report.algorithm = "quickreduct";
    report.feature_frequency.assign(L, 0);

    Bitmask current(L);
    double current_gamma = 0.0;  // the empty set carries no dependency
    report.trace.push_back({0.0, 0});
    std::string stop_reason = "no_gain";

    while (current.count() < L) {
        double best_gamma = current_gamma;
        std::size_t best_feature = L;
        for (std::size_t f = 0; f < L; ++f) {
            if (current.test(f)) continue;
            Bitmask candidate = current;
            candidate.set(f);
            const double g = eval.gamma(candidate);
            if (g > best_gamma) {  // strict ties keep the lowest index
                best_gamma = g;
                best_feature = f;
            }
        }
        if (best_feature == L || best_gamma - current_gamma <= kGainTolerance) break;
        current.set(best_feature);
        current_gamma = best_gamma;
        report.trace.push_back({current_gamma, current.count()});
        if (current.count() == L) stop_reason = "full_set";
    }

    report.best_fitness = current_gamma;
    report.best_cardinality = current.count();
    if (current.any()) {
        report.reducts.push_back(current);
        for (auto i : current.set_positions()) ++report.feature_frequency[i];
    } else {
        stop_reason = "no_gain_from_empty_set";
    }
    report.evaluations = eval.evaluations() - evals_before;
    report.stop_reason = stop_reason;
    report.config_echo = {
        {"gain_tolerance", "1e-10"},
        {"sigma_mode", to_string(eval.table().sigma_mode())},
        {"normalized", eval.table().normalized() ? "true" : "false"},
    };
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace frogsel
