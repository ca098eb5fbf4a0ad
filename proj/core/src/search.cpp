#include "frogsel/search.hpp"

#include <algorithm>
#include <charconv>

#include <json.hpp>

namespace frogsel {

void rank(std::vector<Frog>& frogs) { std::sort(frogs.begin(), frogs.end(), frog_rank_less); }

void collect_best_tied(const std::vector<Frog>& candidates, std::size_t feature_count,
                       ReductReport& report) {
    report.reducts.clear();
    report.feature_frequency.assign(feature_count, 0);
    if (candidates.empty()) {
        report.best_fitness = 0.0;
        report.best_cardinality = 0;
        return;
    }
    const Frog* best = &candidates.front();
    for (const auto& f : candidates)
        if (pair_better(f.fitness, f.cardinality, best->fitness, best->cardinality)) best = &f;
    report.best_fitness = best->fitness;
    report.best_cardinality = best->cardinality;

    for (const auto& f : candidates) {
        if (f.fitness != best->fitness || f.cardinality != best->cardinality) continue;
        if (std::find(report.reducts.begin(), report.reducts.end(), f.mask) == report.reducts.end())
            report.reducts.push_back(f.mask);
    }
    std::sort(report.reducts.begin(), report.reducts.end(),
              [](const Bitmask& a, const Bitmask& b) { return a.lex_less(b); });
    for (const auto& m : report.reducts)
        for (auto i : m.set_positions()) ++report.feature_frequency[i];
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string ReductReport::to_json(int indent) const {
    nlohmann::json j;
    j["algorithm"] = algorithm;
    nlohmann::json masks = nlohmann::json::array();
    for (const auto& m : reducts) masks.push_back(m.to_string());
    j["reducts"] = std::move(masks);
    j["best_fitness"] = best_fitness;
    j["best_cardinality"] = best_cardinality;
    j["feature_frequency"] = feature_frequency;
    nlohmann::json tr = nlohmann::json::array();
    for (std::size_t i = 0; i < trace.size(); ++i)
        tr.push_back({{"shuffle", i}, {"fitness", trace[i].fitness}, {"cardinality", trace[i].cardinality}});
    j["trace"] = std::move(tr);
    j["evaluations"] = evaluations;
    j["stop_reason"] = stop_reason;
    j["config_echo"] = config_echo;
    j["timing"] = {{"wall_time_ms", wall_time_ms}};
    return j.dump(indent);
}

}  // namespace frogsel
