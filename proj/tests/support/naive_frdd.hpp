#pragma once

#include <algorithm>
#include <cmath>

#include "frogsel/bitmask.hpp"
#include "frogsel/dataset.hpp"

// Brute-force dependency degree used as the test oracle. Everything is
// spelled out with plain nested loops and deliberately shares no code with
// the library's evaluator.
namespace testsupport {

inline double naive_feature_sim(const frogsel::FeatureColumn& col, std::size_t x, std::size_t y) {
    if (col.kind == frogsel::FeatureKind::Nominal) return col.codes[x] == col.codes[y] ? 1.0 : 0.0;
    const double s = col.sigma;
    if (s <= 0.0) return 1.0;
    const double t1 = (col.reals[y] - (col.reals[x] - s)) / s;
    const double t2 = ((col.reals[x] + s) - col.reals[y]) / s;
    return std::max(0.0, std::min(std::min(t1, t2), 1.0));
}

inline double naive_subset_sim(const frogsel::DecisionTable& t, const frogsel::Bitmask& mask,
                               std::size_t x, std::size_t y) {
    double eta = 1.0;
    bool first = true;
    for (std::size_t f = 0; f < t.feature_count(); ++f) {
        if (!mask.test(f)) continue;
        const double s = naive_feature_sim(t.features()[f], x, y);
        eta = first ? s : std::max(eta + s - 1.0, 0.0);
        first = false;
    }
    return eta;
}

inline double naive_lower(const frogsel::DecisionTable& t, const frogsel::Bitmask& mask,
                          std::size_t x, std::size_t cls) {
    double inf = 1.0;
    for (std::size_t y = 0; y < t.objects(); ++y) {
        const double eta = naive_subset_sim(t, mask, x, y);
        const double mu = static_cast<std::size_t>(t.decision().labels[y]) == cls ? 1.0 : 0.0;
        inf = std::min(inf, std::min(1.0 - eta + mu, 1.0));
    }
    return inf;
}

inline double naive_frdd(const frogsel::DecisionTable& t, const frogsel::Bitmask& mask) {
    if (mask.none()) return 0.0;
    double sum = 0.0;
    for (std::size_t x = 0; x < t.objects(); ++x) {
        double pos = 0.0;
        for (std::size_t c = 0; c < t.decision().class_count(); ++c)
            pos = std::max(pos, naive_lower(t, mask, x, c));
        sum += pos;
    }
    return sum / static_cast<double>(t.objects());
}

}  // namespace testsupport
