#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace regsim {

/// Error-integral performance indices plus maximum overshoot, accumulated by
/// the trapezoid rule over a uniformly sampled error signal.
struct PerformanceIndices {
    double ise = 0.0;   // integral of e^2
    double itse = 0.0;  // integral of t*e^2
    double itae = 0.0;  // integral of t*|e|
    double iae = 0.0;   // integral of |e|
    double mo = 0.0;    // maximum overshoot
};

enum class OvershootConvention {
    absolute_peak,  // max |e|; frequency-deviation style
    above_final,    // max positive excursion of e; step-response style
};

inline PerformanceIndices compute_indices(std::span<const double> error, double dt,
                                          OvershootConvention mo_convention =
                                              OvershootConvention::absolute_peak) {
    if (error.empty()) throw std::invalid_argument("compute_indices: empty signal");
    if (!(dt > 0.0)) throw std::invalid_argument("compute_indices: dt must be positive");

    PerformanceIndices pi;
    auto peak = [&](double e) {
        pi.mo = mo_convention == OvershootConvention::absolute_peak
                    ? std::max(pi.mo, std::abs(e))
                    : std::max(pi.mo, e);
    };
    peak(error[0]);
    for (std::size_t k = 1; k < error.size(); ++k) {
        const double t0 = static_cast<double>(k - 1) * dt;
        const double t1 = static_cast<double>(k) * dt;
        const double e0 = error[k - 1], e1 = error[k];
        pi.ise += 0.5 * dt * (e0 * e0 + e1 * e1);
        pi.itse += 0.5 * dt * (t0 * e0 * e0 + t1 * e1 * e1);
        pi.iae += 0.5 * dt * (std::abs(e0) + std::abs(e1));
        pi.itae += 0.5 * dt * (t0 * std::abs(e0) + t1 * std::abs(e1));
        peak(e1);
    }
    if (mo_convention == OvershootConvention::above_final) pi.mo = std::max(pi.mo, 0.0);
    return pi;
}

inline constexpr std::array<const char*, 5> kIndexNames = {"itae", "iae", "ise", "itse", "mo"};

inline double index_value(const PerformanceIndices& pi, std::size_t which) {
    switch (which) {
        case 0: return pi.itae;
        case 1: return pi.iae;
        case 2: return pi.ise;
        case 3: return pi.itse;
        case 4: return pi.mo;
        default: throw std::out_of_range("index_value");
    }
}

/// Per-index 1-based ranks for a set of controllers; ties resolved by name so
/// the ordering is deterministic.
struct ControllerRanking {
    std::string name;
    PerformanceIndices indices;
    std::array<int, 5> rank{};  // rank[k] matches kIndexNames[k]
};

inline std::vector<ControllerRanking> rank_controllers(
    const std::vector<std::pair<std::string, PerformanceIndices>>& results) {
    if (results.size() < 2)
        throw std::invalid_argument("rank_controllers: need at least two controllers");

    std::vector<ControllerRanking> out;
    out.reserve(results.size());
    for (const auto& [name, pi] : results) out.push_back({name, pi, {}});

    for (std::size_t k = 0; k < kIndexNames.size(); ++k) {
        std::vector<std::size_t> order(out.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double va = index_value(out[a].indices, k);
            const double vb = index_value(out[b].indices, k);
            if (va != vb) return va < vb;
            return out[a].name < out[b].name;
        });
        for (std::size_t pos = 0; pos < order.size(); ++pos)
            out[order[pos]].rank[k] = static_cast<int>(pos) + 1;
    }
    return out;
}

}  // namespace regsim
