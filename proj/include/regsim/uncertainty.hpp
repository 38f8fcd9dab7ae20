#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "regsim/csv.hpp"
#include "regsim/rng.hpp"

namespace regsim {

/// Polyhedral deviation budget: multiplicative bounds around the forecast for
/// PV output and load, plus the aggregate-ratio bounds. The ratio bounds are
/// carried for completeness but unused for single-step studies.
struct UncertaintyBudget {
    double pv_lo = 1.0;    // gamma_pv lower
    double pv_hi = 1.0;    // gamma_pv upper
    double load_lo = 1.0;  // gamma_l lower
    double load_hi = 1.0;  // gamma_l upper
    double ratio_lo = 0.0;
    double ratio_hi = 1e9;
    int label = 0;
};

inline void validate(const UncertaintyBudget& b) {
    if (!(b.pv_lo <= 1.0 && 1.0 <= b.pv_hi))
        throw std::invalid_argument("UncertaintyBudget: pv bounds must bracket 1");
    if (!(b.load_lo <= 1.0 && 1.0 <= b.load_hi))
        throw std::invalid_argument("UncertaintyBudget: load bounds must bracket 1");
    if (!(b.ratio_lo <= b.ratio_hi))
        throw std::invalid_argument("UncertaintyBudget: ratio bounds out of order");
}

/// Forecast operating point on the thermal base the deviations scale from.
struct OperatingPoint {
    double pv_pu = 0.375;
    double load_pu = 0.5;
};

/// Worst-vertex step magnitudes: a PV drop of dp_pv together with a load rise
/// of dp_load (both reported positive; the simulator applies -dp_pv / +dp_load).
struct WorstCaseStep {
    double dp_pv = 0.0;
    double dp_load = 0.0;
    int label = 0;
};

/// The 12 built-in test-condition budgets (all pairings of +-5/10/15% PV with
/// +-5/10/15/20% load used for the worst-case study).
inline std::vector<UncertaintyBudget> test_condition_budgets() {
    return {
        {0.95, 1.05, 0.95, 1.05, 0.0, 1e9, 1},
        {0.90, 1.10, 0.90, 1.10, 0.0, 1e9, 2},
        {0.85, 1.15, 0.85, 1.15, 0.0, 1e9, 3},
        {0.95, 1.05, 0.80, 1.20, 0.0, 1e9, 4},
        {0.90, 1.10, 0.95, 1.05, 0.0, 1e9, 5},
        {0.85, 1.15, 0.90, 1.10, 0.0, 1e9, 6},
        {0.95, 1.05, 0.85, 1.15, 0.0, 1e9, 7},
        {0.90, 1.10, 0.80, 1.20, 0.0, 1e9, 8},
        {0.85, 1.15, 0.95, 1.05, 0.0, 1e9, 9},
        {0.95, 1.05, 0.90, 1.10, 0.0, 1e9, 10},
        {0.90, 1.10, 0.85, 1.15, 0.0, 1e9, 11},
        {0.85, 1.15, 0.80, 1.20, 0.0, 1e9, 12},
    };
}

/// Worst vertex of the budget polyhedron for the frequency objective: the
/// deviation grows with the net power deficit, so PV sits at its lower bound
/// and load at its upper bound. Closed form, no LP needed.
inline WorstCaseStep worst_case_select(const UncertaintyBudget& b, const OperatingPoint& op = {}) {
    validate(b);
    return {(1.0 - b.pv_lo) * op.pv_pu, (b.load_hi - 1.0) * op.load_pu, b.label};
}

/// Worst-case steps for all built-in test conditions.
inline std::vector<WorstCaseStep> test_condition_grid(const OperatingPoint& op = {}) {
    std::vector<WorstCaseStep> out;
    for (const auto& b : test_condition_budgets()) out.push_back(worst_case_select(b, op));
    return out;
}

struct BetaParams {
    double alpha = 2.0;
    double beta = 5.0;
};

struct NormalParams {
    double mean = 0.5;
    double sigma = 0.015;
};

/// n i.i.d. Beta(alpha, beta) draws on [0, 1]; identical for identical seeds.
inline std::vector<double> sample_beta(const BetaParams& p, int n, std::uint64_t seed) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0))
        throw std::invalid_argument("sample_beta: shape parameters must be positive");
    if (n <= 0) throw std::invalid_argument("sample_beta: n must be positive");
    Rng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (double& v : out) v = rng.beta(p.alpha, p.beta);
    return out;
}

/// n i.i.d. Normal(mean, sigma^2) draws; identical for identical seeds.
inline std::vector<double> sample_normal(const NormalParams& p, int n, std::uint64_t seed) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("sample_normal: sigma must be positive");
    if (n <= 0) throw std::invalid_argument("sample_normal: n must be positive");
    Rng rng(seed);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (double& v : out) v = rng.normal(p.mean, p.sigma);
    return out;
}

/// One sampled single-period scenario: signed step deviations and its
/// probability mass.
struct Scenario {
    int id = 0;
    double dp_pv = 0.0;    // signed deviation from the PV forecast, pu
    double dp_load = 0.0;  // signed deviation from the load forecast, pu
    double probability = 0.0;
};

struct ScenarioSet {
    std::vector<Scenario> scenarios;
    bool reduced = false;
};

/// Monte Carlo scenario generation inside a budget box: Beta draws are mapped
/// affinely onto [pv_lo, pv_hi] * pv forecast and Normal load draws are
/// clipped into [load_lo, load_hi] * load forecast, so every scenario stays
/// dominated by the worst-case vertex.
inline ScenarioSet sample_scenarios(const UncertaintyBudget& budget, const OperatingPoint& op,
                                    const BetaParams& pv_dist, const NormalParams& load_dist,
                                    int n, std::uint64_t seed) {
    validate(budget);
    if (n <= 0) throw std::invalid_argument("sample_scenarios: n must be positive");
    Rng rng(seed);
    ScenarioSet set;
    set.scenarios.reserve(static_cast<std::size_t>(n));
    const double p = 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
        const double y = rng.beta(pv_dist.alpha, pv_dist.beta);
        const double gamma_pv = budget.pv_lo + (budget.pv_hi - budget.pv_lo) * y;
        double load = rng.normal(load_dist.mean, load_dist.sigma);
        load = std::clamp(load, budget.load_lo * op.load_pu, budget.load_hi * op.load_pu);
        set.scenarios.push_back({i, (gamma_pv - 1.0) * op.pv_pu, load - op.load_pu, p});
    }
    return set;
}

namespace detail {

inline double scenario_distance(const Scenario& a, const Scenario& b) {
    const double d1 = a.dp_pv - b.dp_pv;
    const double d2 = a.dp_load - b.dp_load;
    return std::sqrt(d1 * d1 + d2 * d2);
}

}  // namespace detail

/// Backward scenario reduction: repeatedly delete the scenario whose
/// probability-weighted distance to its nearest neighbour is smallest and
/// hand its probability to that neighbour, until target_count remain.
inline ScenarioSet backward_reduce(const ScenarioSet& set, int target_count) {
    if (set.scenarios.empty()) throw std::invalid_argument("backward_reduce: empty scenario set");
    if (target_count < 1 || target_count > static_cast<int>(set.scenarios.size()))
        throw std::invalid_argument("backward_reduce: target count out of range");

    ScenarioSet out = set;
    auto& s = out.scenarios;
    while (static_cast<int>(s.size()) > target_count) {
        std::size_t best_i = 0, best_j = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::size_t nearest = i;
            double dmin = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (j == i) continue;
                const double d = detail::scenario_distance(s[i], s[j]);
                if (d < dmin) { dmin = d; nearest = j; }
            }
            const double cost = s[i].probability * dmin;
            if (cost < best_cost) { best_cost = cost; best_i = i; best_j = nearest; }
        }
        s[best_j].probability += s[best_i].probability;
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(best_i));
    }
    // guard against drift from repeated transfers
    double total = 0.0;
    for (const auto& sc : s) total += sc.probability;
    for (auto& sc : s) sc.probability /= total;
    out.reduced = true;
    return out;
}

inline void write_scenarios_csv(const std::string& path, const ScenarioSet& set) {
    CsvTable t;
    t.header = {"scenario_id", "dP_pv_pu", "dP_load_pu", "probability"};
    for (const auto& s : set.scenarios)
        t.rows.push_back({std::to_string(s.id), format_number(s.dp_pv),
                          format_number(s.dp_load), format_number(s.probability)});
    write_csv(path, t);
}

inline ScenarioSet read_scenarios_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    const std::vector<std::string> expected = {"scenario_id", "dP_pv_pu", "dP_load_pu",
                                               "probability"};
    if (t.header != expected)
        throw std::runtime_error("scenario CSV: unexpected header in " + path);
    ScenarioSet set;
    for (const auto& row : t.rows) {
        if (row.size() != 4)
            throw std::runtime_error("scenario CSV: malformed row in " + path);
        set.scenarios.push_back({std::stoi(row[0]), parse_number(row[1]), parse_number(row[2]),
                                 parse_number(row[3])});
    }
    return set;
}

}  // namespace regsim
