#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "regsim/plant.hpp"
#include "regsim/presets.hpp"
#include "regsim/uncertainty.hpp"

namespace regsim {

enum class DisturbanceChannel { pv, load, vref };
enum class DisturbanceKind { step, white_noise_on };

/// One timed event of a disturbance program. For the voltage loop the load
/// channel acts as an additive disturbance at the generator output.
struct DisturbanceEvent {
    double time = 0.0;
    DisturbanceChannel channel = DisturbanceChannel::load;
    DisturbanceKind kind = DisturbanceKind::step;
    double magnitude = 0.0;    // pu, signed (steps)
    double noise_sigma = 0.0;  // pu (white-noise-on)
};

struct DisturbanceProgram {
    std::vector<DisturbanceEvent> events;
};

inline void validate(const DisturbanceProgram& p) {
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& e : p.events) {
        if (!std::isfinite(e.time) || e.time < 0.0)
            throw std::invalid_argument("DisturbanceProgram: event times must be finite and >= 0");
        if (e.time < prev)
            throw std::invalid_argument("DisturbanceProgram: event times must be non-decreasing");
        if (!std::isfinite(e.magnitude) || !std::isfinite(e.noise_sigma) || e.noise_sigma < 0.0)
            throw std::invalid_argument("DisturbanceProgram: bad magnitude or noise sigma");
        prev = e.time;
    }
}

enum class DelayLocation { measurement, control };

struct LoopSettings {
    double dt = 1e-3;        // s
    double t_end = 20.0;     // s
    double comm_delay = 0.0; // s; rounded to a whole number of samples
    std::uint64_t noise_seed = 1;
    DelayLocation delay_location = DelayLocation::measurement;
};

inline void validate(const LoopSettings& s) {
    if (!(s.dt > 0.0)) throw std::invalid_argument("LoopSettings: dt must be positive");
    if (!(s.t_end > 0.0)) throw std::invalid_argument("LoopSettings: t_end must be positive");
    if (s.comm_delay < 0.0) throw std::invalid_argument("LoopSettings: negative comm_delay");
}

struct ControllerConfig {
    std::string preset;      // empty means explicit gains below
    PidGains gains;
    bool dobc = false;
    double dobc_lambda = 0.01;
    int dobc_filter_order = 3;
    double dobc_gain = 1.0;  // feed-forward weight on the estimate; 0 = observe only
};

struct StochasticSettings {
    int samples = 200;
    int reduce_to = 10;
    BetaParams pv_dist{2.0, 5.0};
    double load_sigma_fraction = 0.03;  // sigma as a fraction of the load forecast
    std::string scenarios_csv;          // non-empty: import this set instead of sampling
};

/// One complete experiment description: which loop, plant parameters,
/// controller, disturbance program, loop settings and study parameters.
struct ScenarioConfig {
    SystemKind system = SystemKind::lfc;
    std::string plant_preset = "paper-appendix";
    PlantParams plant;
    ControllerConfig controller;
    DisturbanceProgram disturbances;
    LoopSettings loop;
    UncertaintyBudget budget = test_condition_budgets().back();  // worst condition by default
    StochasticSettings stochastic;
    std::vector<std::string> compare_presets;
    std::string compare_condition = "clean";  // clean | delay | noise
    std::string out_dir = "out";
};

/// Resolve the controller configuration to concrete gains + observer switch.
/// A preset supplies gains and its default observer setting; an explicit
/// dobc=true in the config can still enable the observer on a plain preset.
inline ControllerConfig resolve_controller(const ScenarioConfig& cfg) {
    ControllerConfig c = cfg.controller;
    if (!c.preset.empty()) {
        const auto& p = controller_preset(cfg.system, c.preset);
        c.gains = p.gains;
        c.dobc = p.dobc || c.dobc;
    }
    validate(c.gains);
    return c;
}

}  // namespace regsim
